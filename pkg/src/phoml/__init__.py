"""Reference implementation of a higher-order minimal logic with extensional equality."""

from .kernel import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
