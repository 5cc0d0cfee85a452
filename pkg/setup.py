"""Builds the optional compiled kernel; without Cython the package stays pure Python."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("PHOML_PURE"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            ["src/phoml/_ckernel.pyx"],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )

setup(ext_modules=ext_modules)
