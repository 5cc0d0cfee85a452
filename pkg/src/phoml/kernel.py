"""Backend selection for the binder kernel.

The compiled extension is used when it was built and ``PHOML_PURE`` is not
set; otherwise the pure-Python implementation is imported.
"""

import os

if os.environ.get("PHOML_PURE"):
    from ._pykernel import (  # noqa: F401
        BACKEND, abstract, free_names, instantiate, locally_closed, size, substitute,
    )
else:
    try:
        from ._ckernel import (  # noqa: F401
            BACKEND, abstract, free_names, instantiate, locally_closed, size, substitute,
        )
    except ImportError:
        from ._pykernel import (  # noqa: F401
            BACKEND, abstract, free_names, instantiate, locally_closed, size, substitute,
        )
