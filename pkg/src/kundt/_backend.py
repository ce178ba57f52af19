"""Kernel selection: the compiled extension when it imports, else pure Python.

Set ``KUNDT_PURE_PYTHON=1`` to force the fallback (used by the test suite to
exercise both paths and by the benchmark to compare them).
"""

import os

from . import _kernels_py

NAME = "python"
kernels = _kernels_py

if os.environ.get("KUNDT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        NAME = "compiled"


def use(name):
    """Switch backends at runtime (``"compiled"`` or ``"python"``)."""
    global kernels, NAME
    if name == "python":
        kernels, NAME = _kernels_py, "python"
    elif name == "compiled":
        from . import _kernels as _compiled
        kernels, NAME = _compiled, "compiled"
    else:
        raise ValueError(name)


def compiled_available():
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True
