"""Hot numerical kernels.

The weighted-Lasso coordinate-descent sweep dominates the runtime of the
replication loops, so it is implemented twice: a Cython extension (built by
setup.py) and a pure-numpy fallback with identical semantics.  The compiled
version is preferred at import time; set SPARSEDENSITY_PURE_PYTHON=1 to force
the fallback (used by the kernel benchmark and the equivalence tests).
"""

import os

from ._py import cd_sweeps as cd_sweeps_py

if os.environ.get("SPARSEDENSITY_PURE_PYTHON"):
    cd_sweeps = cd_sweeps_py
    KERNEL_BACKEND = "python"
else:
    try:
        from ._cd import cd_sweeps  # type: ignore[no-redef]

        KERNEL_BACKEND = "cython"
    except ImportError:
        cd_sweeps = cd_sweeps_py
        KERNEL_BACKEND = "python"

__all__ = ["cd_sweeps", "cd_sweeps_py", "KERNEL_BACKEND"]
