"""Build script for the optional Cython kernels.

The package works without the compiled extension: sparsedensity._kernels
falls back to a pure-numpy implementation when the import fails.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "sparsedensity._kernels._cd",
                ["src/sparsedensity/_kernels/_cd.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3", "boundscheck": False,
                             "wraparound": False, "cdivision": True},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
