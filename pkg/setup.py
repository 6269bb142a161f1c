"""Build script for the optional compiled kernels.

The package is fully functional without the extension (pure-Python fallbacks
are selected at import time); building it makes persistence reduction and the
union-find transition scan fast enough for the larger experiments.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CKNNTDA_SKIP_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "cknntda._speedups",
                    sources=["src/cknntda/_speedups.pyx"],
                    include_dirs=[np.get_include()],
                    language="c++",
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
