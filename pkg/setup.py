import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; slecoef.kernels falls back
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("SLECOEF_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "slecoef._core",
                ["src/slecoef/_core.pyx"],
                include_dirs=[np.get_include()],
                # contraction would make compiled and fallback kernels round differently
                extra_compile_args=["-O3", "-ffp-contract=off", "-fcx-limited-range"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
