"""Build script: compiles the optional Cython evaluation kernel.

The package works without the extension (a numpy fallback is selected at
import time), so any failure here degrades to a pure-Python install.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "torusflow._kernels._evalc",
                sources=["src/torusflow/_kernels/_evalc.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
