"""Builds the optional compiled kernel backend.

The package works without it (vomm._kernels falls back to the pure-Python
module at import), so a missing Cython only means a slower install, not a
failed one.  Set VOMM_SKIP_NATIVE=1 to build pure-only on purpose.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("VOMM_SKIP_NATIVE"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "vomm._kernels._native",
                    ["src/vomm/_kernels/_native.pyx"],
                    language="c++",
                    extra_compile_args=["-O2"],
                )
            ],
            language_level="3",
        )

setup(ext_modules=ext_modules)
