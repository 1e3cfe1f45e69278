"""Build script: compiles the optional Cython core.

The package works without the extension (a numpy fallback is selected at
import time), so a failed or skipped build is not fatal.  Set
COLMEDIAN_SKIP_EXT=1 to force a pure-Python install.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("COLMEDIAN_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "colmedian._core",
                    ["src/colmedian/_core.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
