"""Build script: compiles the optional co-occurrence counting extension.

The package works without the extension (a numpy fallback is selected at
import time); set SIFAUDIT_SKIP_EXT=1 to force a pure-Python install.
"""
import os

from setuptools import setup
from setuptools.extension import Extension

extensions = []
if os.environ.get("SIFAUDIT_SKIP_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "sifaudit.cooccurrence._window_kernel",
                    ["src/sifaudit/cooccurrence/_window_kernel.pyx"],
                    language="c++",
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3", "-std=c++11"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=extensions)
