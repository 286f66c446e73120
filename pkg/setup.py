"""Build script: compiles the optional Cython kernel when Cython + a C
compiler are available, otherwise installs pure-Python only (the package
falls back to the numpy kernels at import time).

Build in place for development:  python setup.py build_ext --inplace
"""
from setuptools import setup

try:
    from setuptools import Extension
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "floquet_echo.backends._core",
                ["src/floquet_echo/backends/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
