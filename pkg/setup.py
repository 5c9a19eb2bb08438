"""Build script: compiles the optional Cython search kernel.

The package works without the extension (a numpy fallback is selected at
import time); the extension makes the big pair-enumeration runs ~20x faster.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mubforge._kernels_cy",
                ["src/mubforge/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
