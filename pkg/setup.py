"""Build the optional compiled embedding kernel.

The package works without it: tracemotif._kernels falls back to the pure
Python implementation when the extension is absent or fails to build.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tracemotif._kernels._embed_cy",
                ["src/tracemotif/_kernels/_embed_cy.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
