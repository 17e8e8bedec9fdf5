import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "taildep._kernels_cy",
                ["src/taildep/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Source distributions without Cython fall back to the pure-numpy kernels.
    ext_modules = []

setup(ext_modules=ext_modules)
