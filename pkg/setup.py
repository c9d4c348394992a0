import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qsl_dephasing._kernels_cy",
                ["src/qsl_dephasing/_kernels_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-Python install; the package falls back to the numpy kernels.
    ext_modules = []

setup(ext_modules=ext_modules)
