import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("HELMOP_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "helmop._kernels._fast",
                    ["src/helmop/_kernels/_fast.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # No Cython available: install pure-Python only; the package selects
        # the numpy fallback kernels at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
