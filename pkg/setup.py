"""Builds the optional compiled kernel.

The package works without the extension (a numpy fallback is selected at
import time); building it makes HNSW construction and n-gram hashing roughly
an order of magnitude faster. If Cython or a C compiler is missing the build
degrades to pure Python instead of failing.
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "devicedesk._kernel._hot",
                ["src/devicedesk/_kernel/_hot.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
