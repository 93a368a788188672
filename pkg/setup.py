import numpy
from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the pure
# numpy implementations in magnet._kernels_py when the extension is absent.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "magnet._speedups",
                ["src/magnet/_speedups.pyx"],
                extra_compile_args=["-O3"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
