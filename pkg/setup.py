import sys

from setuptools import Extension, setup

# The compiled kernels are an optional speedup; the package falls back to
# the pure-Python implementations in grassver._kernels_py if the build
# fails or Cython is unavailable.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "grassver._kernels_c",
                ["src/grassver/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    print("Cython not available; installing with pure-Python kernels only",
          file=sys.stderr)

setup(ext_modules=ext_modules)
