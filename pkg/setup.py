from setuptools import setup
from setuptools.extension import Extension

# The compiled kernels are optional: the package falls back to the pure
# Python implementations in sidforms._pykernels when the extension is
# missing (see sidforms.kernels).
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "sidforms._ckernels",
                ["src/sidforms/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
