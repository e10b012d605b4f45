from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "morseosc.kernels._rk",
                ["src/morseosc/kernels/_rk.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython: install pure-Python only; the package falls back to the
    # interpreted kernels at import time.
    extensions = []

setup(ext_modules=extensions)
