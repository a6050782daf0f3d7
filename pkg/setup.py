import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("QUENCH1D_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "quench1d._core",
                ["src/quench1d/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
