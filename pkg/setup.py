import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("PPCBANDIT_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "ppcbandit._loops",
                    ["src/ppcbandit/_loops.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # no Cython at build time: install pure-python only, the package
        # falls back to the slow round loop at import
        ext_modules = []

setup(ext_modules=ext_modules)
