"""Builds the optional compiled search kernel; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("KSFORGE_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("ksforge.colorings._kernel", ["src/ksforge/colorings/_kernel.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
