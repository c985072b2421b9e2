"""Build the optional compiled kernel; the package works without it."""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("affschur._kernels", ["src/affschur/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except ImportError:  # no Cython: the pure-Python kernel is used at import time
    pass

setup(ext_modules=ext_modules)
