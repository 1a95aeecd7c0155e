"""Build hook for the optional compiled kernel extension.

The package works without the extension (a pure-Python fallback is picked
at import time); building it just makes the schedule/GAE inner loops fast.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("leosim._kernels", ["src/leosim/_kernels.pyx"])],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
