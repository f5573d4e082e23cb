"""Build the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the census kernels faster.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        ["src/gaugeorbits/_kernels/_core.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
