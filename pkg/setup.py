"""Build script: compiles the optional fingerprint extension when Cython is available.

The package works without the extension (a pure-Python fallback is selected
at import time); the compiled kernel only makes deduplication fast.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "ocrcorpus._fpcore",
                ["src/ocrcorpus/_fpcore.pyx"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
