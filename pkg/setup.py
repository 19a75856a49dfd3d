"""Build the optional Cython kernels.

The package works without them: ``chapterforge.kernels`` falls back to the
pure-Python implementation when the extension is missing. Set
``CHAPTERFORGE_NO_EXT=1`` to skip compilation entirely.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CHAPTERFORGE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("chapterforge._ckernels", ["src/chapterforge/_ckernels.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)
