"""Build script.

The graph kernels (breadth-first levels and weighted Dijkstra over CSR
adjacency) exist twice: a Cython extension and a pure-Python fallback with
the same signatures.  If Cython or a C++ toolchain is missing the extension
is simply skipped and the package runs on the fallback; set COARSEKIT_PURE=1
to force that even when a compiler is available.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("COARSEKIT_PURE") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "coarsekit.kernels._ckern",
                    ["src/coarsekit/kernels/_ckern.pyx"],
                    language="c++",
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O2"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
