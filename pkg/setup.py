"""Build script: compiles the optional accelerator extension when possible.

The package is fully functional without the extension; k3ade.kernels falls
back to the pure-Python implementation at import time if the compiled module
is absent (or if K3ADE_PURE=1 is set).  Set K3ADE_NO_EXT=1 to skip the
compile step entirely.
"""

import os

from setuptools import setup

ext_modules = []
pyx = os.path.join("src", "k3ade", "_core.pyx")
if not os.environ.get("K3ADE_NO_EXT") and os.path.exists(pyx):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [pyx],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
