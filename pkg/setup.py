"""Build hook: compile the Cython kernel core when a toolchain allows.

The package is fully functional without the extension (a NumPy fallback
is selected at import time), so any failure here degrades the build to
pure Python instead of aborting it.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/revpair2d/_core.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  #pragma: no cover - toolchain-dependent
    sys.stderr.write(
        "revpair2d: Cython core not built (%s); the pure-Python backend "
        "will be used\n" % exc)

setup(ext_modules=ext_modules)
