"""Build script: compiles the optional enumeration kernel.

The package works without the compiled extension (a pure-Python fallback
is selected at import time), so a failed extension build is non-fatal.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/ctsynth/_kernel.pyx",
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.optional = True
        ext.extra_compile_args = ["-O3"]
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
