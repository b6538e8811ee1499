"""Build script: compiles the optional Monte Carlo counting kernel.

The package is fully functional without the compiled extension (a numpy
fallback is selected at import time), so any build failure here downgrades
to a pure-Python install instead of aborting.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def make_extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    flags = []
    if not sys.platform.startswith("win"):
        # -ffp-contract=off keeps the C arithmetic bit-identical to the
        # numpy fallback (no FMA contraction in the accumulation loop).
        flags = ["-O3", "-ffp-contract=off"]
    ext = Extension(
        "ccl._angle_kernel",
        sources=["src/ccl/_angle_kernel.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=flags,
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


class optional_build_ext(build_ext):
    """Build the extension if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"ccl: skipping compiled kernel ({exc}); "
                  "using pure-Python fallback", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"ccl: failed to build {ext.name} ({exc}); "
                  "using pure-Python fallback", file=sys.stderr)


setup(ext_modules=make_extensions(), cmdclass={"build_ext": optional_build_ext})
