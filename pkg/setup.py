"""Build script: compiles the optional LZW extension.

The package works without the extension (a pure-Python codec is selected at
import time), so a failed compile only costs speed, not functionality.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or Cython missing
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        sys.stderr.write(
            "WARNING: building the C extension failed (%s); "
            "installing with the pure-Python codec only.\n" % exc
        )


def extensions():
    if os.environ.get("ARTCOMPLEXITY_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "artcomplexity.codec._lzwc",
                sources=["src/artcomplexity/codec/_lzwc.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
