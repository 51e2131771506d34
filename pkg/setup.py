"""Build script: compiles the optional fast kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time), so any failure to build it is
downgraded to a warning instead of aborting the install.
"""

import os
import sys
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


PYX = os.path.join("src", "sleepcolor", "_kernels", "_speed.pyx")
C_SRC = os.path.join("src", "sleepcolor", "_kernels", "_speed.c")


def make_extensions():
    if os.environ.get("SLEEPCOLOR_NO_EXT"):
        return []
    source = None
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None and os.path.exists(PYX):
        ext = Extension(
            "sleepcolor._kernels._speed",
            [PYX],
            extra_compile_args=["-O3"],
        )
        return cythonize([ext], language_level=3)
    if os.path.exists(C_SRC):
        source = C_SRC
    if source is None:
        return []
    return [
        Extension(
            "sleepcolor._kernels._speed",
            [source],
            extra_compile_args=["-O3"],
        )
    ]


class OptionalBuildExt(build_ext):
    """build_ext that tolerates a missing compiler toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            warnings.warn(
                f"fast kernel extension not built ({exc}); "
                "falling back to the pure-Python kernel",
                stacklevel=1,
            )

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(
                f"fast kernel extension {ext.name} not built ({exc}); "
                "falling back to the pure-Python kernel",
                stacklevel=1,
            )


setup(
    ext_modules=make_extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
