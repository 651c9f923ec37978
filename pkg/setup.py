"""Build script with an optional compiled kernel.

The Walsh-Hadamard butterfly has a Cython implementation compiled here when a
C toolchain and Cython are available. The build must never hard-fail on a
missing compiler: the package falls back to the numpy kernel at import time,
so extension build errors are downgraded to warnings.
"""
from __future__ import annotations

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def extensions() -> list[Extension]:
    try:
        from Cython.Build import cythonize
    except ImportError as exc:
        warnings.warn(f"Cython unavailable ({exc}); building without the compiled kernel")
        return []
    ext = Extension(
        "phaseboost._fwht",
        ["src/phaseboost/_fwht.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level="3")


class OptionalBuildExt(build_ext):
    def run(self) -> None:
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"compiled kernel build failed ({exc}); the numpy kernel will be used")

    def build_extension(self, ext: Extension) -> None:
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernel build failed ({exc}); the numpy kernel will be used")


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
