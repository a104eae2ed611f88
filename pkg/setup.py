import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator extension if possible, fall back to pure Python.

    The package selects the backend at import time, so a failed compile only
    costs speed, never correctness.
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print("WARNING: compiled core unavailable (%s); "
                  "using pure-Python backend" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print("WARNING: failed to build %s (%s); "
                  "using pure-Python backend" % (ext.name, exc))


ext_modules = []
if (os.environ.get("BOLTZMIX_NO_EXT") != "1"
        and os.path.exists("src/boltzmix/_core.pyx")):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "boltzmix._core",
                    sources=["src/boltzmix/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    # Plain -O3 on purpose: no -march=native / -ffast-math,
                    # so the compiled core performs the same IEEE operation
                    # sequence as the pure-Python backend and the two stay
                    # bit-identical.
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API",
                                    "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError as exc:
        print("WARNING: Cython/numpy unavailable at build time (%s); "
              "building without the compiled core" % exc)

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": optional_build_ext},
)
