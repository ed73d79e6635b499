import sys

from setuptools import Extension, find_packages, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the Cython kernels if possible, otherwise fall back silently.

    The package selects a pure-Python implementation at import time when the
    extension is missing, so a failed native build must not fail the install.
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping compiled kernels ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc})", file=sys.stderr)


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("fuchs2._ckernels", ["src/fuchs2/_ckernels.pyx"])],
        language_level="3",
    )
except ImportError:
    extensions = []

# metadata duplicated from pyproject.toml so setuptools < 61 (no [project]
# table support) still produces a complete install
setup(
    name="fuchs2",
    version="0.1.0",
    description="Decide and certify which finite 2-groups occur as unit "
                "groups of finite rings",
    python_requires=">=3.10",
    package_dir={"": "src"},
    packages=find_packages("src"),
    entry_points={"console_scripts": ["fuchs2 = fuchs2.cli:main"]},
    ext_modules=extensions,
    cmdclass={"build_ext": OptionalBuildExt},
)
