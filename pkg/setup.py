"""Build hook: compiles the oracle's evaluation kernel with Cython when available.

The package is pure Python; the extension is an optional accelerator. Any
failure here (no Cython, no C compiler) leaves the pure-Python kernel in
place and the build still succeeds.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/dholc/oracle/_evalcore_cy.pyx"],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except Exception:
    ext_modules = []


class _OptionalBuildExt:
    pass


if ext_modules:
    from setuptools.command.build_ext import build_ext

    class optional_build_ext(build_ext):  # noqa: N801
        def run(self):
            try:
                super().run()
            except Exception:
                self.extensions = []

        def build_extension(self, ext):
            try:
                super().build_extension(ext)
            except Exception:
                pass

    setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
else:
    setup()
