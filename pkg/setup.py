"""Build the optional compiled kernels.

    pip install -e . --no-build-isolation

If Cython or a C compiler is missing the package still installs and runs on
the pure-Python kernels.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("eyefree._ckernels", ["src/eyefree/_ckernels.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
