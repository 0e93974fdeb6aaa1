from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("timbreid.kernels._fast", ["src/timbreid/kernels/_fast.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-Python kernels are selected at import time when the extension
    # is missing, so the package still works without Cython.
    ext_modules = []

setup(ext_modules=ext_modules)
