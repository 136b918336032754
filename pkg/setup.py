from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # The compiled kernel is optional; the package falls back to the pure
    # NumPy implementation when the extension is absent.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("qlandscape._speedups", ["src/qlandscape/_speedups.pyx"])],
        language_level="3",
    )

setup(ext_modules=ext_modules)
