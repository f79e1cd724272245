"""Builds the optional compiled kernel extension.

The package works without it (a numpy fallback is selected at import), so
any failure to cythonize or compile is demoted to a warning.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "roughdyn.kernels._fastkernels",
                ["src/roughdyn/kernels/_fastkernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover
    warnings.warn(f"compiled kernels skipped: {exc}")

setup(ext_modules=ext_modules)
