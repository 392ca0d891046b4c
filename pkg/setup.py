"""Build script for the optional compiled kernel core.

The package works without the extension (a pure-numpy fallback is selected at
import time), so a failed compile downgrades to a warning instead of aborting
the install.
"""

import warnings

from setuptools import setup


def _extensions():
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    return cythonize(
        [
            Extension(
                "text2traffic.kernels._fastkern",
                ["src/text2traffic/kernels/_fastkern.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )


try:
    setup(ext_modules=_extensions())
except Exception as exc:  # compiler or Cython missing: install pure-python
    warnings.warn(f"compiled kernels skipped ({exc}); using pure-numpy fallback")
    setup()
