import os

import numpy as np
from setuptools import Extension, setup

# PHIKCORR_NO_EXT=1 builds a pure-Python install.
ext_modules = []
if not os.environ.get("PHIKCORR_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "phikcorr._kernels",
                    ["src/phikcorr/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
