import os

import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: combforge.kernels falls back to numpy
# when the extension is missing.
ext_modules = []
if os.environ.get("COMBFORGE_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "combforge._kernels",
            ["src/combforge/_kernels.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            optional=True,
        )
        ext_modules = cythonize(
            [ext],
            language_level=3,
            compiler_directives={"boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
