"""Builds the optional Cython Wigner kernel; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("LQRES_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("lqreservoir._wigner_kernel", ["src/lqreservoir/_wigner_kernel.pyx"],
                       include_dirs=[np.get_include()], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
