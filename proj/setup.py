import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "soq._soq",
    sorted(glob.glob("src/*.cpp")) + ["python/soq_module.cpp"],
    include_dirs=["include", "src", "vendor", "/usr/include/eigen3"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
