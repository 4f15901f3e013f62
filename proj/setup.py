from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "uict._core",
    sources=[
        "src/boundary_chain.cpp",
        "src/branching.cpp",
        "src/diffusion.cpp",
        "src/experiments.cpp",
        "src/io.cpp",
        "src/stats.cpp",
        "src/triangulation.cpp",
        "python/bindings.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
