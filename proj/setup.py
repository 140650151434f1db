import subprocess

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    try:
        out = subprocess.run(
            ["pkg-config", "--cflags-only-I", "eigen3"],
            capture_output=True,
            text=True,
            check=True,
        ).stdout
        for token in out.split():
            if token.startswith("-I"):
                return token[2:]
    except (OSError, subprocess.CalledProcessError):
        pass
    return "/usr/include/eigen3"


core = Pybind11Extension(
    "bsloc._core",
    sources=[
        "bindings/module.cpp",
        "src/model.cpp",
        "src/solver.cpp",
        "src/nnls.cpp",
        "src/closed_form.cpp",
        "src/constrained.cpp",
        "src/verify.cpp",
        "src/driver.cpp",
        "src/scenario_io.cpp",
    ],
    include_dirs=["include", "vendor", eigen_include()],
    cxx_std=20,
)

setup(ext_modules=[core], cmdclass={"build_ext": build_ext})
