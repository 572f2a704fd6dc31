import sys

from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off keeps the compiled kernel bit-identical to the pure
# Python fallback (no fused multiply-add contraction of a*b - c*d chains).
if sys.platform == "win32":
    compile_args = ["/O2", "/fp:strict"]
else:
    compile_args = ["-O3", "-ffp-contract=off"]

extensions = [
    Extension(
        "gapmm._jacobi",
        ["src/gapmm/_jacobi.pyx"],
        extra_compile_args=compile_args,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
