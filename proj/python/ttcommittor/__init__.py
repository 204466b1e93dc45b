"""Committor functions in tensor-train format."""

from ._core import (
    TensorTrain,
    __version__,
    dense_oracle_check,
    gauss_legendre,
    gl_kernel_eigenvalues,
    oracle,
    soft_committor_1d,
    solve,
    tt_inner,
    tt_round,
    validate,
)

__all__ = [
    "TensorTrain",
    "__version__",
    "dense_oracle_check",
    "gauss_legendre",
    "gl_kernel_eigenvalues",
    "oracle",
    "soft_committor_1d",
    "solve",
    "tt_inner",
    "tt_round",
    "validate",
]
