"""Weighted Bergman and Hardy spaces on the unit disk."""

from .functions import (
    AnalyticFn,
    Blaschke,
    Compose,
    Kernel,
    Polynomial,
    PreCompose,
    Product,
    Quotient,
    Scale,
    Sum,
    decode_complex,
    encode_complex,
    eval_jet,
    evaluate,
    from_json,
    taylor_jet,
    walk,
)
from .kernels import kernel_derivative
from .norms import (
    NormResult,
    circle_max,
    forelli_rudin_bound_check,
    forelli_rudin_circle_check,
    forelli_rudin_integral_exact,
    kernel_norm_log,
    kernel_norm_sup_log,
    norm,
    sup_norm,
)
from .params import QuadratureConfig, SpaceParams

__all__ = [
    "AnalyticFn",
    "Blaschke",
    "Compose",
    "Kernel",
    "NormResult",
    "Polynomial",
    "PreCompose",
    "Product",
    "QuadratureConfig",
    "Quotient",
    "Scale",
    "SpaceParams",
    "Sum",
    "circle_max",
    "decode_complex",
    "encode_complex",
    "eval_jet",
    "evaluate",
    "forelli_rudin_bound_check",
    "forelli_rudin_circle_check",
    "forelli_rudin_integral_exact",
    "from_json",
    "kernel_derivative",
    "kernel_norm_log",
    "kernel_norm_sup_log",
    "norm",
    "sup_norm",
    "taylor_jet",
    "walk",
]
