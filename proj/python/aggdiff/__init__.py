"""Aggregation-diffusion laboratory: solver, norms and scaling fits."""

from ._core import (
    RunAborted,
    fit_exponent,
    gaussian,
    gn_ratio,
    gn_solve,
    hls_ratio,
    hls_solve,
    hls_sharp_constant,
    lp_norm,
    parse_config_text,
    run,
    sobolev_seminorm,
)

__all__ = [
    "RunAborted",
    "fit_exponent",
    "gaussian",
    "gn_ratio",
    "gn_solve",
    "hls_ratio",
    "hls_solve",
    "hls_sharp_constant",
    "lp_norm",
    "parse_config_text",
    "run",
    "sobolev_seminorm",
]
