"""Slotted random access simulator: SA, frame-based and sliding-window CRDSA."""

from ._core import (
    STABILITY_HEADER,
    SWEEP_HEADER,
    DegreeDistribution,
    find_equilibria,
    make_figures,
    normalized_efficiency,
    oracle_peel,
    parse_grid,
    peel,
    run_point,
    snr_db_to_linear,
    sweep,
    sweep_csv,
    wilson_interval,
)

__all__ = [
    "STABILITY_HEADER",
    "SWEEP_HEADER",
    "DegreeDistribution",
    "find_equilibria",
    "make_figures",
    "normalized_efficiency",
    "oracle_peel",
    "parse_grid",
    "peel",
    "run_point",
    "snr_db_to_linear",
    "sweep",
    "sweep_csv",
    "wilson_interval",
]
