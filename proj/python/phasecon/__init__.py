"""Phase-field gradient flows with a graph-geodesic connectedness penalty."""

from phasecon._core import (
    BandConfig,
    System,
    band_profile,
    double_well,
    run_experiment,
)

__all__ = [
    "BandConfig",
    "System",
    "band_profile",
    "double_well",
    "run_experiment",
]
