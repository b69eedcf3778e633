"""Kerr-medium dynamics of coherent and photon-added coherent states."""

__version__ = "0.1.0"

from .evolution import TimeGrid, autocorrelation, evolve, revival_time
from .expectations import MomentSpec, quadrature_stats
from .fock import (
    DensityMatrix, FockVector, ModelParams, choose_cutoff, density_from_pure,
    make_coherent, make_pacs)
from .squeezing import commutator_poly, dq_numeric, dq_pacs, hong_mandel_m4
from .wigner import GridSpec, WignerField, delta, delta_timescan, wigner_grid

__all__ = [
    "DensityMatrix", "FockVector", "GridSpec", "ModelParams", "MomentSpec",
    "TimeGrid", "WignerField", "autocorrelation", "choose_cutoff", "commutator_poly",
    "delta", "delta_timescan", "density_from_pure", "dq_numeric", "dq_pacs", "evolve",
    "hong_mandel_m4", "make_coherent", "make_pacs", "quadrature_stats", "revival_time",
    "wigner_grid",
]
