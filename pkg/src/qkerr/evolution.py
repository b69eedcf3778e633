"""Exact Kerr evolution under H = hbar chi N(N - 1) and the revival calendar."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fock import DensityMatrix, FockVector


def revival_time(chi):
    """T_rev = pi / chi."""
    if chi <= 0:
        raise ValueError(f"chi must be positive, got {chi}")
    return math.pi / chi


def kerr_phases(dim, t, chi):
    """exp(-i chi n(n-1) t) for n = 0..dim-1.

    The exponent is carried as a multiple of pi and reduced modulo 2 per level,
    so large n and long times keep full accuracy.
    """
    tau = chi * t / math.pi
    n = np.arange(dim, dtype=float)
    k = n * (n - 1)
    # tau = head + tail with a 24-bit head: k * head is exact for k < 2**29, so
    # the reduction mod 2 loses nothing and only the tiny tail product rounds
    head = float(np.float32(tau)) if abs(tau) < 1e38 else tau
    tail = tau - head
    turns = np.mod(np.mod(k * head, 2.0) + k * tail, 2.0)
    return np.exp(-1j * np.pi * turns)


def evolve(state: FockVector, t, chi) -> FockVector:
    """c_n(t) = c_n(0) exp(-i chi n(n-1) t)."""
    return FockVector(state.amplitudes * kerr_phases(state.dim, t, chi))


def evolve_density(rho: DensityMatrix, t, chi) -> DensityMatrix:
    """rho_ln(t) = rho_ln(0) exp(-i chi [l(l-1) - n(n-1)] t)."""
    ph = kerr_phases(rho.dim, t, chi)
    return DensityMatrix(ph[:, None] * rho.entries * ph.conj()[None, :])


def autocorrelation(a: FockVector, b: FockVector) -> float:
    """|<a|b>|^2."""
    if a.dim != b.dim:
        raise ValueError(f"cutoff mismatch: {a.cutoff} vs {b.cutoff}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def fractional_revival_fractions(k):
    """Reduced fractions j/k of T_rev at which k sub-packets form."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return [Fraction(j, k) for j in range(1, k) if math.gcd(j, k) == 1]


def fractional_revival_times(k, chi):
    """Times pi j/(k chi), j = 1..k-1, keeping only j coprime to k.

    A time such as T_rev/2 = 2 T_rev/4 belongs to the smallest k producing it
    and is therefore not repeated under larger k.
    """
    t_rev = revival_time(chi)
    return [float(f) * t_rev for f in fractional_revival_fractions(k)]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling of [start, end].

    With ``in_revival_units`` the bounds are fractions of T_rev.
    """

    start: float = 0.0
    end: float = 1.0
    samples: int = 64
    in_revival_units: bool = True

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError("TimeGrid requires start < end")
        if self.samples < 2:
            raise ValueError("TimeGrid requires at least 2 samples")

    def times(self, chi):
        scale = revival_time(chi) if self.in_revival_units else 1.0
        return np.linspace(self.start, self.end, self.samples) * scale
