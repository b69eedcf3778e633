"""Normally ordered moments <a^dagger^r a^(r+s)> and quadrature statistics.

Every moment is available two ways: a closed form valid for an evolved
coherent or photon-added coherent state, and a brute-force sum over the
truncated number basis.  The closed forms accept scalar or array ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import FockVector, ModelParams, annihilate
from .special import assoc_laguerre, binomial, laguerre, log_factorial

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class MomentSpec:
    """Selects <a^dagger^r a^(r+s)>."""

    r: int
    s: int

    def __post_init__(self):
        if self.r < 0 or self.s < 0:
            raise ValueError(f"moment indices must be non-negative, got {self}")

    @property
    def order(self):
        return 2 * self.r + self.s


def _spec(spec):
    return spec if isinstance(spec, MomentSpec) else MomentSpec(*spec)


def _turns(t, chi):
    # chi t in units of pi
    return chi * np.asarray(t, dtype=float) / math.pi


def moment_numeric(state: FockVector, spec) -> complex:
    """<psi| a^dagger^r a^(r+s) |psi> summed over the truncated basis.

    Raises ``ValueError`` when 2r + s exceeds the cutoff.
    """
    spec = _spec(spec)
    if spec.order > state.cutoff:
        raise ValueError(
            f"cutoff {state.cutoff} too small for moment r={spec.r}, s={spec.s}")
    c = state.amplitudes
    bra = annihilate(c, spec.r)
    ket = annihilate(c, spec.r + spec.s)
    return complex(np.sum(bra.conj() * ket))


def moment_cs(spec, t, params: ModelParams):
    """Closed-form moment for an initial coherent state evolved to time ``t``."""
    spec = _spec(spec)
    r, s = spec.r, spec.s
    tau = _turns(t, params.chi)
    nu = params.nu
    two_s = np.mod(2 * s * tau, 2.0) * np.pi
    kerr = np.mod((s * (s - 1) + 2 * r * s) * tau, 2.0) * np.pi
    amp = params.alpha ** s * nu ** r * np.exp(-nu * (1 - np.cos(two_s)))
    out = amp * np.exp(-1j * (kerr + nu * np.sin(two_s)))
    return out[()] if isinstance(out, np.ndarray) else out


def moment_pacs(spec, t, params: ModelParams):
    """Closed-form moment for an initial m-photon-added coherent state.

    Reduces to :func:`moment_cs` when ``params.m == 0``.
    """
    spec = _spec(spec)
    r, s, m = spec.r, spec.s, params.m
    tau = _turns(t, params.chi)
    nu = params.nu
    two_s = np.mod(2 * s * tau, 2.0) * np.pi
    kerr = np.mod((s - 1 + 2 * m) * s * tau, 2.0) * np.pi
    prefactor = params.alpha ** s * np.exp(
        -nu + nu * np.cos(two_s) - 1j * (kerr + nu * np.sin(two_s)))
    y = nu * np.exp(-1j * two_s)
    lm = float(laguerre(m, -nu))
    total = np.zeros_like(prefactor, dtype=complex)
    for n in range(r + 1):
        if m - r + n < 0:
            continue
        coeff = binomial(r, n) * math.exp(log_factorial(m) - log_factorial(m - r + n))
        total = total + coeff * y ** n * assoc_laguerre(m, s + n, -y) / lm
    out = prefactor * total
    return out[()] if isinstance(out, np.ndarray) else out


def mean_x(state: FockVector) -> float:
    return SQRT2 * moment_numeric(state, (0, 1)).real


def mean_p(state: FockVector) -> float:
    return SQRT2 * moment_numeric(state, (0, 1)).imag


def _envelope(t, params, harmonic=2):
    tau = _turns(t, params.chi)
    ang = np.mod(harmonic * tau, 2.0) * np.pi
    return np.exp(-params.nu * (1 - np.cos(ang))), ang


def mean_x_cs(t, params: ModelParams):
    """<x(t)> for an initial coherent state."""
    env, ang = _envelope(t, params)
    phi = params.nu * np.sin(ang)
    return env * (params.x0 * np.cos(phi) + params.p0 * np.sin(phi))


def _z_factor(t, params, num_poly, den_poly, secular):
    env, ang = _envelope(t, params)
    w = np.exp(1j * ang)
    num = sum(c * (params.nu * w) ** j for j, c in enumerate(num_poly))
    den = sum(c * params.nu ** j for j, c in enumerate(den_poly))
    z = num / den * np.exp(1j * (secular * ang + params.nu * np.sin(ang)))
    return env * (params.x0 * z.real + params.p0 * z.imag)


def mean_x_pacs_m1(t, params: ModelParams):
    """<x(t)> for |alpha, 1>; ``params.m`` is ignored."""
    # z_1 = (2 + nu e^{2i chi t}) / (1 + nu) * exp(i(2 chi t + nu sin 2 chi t))
    return _z_factor(t, params, num_poly=(2, 1), den_poly=(1, 1), secular=1)


def mean_x_pacs_m2(t, params: ModelParams):
    """<x(t)> for |alpha, 2>; ``params.m`` is ignored."""
    # z_2 = (6 + 6 nu w + nu^2 w^2) / (2 + 4 nu + nu^2) * exp(i(4 chi t + nu sin 2 chi t))
    return _z_factor(t, params, num_poly=(6, 6, 1), den_poly=(2, 4, 1), secular=2)


def mean_x2_cs(t, params: ModelParams):
    """<x^2(t)> for an initial coherent state."""
    env, ang4 = _envelope(t, params, harmonic=4)
    _, ang2 = _envelope(t, params, harmonic=2)
    x0, p0 = params.x0, params.p0
    phi = ang2 + params.nu * np.sin(ang4)
    two_x2 = 1 + x0 ** 2 + p0 ** 2 + env * (
        (x0 ** 2 - p0 ** 2) * np.cos(phi) + 2 * x0 * p0 * np.sin(phi))
    return two_x2 / 2


@dataclass(frozen=True)
class QuadratureStats:
    """Raw and central moments of x = (a + a^dagger)/sqrt 2 and p.

    ``raw_x[k]`` is <x^k>, ``central_x[k]`` is <(x - <x>)^k>, k = 0..max_order.
    ``kurtosis`` is the fourth central moment <(x - <x>)^4> (3/4 for the
    vacuum); ``kurtosis_standardized`` is mu_4 / mu_2^2 (3 for any Gaussian).
    ``skewness2`` is mu_3^2 / mu_2^3.
    """

    mean_x: float
    mean_p: float
    raw_x: tuple
    raw_p: tuple
    central_x: tuple
    central_p: tuple
    variance: float
    variance_p: float
    skewness2: float
    kurtosis: float
    kurtosis_standardized: float


def quadrature_matrices(dim):
    """Dense x and p on ``dim`` levels."""
    root = np.sqrt(np.arange(1, dim, dtype=float))
    a = np.diag(root, 1).astype(complex)
    x = (a + a.conj().T) / SQRT2
    p = (a - a.conj().T) / (1j * SQRT2)
    return x, p


def _powers(op, vec, max_order):
    out = [vec]
    for _ in range(max_order):
        out.append(op @ out[-1])
    return out


def _moment_list(op, vec, max_order):
    # <psi|op^k|psi> with k split between bra and ket to halve the reach
    pw = _powers(op, vec, (max_order + 1) // 2)
    vals = []
    for k in range(max_order + 1):
        lo = k // 2
        vals.append(float(np.vdot(pw[lo], pw[k - lo]).real))
    return tuple(vals)


def quadrature_stats(state: FockVector, max_order=4) -> QuadratureStats:
    """Moments of x and p up to ``max_order`` (1..8).

    The state is zero-padded by ``max_order`` levels before the quadrature
    matrices are applied, so the moments are exact for the truncated state.
    """
    if not 1 <= max_order <= 8:
        raise ValueError(f"max_order must lie in 1..8, got {max_order}")
    order = max(max_order, 2)
    dim = state.dim + order
    vec = np.zeros(dim, dtype=complex)
    vec[: state.dim] = state.amplitudes
    x, p = quadrature_matrices(dim)
    eye = np.eye(dim)
    raw_x = _moment_list(x, vec, max_order)
    raw_p = _moment_list(p, vec, max_order)
    mx, mp = raw_x[1], raw_p[1]
    cx = _moment_list(x - mx * eye, vec, order)
    cp = _moment_list(p - mp * eye, vec, order)
    var = cx[2]
    skew2 = cx[3] ** 2 / var ** 3 if max_order >= 3 else float("nan")
    kurt = cx[4] if max_order >= 4 else float("nan")
    return QuadratureStats(
        mean_x=mx, mean_p=mp, raw_x=raw_x, raw_p=raw_p,
        central_x=cx[: max_order + 1], central_p=cp[: max_order + 1],
        variance=var, variance_p=cp[2], skewness2=skew2, kurtosis=kurt,
        kurtosis_standardized=kurt / var ** 2)
