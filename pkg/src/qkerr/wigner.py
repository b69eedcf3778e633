"""Wigner functions from the Fock-basis density matrix and the negativity measure delta.

The series used is

    W(beta) = (2/pi) exp(-2|beta|^2) Re sum_{l <= n} (-1)^l (2 - delta_ln)
              sqrt(l!/n!) (2 beta)^(n-l) rho_ln L_l^(n-l)(4|beta|^2),

with the sum over the full truncated basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .evolution import TimeGrid, evolve, revival_time
from .fock import DensityMatrix, FockVector, ModelParams, density_from_pure
from .special import laguerre, laguerre_table, log_factorial

DEFAULT_POINTS = 201
BOUNDARY_RATIO = 1e-8
NORMALIZATION_TOL = 2e-3


class GridTooSmallError(ValueError):
    """The sampled window does not contain the Wigner function."""


@dataclass(frozen=True)
class GridSpec:
    """Square, uniformly sampled window in the beta plane."""

    center: complex = 0j
    half_extent: float = 5.0
    points_per_axis: int = DEFAULT_POINTS

    def __post_init__(self):
        if self.half_extent <= 0:
            raise ValueError("half_extent must be positive")
        if self.points_per_axis < 9 or self.points_per_axis % 2 == 0:
            raise ValueError("points_per_axis must be odd and >= 9")

    @property
    def spacing(self):
        return 2 * self.half_extent / (self.points_per_axis - 1)

    def axes(self):
        offsets = np.linspace(-self.half_extent, self.half_extent, self.points_per_axis)
        c = complex(self.center)
        return c.real + offsets, c.imag + offsets

    def mesh(self):
        """beta[i, j] = beta1[i] + i beta2[j]."""
        b1, b2 = self.axes()
        return b1[:, None] + 1j * b2[None, :]

    def refined(self):
        """Same window with the spacing halved."""
        return GridSpec(self.center, self.half_extent, 2 * self.points_per_axis - 1)

    @classmethod
    def default_for(cls, params: ModelParams, points_per_axis=DEFAULT_POINTS):
        extent = abs(params.alpha) + 4 * max(1.0, math.sqrt(params.nu + params.m))
        return cls(0j, extent, points_per_axis)


@dataclass(frozen=True)
class WignerField:
    """W sampled on ``grid``; ``values[i, j]`` belongs to beta1[i] + i beta2[j]."""

    grid: GridSpec
    values: np.ndarray
    t: float = 0.0

    def integral(self):
        return simpson_2d(self.values, self.grid.spacing)

    def negative_cells(self, tol=None):
        """Nodes with W < -tol; tol defaults to 1e-6 max|W| to ignore roundoff."""
        if tol is None:
            tol = 1e-6 * float(np.abs(self.values).max())
        return int(np.count_nonzero(self.values < -tol))

    def local_maxima(self, threshold=0.1):
        """Interior nodes strictly above all 8 neighbours and above threshold * max W."""
        w = self.values
        level = threshold * w.max()
        core = w[1:-1, 1:-1]
        mask = core > level
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == dj == 0:
                    continue
                shifted = w[1 + di: w.shape[0] - 1 + di, 1 + dj: w.shape[1] - 1 + dj]
                mask &= core > shifted
        i, j = np.nonzero(mask)
        b1, b2 = self.grid.axes()
        return [complex(b1[a + 1], b2[b + 1]) for a, b in zip(i, j)]

    def lobe_count(self, threshold=0.1):
        return len(self.local_maxima(threshold))


def simpson_weights(n, h):
    if n < 3 or n % 2 == 0:
        raise ValueError("composite Simpson needs an odd number of nodes >= 3")
    w = np.ones(n)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return w * h / 3


def simpson_2d(values, h):
    """Composite Simpson rule over a square grid with equal spacing ``h``."""
    wx = simpson_weights(values.shape[0], h)
    wy = simpson_weights(values.shape[1], h)
    return float(wx @ values @ wy)


def _as_stack(rhos):
    if isinstance(rhos, DensityMatrix):
        return rhos.entries[None]
    return np.stack([r.entries if isinstance(r, DensityMatrix) else np.asarray(r) for r in rhos])


def wigner_values(rhos, beta):
    """W at the points ``beta`` for one or several density matrices.

    Parameters
    ----------
    rhos : DensityMatrix or sequence of DensityMatrix
        all of the same dimension
    beta : array_like of complex

    Returns
    -------
    numpy.ndarray
        shape ``(len(rhos),) + beta.shape``, or ``beta.shape`` for a single matrix
    """
    single = isinstance(rhos, DensityMatrix)
    stack = _as_stack(rhos)
    beta = np.asarray(beta, dtype=complex)
    flat = beta.ravel()
    dim = stack.shape[1]
    r2 = np.abs(flat) ** 2
    x = 4 * r2
    phase = np.exp(1j * np.angle(flat))
    with np.errstate(divide="ignore"):
        log_two_r = np.log(2 * np.abs(flat))
    lf = log_factorial(np.arange(dim))
    sign = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0)
    acc = np.zeros((stack.shape[0], flat.size))
    phase_k = np.ones_like(phase)
    with np.errstate(invalid="ignore"):
        envelope = np.exp(-2 * r2)

    for k in range(dim):
        count = dim - k
        lag = laguerre_table(count - 1, k, x)
        l = np.arange(count)
        # rho_{l, l+k} (-1)^l (2 - delta_k0) sqrt(l!/(l+k)!)
        coeff = stack[:, l, l + k] * (sign[:count] * (1.0 if k == 0 else 2.0)
                                     * np.exp(0.5 * (lf[l] - lf[l + k])))
        # only Re(radial * e^{ik phi}) survives; keep the matmuls real
        re, im = coeff.real @ lag, coeff.imag @ lag
        if k == 0:
            acc += re * envelope
        else:
            phase_k = phase_k * phase
            # (2|beta|)^k exp(-2|beta|^2) in log-space; beta = 0 contributes nothing
            scale = np.where(np.isfinite(log_two_r), np.exp(k * log_two_r - 2 * r2), 0.0)
            acc += scale * (re * phase_k.real - im * phase_k.imag)

    out = (2 / np.pi) * acc
    out = out.reshape((stack.shape[0],) + beta.shape)
    return out[0] if single else out


def wigner_point(rho: DensityMatrix, beta) -> float:
    return float(wigner_values(rho, np.array([beta]))[0])


def wigner_cs_closed(beta, params: ModelParams):
    """(2/pi) exp(-2|alpha - beta|^2)."""
    beta = np.asarray(beta, dtype=complex)
    out = 2 / np.pi * np.exp(-2 * np.abs(params.alpha - beta) ** 2)
    return out[()] if out.ndim == 0 else out


def wigner_pacs_closed(beta, params: ModelParams):
    """Initial Wigner function of |alpha, m>:
    2 (-1)^m L_m(|2 beta - alpha|^2) exp(-2|alpha - beta|^2) / (pi L_m(-nu)).
    """
    beta = np.asarray(beta, dtype=complex)
    m, alpha = params.m, params.alpha
    lag = laguerre(m, np.abs(2 * beta - alpha) ** 2)
    out = (2 * (-1) ** m / (np.pi * float(laguerre(m, -params.nu)))
           * lag * np.exp(-2 * np.abs(alpha - beta) ** 2))
    return out[()] if out.ndim == 0 else out


def wigner_grid(rho: DensityMatrix, grid: GridSpec, t=0.0) -> WignerField:
    return WignerField(grid, wigner_values(rho, grid.mesh()), t)


def _boundary_max(values):
    return max(np.abs(values[0]).max(), np.abs(values[-1]).max(),
               np.abs(values[:, 0]).max(), np.abs(values[:, -1]).max())


def check_boundary(values, t=None):
    peak = np.abs(values).max()
    edge = _boundary_max(values)
    if edge >= BOUNDARY_RATIO * peak:
        where = "" if t is None else f" at t={t!r}"
        raise GridTooSmallError(
            f"|W| on the grid boundary is {edge:.3e}, not below "
            f"{BOUNDARY_RATIO:g} x max|W| = {BOUNDARY_RATIO * peak:.3e}{where}")


class DeltaSample(NamedTuple):
    t: float
    t_over_trev: float
    delta_raw: float
    delta: float


SIGN_CHANGE_RATIO = 1e-10
DEFAULT_REFINE = 4


def _block_view(arr, a, b, nb):
    return arr[a: a + 2 * nb: 2, b: b + 2 * nb: 2]


def integrate_abs(values, grid: GridSpec, evaluate=None, refine=DEFAULT_REFINE):
    """Composite Simpson integral of |W| over ``grid``.

    |W| has a kink wherever W changes sign, which the plain rule resolves only
    to O(h^2).  Splitting |W| = W + 2 max(-W, 0), the smooth part is integrated
    directly; for the negative part every 2x2-cell Simpson block that straddles
    or may hide a zero of W is re-integrated on a sub-grid ``refine`` times finer, using
    ``evaluate(beta) -> W`` for the new nodes.  Without ``evaluate`` this is
    plain composite Simpson of |W|.
    """
    h = grid.spacing
    if evaluate is None or refine <= 1:
        return simpson_2d(np.abs(values), h)
    n = values.shape[0]
    nb = (n - 1) // 2
    w3 = np.array([1.0, 4.0, 1.0]) * h / 3
    eps = SIGN_CHANGE_RATIO * np.abs(values).max()
    neg = np.maximum(-values, 0.0)
    block_neg = np.zeros((nb, nb))
    hi = np.full((nb, nb), -np.inf)
    lo = np.full((nb, nb), np.inf)
    smallest = np.full((nb, nb), np.inf)
    for a in range(3):
        for b in range(3):
            block_neg += w3[a] * w3[b] * _block_view(neg, a, b, nb)
            v = _block_view(values, a, b, nb)
            hi = np.maximum(hi, v)
            lo = np.minimum(lo, v)
            smallest = np.minimum(smallest, np.abs(v))
    # a block may hide a zero crossing between its nodes whenever W varies
    # across it by more than its smallest nodal magnitude
    suspect = (hi - lo > smallest) & ((hi > eps) | (lo < -eps))
    mixed = np.argwhere(suspect)
    if mixed.size:
        fine_n = 2 * refine + 1
        offsets = np.linspace(0.0, 2 * h, fine_n)
        b1, b2 = grid.axes()
        x0 = b1[2 * mixed[:, 0]]
        y0 = b2[2 * mixed[:, 1]]
        pts = ((x0[:, None, None] + offsets[None, :, None])
               + 1j * (y0[:, None, None] + offsets[None, None, :]))
        fine = np.asarray(evaluate(pts.reshape(-1))).reshape(pts.shape)
        wf = simpson_weights(fine_n, h / refine)
        block_neg[mixed[:, 0], mixed[:, 1]] = np.einsum(
            "i,kij,j->k", wf, np.maximum(-fine, 0.0), wf)
    return simpson_2d(values, h) + 2 * float(block_neg.sum())


def _delta_from_values(values, grid, evaluate=None):
    raw = integrate_abs(values, grid, evaluate) - 1.0
    clamped = 0.0 if -NORMALIZATION_TOL < raw < 0 else raw
    return raw, clamped


def delta(rho: DensityMatrix, grid: GridSpec, *, raw=False):
    """Integrated |W| minus one.

    Small negative values within the quadrature tolerance are clamped to zero
    unless ``raw`` is set.  Raises :class:`GridTooSmallError` when the window
    does not contain the state.
    """
    values = wigner_values(rho, grid.mesh())
    check_boundary(values)
    d_raw, d = _delta_from_values(values, grid, lambda b: wigner_values(rho, b))
    return d_raw if raw else d


def delta_timescan(state0: FockVector, times, grid: GridSpec, chi, batch=16):
    """delta(t) along the Kerr evolution of ``state0``.

    ``times`` is a :class:`TimeGrid` or an explicit sequence of times.
    """
    ts = times.times(chi) if isinstance(times, TimeGrid) else np.asarray(times, dtype=float)
    t_rev = revival_time(chi)
    beta = grid.mesh()
    out = []
    for start in range(0, len(ts), batch):
        chunk = ts[start: start + batch]
        rhos = [density_from_pure(evolve(state0, t, chi)) for t in chunk]
        fields = wigner_values(rhos, beta)
        for t, rho, values in zip(chunk, rhos, fields):
            check_boundary(values, t)
            d_raw, d = _delta_from_values(
                values, grid, lambda b, rho=rho: wigner_values(rho, b))
            out.append(DeltaSample(float(t), float(t / t_rev), d_raw, d))
    return out
