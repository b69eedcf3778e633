"""q-th power amplitude squeezing and fourth-order Hong-Mandel squeezing.

The amplitude-squeezing indicator is

    D_q = [(Delta Z_1)^2 - <F_q(N)>/2] / (<F_q(N)>/2),
    Z_1 = (a^q + a^dagger^q) / sqrt 2,   F_q(N) = [a^q, a^dagger^q],

and the state is squeezed in Z_1 when -1 <= D_q < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import FockVector, ModelParams, annihilate, create
from .expectations import moment_numeric, quadrature_stats
from .special import assoc_laguerre, binomial, laguerre, log_factorial

HONG_MANDEL_BOUND = 0.75
MAX_Q = 12


@dataclass(frozen=True)
class CommutatorPoly:
    """F_q(N) = (N+1)...(N+q) - N(N-1)...(N-q+1) with integer coefficients.

    ``coefficients[j]`` multiplies N**j.
    """

    q: int
    coefficients: tuple

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        out = np.zeros_like(n)
        for c in reversed(self.coefficients):
            out = out * n + c
        return out[()] if out.ndim == 0 else out

    @property
    def degree(self):
        return len(self.coefficients) - 1


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def commutator_poly(q) -> CommutatorPoly:
    if not 1 <= q <= MAX_Q:
        raise ValueError(f"q must lie in 1..{MAX_Q}, got {q}")
    rising, falling = [1], [1]
    for j in range(q):
        rising = _poly_mul(rising, [j + 1, 1])
        falling = _poly_mul(falling, [-j, 1])
    diff = [a - b for a, b in zip(rising, falling)]
    while len(diff) > 1 and diff[-1] == 0:
        diff.pop()
    return CommutatorPoly(q=q, coefficients=tuple(diff))


@dataclass(frozen=True)
class SqueezingReport:
    """D_q together with the pieces it is assembled from."""

    q: int
    t: float
    dq: float
    squeezed: bool
    variance: float
    half_commutator: float
    re_a2q: float
    re_aq: float
    normal_qq: float
    dq_from_variance: float


def _padded(state, extra):
    vec = np.zeros(state.dim + extra, dtype=complex)
    vec[: state.dim] = state.amplitudes
    return vec


def dq_numeric(state: FockVector, q, t=float("nan"), phase=0.0) -> SqueezingReport:
    """D_q evaluated by brute force on ``state``.

    ``phase`` rotates a^q -> exp(-i phase) a^q; phase = pi/2 gives the Z_2
    indicator.  ``t`` only labels the report.
    """
    poly = commutator_poly(q)
    if 2 * q > state.cutoff:
        raise ValueError(f"cutoff {state.cutoff} too small for q={q}")
    rot = np.exp(-1j * phase)
    a2q = rot ** 2 * moment_numeric(state, (0, 2 * q))
    aq = rot * moment_numeric(state, (0, q))
    normal = moment_numeric(state, (q, 0)).real
    mean_f = float(np.dot(state.probabilities(), poly(np.arange(state.dim))))
    dq = 2 * (a2q.real - 2 * aq.real ** 2 + normal) / mean_f

    # independent route: (Delta Z_1)^2 from the operator itself, with q
    # levels of padding so a^dagger^q never leaves the basis
    vec = _padded(state, q)
    z_vec = (rot * annihilate(vec, q) + rot.conjugate() * create(vec, q)) / math.sqrt(2)
    mean_z = float(np.vdot(vec, z_vec).real)
    variance = float(np.vdot(z_vec, z_vec).real) - mean_z ** 2
    half = mean_f / 2
    dq_var = (variance - half) / half
    return SqueezingReport(
        q=q, t=t, dq=dq, squeezed=bool(-1 <= dq < 0), variance=variance,
        half_commutator=half, re_a2q=a2q.real, re_aq=aq.real, normal_qq=normal,
        dq_from_variance=dq_var)


def mean_commutator_cs(q, nu):
    """<F_q(N)> on a coherent state: q! L_q(-nu) - nu^q."""
    return math.factorial(q) * float(laguerre(q, -nu)) - nu ** q


def _falling_sum(q, m, nu):
    # sum_{n=max(0,q-m)}^{q} C(q,n) m!/(m-q+n)! nu^n L_m^n(-nu)
    total = 0.0
    for n in range(max(0, q - m), q + 1):
        ratio = math.exp(log_factorial(m) - log_factorial(m - q + n))
        total += binomial(q, n) * ratio * nu ** n * float(assoc_laguerre(m, n, -nu))
    return total


def mean_commutator_pacs(q, m, nu):
    """<F_q(N)> on |alpha, m> (time independent)."""
    lm = float(laguerre(m, -nu))
    anti = math.exp(log_factorial(m + q) - log_factorial(m)) * float(laguerre(m + q, -nu)) / lm
    return anti - _falling_sum(q, m, nu) / lm


def dq_cs_half_revival(q, nu, theta):
    """D_q at T_rev/2 for an initial coherent state.

    Zero for even q; for odd q
    4 nu^q (sin^2 q theta - exp(-4 nu) cos^2 q theta) / <F_q(N)>.

    The prefactor 4 (not 2) is what the variance definition of D_q yields:
    at q = 1, (Delta x)^2 = 1/2 - 2 nu exp(-4 nu) cos^2 theta + ... at T_rev/2.
    """
    if q % 2 == 0:
        return 0.0
    f = mean_commutator_cs(q, nu)
    return 4 * nu ** q / f * (math.sin(q * theta) ** 2
                              - math.exp(-4 * nu) * math.cos(q * theta) ** 2)


def dq_pacs(q, t, params: ModelParams):
    """D_q^(m)(t) for an initial |alpha, m>, closed form (m >= 0).

    Scaled by A = L_m(-nu) <F_q(N)> / 2, the numerator is the sum of
    L_m Re<a^2q>, -2 L_m (Re<a^q>)^2 and L_m <a^dagger^q a^q>, each written
    as a finite sum over associated-Laguerre coefficients.
    """
    m, nu, theta = params.m, params.nu, params.theta
    lm = float(laguerre(m, -nu))
    tau = params.chi * np.asarray(t, dtype=float) / math.pi

    def ang(k):
        # k chi t, reduced modulo 2 pi
        return np.mod(k * tau, 2.0) * np.pi

    first = np.zeros_like(tau)
    inner = np.zeros_like(tau)
    for n in range(m + 1):
        lf = log_factorial(n)
        c2 = binomial(m + 2 * q, n + 2 * q) * math.exp((n + q) * math.log(nu) - lf) if nu else 0.0
        c1 = binomial(m + q, n + q) * math.exp((n + 0.5 * q) * math.log(nu) - lf) if nu else 0.0
        first = first + c2 * np.cos(ang(2 * q * (2 * m + 2 * n + 2 * q - 1))
                                    + nu * np.sin(ang(4 * q)) - 2 * q * theta)
        inner = inner + c1 * np.cos(ang(q * (q - 1 + 2 * m + 2 * n))
                                    + nu * np.sin(ang(2 * q)) - q * theta)
    first = np.exp(-nu * (1 - np.cos(ang(4 * q)))) * first
    second = 2 * np.exp(-2 * nu * (1 - np.cos(ang(2 * q)))) / lm * inner ** 2
    third = _falling_sum(q, m, nu)
    a_scale = 0.5 * lm * mean_commutator_pacs(q, m, nu)
    out = (first - second + third) / a_scale
    return out[()] if isinstance(out, np.ndarray) else out


def dq_pacs_half_revival(q, params: ModelParams):
    """D_q^(m) at T_rev/2 for an initial |alpha, m>."""
    m, nu, theta = params.m, params.nu, params.theta
    lm = float(laguerre(m, -nu))
    first = (-nu) ** q * float(assoc_laguerre(m, 2 * q, -nu)) * math.cos(2 * q * theta)
    lq = float(assoc_laguerre(m, q, (-1) ** (q + 1) * nu))
    second = (2 * math.exp(-2 * nu * (1 - math.cos(q * math.pi))) / lm
              * nu ** q * lq ** 2 * math.cos(q * theta) ** 2)
    third = _falling_sum(q, m, nu)
    return (first - second + third) / (0.5 * lm * mean_commutator_pacs(q, m, nu))


def hong_mandel_m4(state: FockVector):
    """Fourth central moment of x and whether it lies below the vacuum value 3/4."""
    m4 = quadrature_stats(state, 4).central_x[4]
    return m4, bool(m4 < HONG_MANDEL_BOUND)
