"""States of a single bosonic mode in a truncated number basis.

Coherent states |alpha> and m-photon-added coherent states
|alpha, m> = (a^dagger)^m |alpha> / sqrt(m! L_m(-nu)) are built in log-space
and renormalised over levels 0..cutoff.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .special import laguerre, log_factorial

DEFAULT_TAIL_EPSILON = 1e-12
_CUTOFF_SEARCH_CAP = 1_000_000
_WRITE_THRESHOLD = 1e-15


def _frozen(values, dtype=complex):
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


def _log_photon_distribution(nu, m, n):
    """ln p_n of the photon-added coherent state for levels ``n >= m``."""
    k = n - m
    log_norm = log_factorial(m) + math.log(float(laguerre(m, -nu)))
    return (-nu + k * math.log(nu) + log_factorial(n)
            - 2 * log_factorial(k) - log_norm)


def choose_cutoff(nu, m=0, tail_epsilon=DEFAULT_TAIL_EPSILON):
    """Smallest N_max whose discarded photon-number mass is below ``tail_epsilon``.

    The distribution is that of |alpha, m> with |alpha|^2 = nu (Poisson when
    m = 0).  The result is never below ``m + 1``.
    """
    if nu < 0 or m < 0:
        raise ValueError("nu and m must be non-negative")
    if not 0 < tail_epsilon < 1:
        raise ValueError("tail_epsilon must lie in (0, 1)")
    floor = m + 1
    if nu == 0:
        return floor

    # walk past the mode until the terms are negligible against epsilon,
    # then accumulate the tail from the top down
    mode = m + nu + math.sqrt(nu * (m + 1)) + 1
    probs = []
    n = m
    while True:
        p = math.exp(_log_photon_distribution(nu, m, n))
        probs.append(p)
        if n > mode and p < tail_epsilon * 1e-6:
            break
        n += 1
        if n - m > _CUTOFF_SEARCH_CAP:
            raise RuntimeError(
                f"cutoff search exceeded {_CUTOFF_SEARCH_CAP} levels (nu={nu}, m={m})")
    tail = 0.0
    n_max = m + len(probs) - 1
    for idx in range(len(probs) - 1, -1, -1):
        # tail currently holds the mass strictly above level m + idx
        if tail >= tail_epsilon:
            break
        n_max = m + idx
        tail += probs[idx]
    return max(n_max, floor)


@dataclass(frozen=True)
class ModelParams:
    """Physical configuration plus Fock truncation.

    ``cutoff`` left as ``None`` is resolved with :func:`choose_cutoff` at the
    default tail epsilon.
    """

    chi: float = 5.0
    nu: float = 1.0
    theta: float = 0.0
    m: int = 0
    cutoff: int | None = None

    def __post_init__(self):
        if self.chi <= 0:
            raise ValueError(f"chi must be positive, got {self.chi}")
        if self.nu < 0:
            raise ValueError(f"nu must be non-negative, got {self.nu}")
        if self.m < 0 or int(self.m) != self.m:
            raise ValueError(f"m must be a non-negative integer, got {self.m}")
        object.__setattr__(self, "theta", math.fmod(self.theta, 2 * math.pi) % (2 * math.pi))
        if self.cutoff is None:
            object.__setattr__(self, "cutoff", choose_cutoff(self.nu, self.m))
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")

    @property
    def alpha(self) -> complex:
        return math.sqrt(self.nu) * complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def x0(self) -> float:
        return math.sqrt(2 * self.nu) * math.cos(self.theta)

    @property
    def p0(self) -> float:
        return math.sqrt(2 * self.nu) * math.sin(self.theta)

    @property
    def revival_time(self) -> float:
        return math.pi / self.chi

    def replace(self, **changes) -> ModelParams:
        fields = dict(chi=self.chi, nu=self.nu, theta=self.theta, m=self.m, cutoff=self.cutoff)
        fields.update(changes)
        return ModelParams(**fields)

    @classmethod
    def from_alpha(cls, alpha, **kwargs) -> ModelParams:
        alpha = complex(alpha)
        return cls(nu=abs(alpha) ** 2, theta=math.atan2(alpha.imag, alpha.real), **kwargs)


@dataclass(frozen=True)
class FockVector:
    """Pure state: complex amplitudes c_0 .. c_{N_max}."""

    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes))
        if self.amplitudes.ndim != 1 or self.amplitudes.size < 1:
            raise ValueError("amplitudes must be a non-empty 1-d sequence")

    @property
    def cutoff(self) -> int:
        return self.amplitudes.size - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def mean_photon_number(self) -> float:
        return float(np.dot(np.arange(self.dim), self.probabilities()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian matrix rho_ln on levels 0..N_max.

    Only the upper triangle (l <= n) of the supplied matrix is used; the lower
    triangle is filled with conjugates so Hermiticity holds bit-for-bit.
    """

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex, copy=True)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("density matrix must be square")
        rho = _hermitian_from_upper(rho)
        rho.flags.writeable = False
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def cutoff(self) -> int:
        return self.dim - 1

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def to_json(self) -> dict:
        rows = []
        for l, n in zip(*np.nonzero(np.abs(self.entries) > _WRITE_THRESHOLD)):
            v = self.entries[l, n]
            rows.append([int(l), int(n), float(v.real), float(v.imag)])
        return {"dim": self.dim, "entries": rows}

    @classmethod
    def from_json(cls, obj) -> DensityMatrix:
        dim = int(obj["dim"])
        rho = np.zeros((dim, dim), dtype=complex)
        for l, n, re, im in obj["entries"]:
            l, n = int(l), int(n)
            rho[l, n] = complex(re, im)
            # a file may list either Hermitian partner, or both
            if l != n:
                rho[n, l] = complex(re, -im)
        return cls(rho)

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json()) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> DensityMatrix:
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def _hermitian_from_upper(rho):
    upper = np.triu(rho, 1)
    out = upper + upper.conj().T
    out[np.diag_indices_from(out)] = rho.diagonal().real
    return out


def _pacs_amplitudes(nu, theta, m, cutoff):
    if cutoff <= m:
        raise ValueError(f"cutoff {cutoff} must exceed the number of added photons {m}")
    c = np.zeros(cutoff + 1, dtype=complex)
    if nu == 0:
        c[m] = 1.0
        return c
    n = np.arange(m, cutoff + 1)
    k = n - m
    log_mag = (-0.5 * nu + 0.5 * k * math.log(nu) + 0.5 * log_factorial(n)
               - log_factorial(k)
               - 0.5 * (log_factorial(m) + math.log(float(laguerre(m, -nu)))))
    phase = np.mod(k * theta, 2 * np.pi)
    c[m:] = np.exp(log_mag) * np.exp(1j * phase)
    return c / np.sqrt(np.sum(np.abs(c) ** 2))


def make_coherent(params: ModelParams) -> FockVector:
    """Coherent state |alpha>; ``params.m`` is ignored."""
    return FockVector(_pacs_amplitudes(params.nu, params.theta, 0, params.cutoff))


def make_pacs(params: ModelParams) -> FockVector:
    """Photon-added coherent state |alpha, m> (coherent state when m = 0)."""
    return FockVector(_pacs_amplitudes(params.nu, params.theta, params.m, params.cutoff))


def make_state(params: ModelParams) -> FockVector:
    return make_pacs(params)


def density_from_pure(state: FockVector) -> DensityMatrix:
    """rho_ln = c_l conj(c_n)."""
    c = state.amplitudes
    return DensityMatrix(np.outer(c, c.conj()))


def annihilate(amplitudes, times=1):
    """Apply ``a`` ``times`` times: (a psi)_n = sqrt(n + 1) psi_{n+1}.

    The result keeps the input length; the top level becomes zero.
    """
    v = np.asarray(amplitudes, dtype=complex)
    root = np.sqrt(np.arange(1, v.size, dtype=float))
    for _ in range(times):
        out = np.zeros_like(v)
        out[:-1] = root * v[1:]
        v = out
    return v


def create(amplitudes, times=1):
    """Apply ``a^dagger`` ``times`` times; amplitude pushed past the top level is lost."""
    v = np.asarray(amplitudes, dtype=complex)
    root = np.sqrt(np.arange(1, v.size, dtype=float))
    for _ in range(times):
        out = np.zeros_like(v)
        out[1:] = root * v[:-1]
        v = out
    return v


def verify_nonlinear_eigenstate(state: FockVector, params: ModelParams) -> float:
    """Residual norm of (1 - m/(1 + N)) a |psi> - alpha |psi>.

    The top level is excluded: ``a`` cannot see the discarded level N_max + 1,
    so its component is a pure truncation artefact.
    """
    c = state.amplitudes
    a_psi = annihilate(c)
    n = np.arange(c.size)
    lhs = (1 - params.m / (1 + n)) * a_psi
    resid = lhs - params.alpha * c
    return float(np.linalg.norm(resid[:-1]))
