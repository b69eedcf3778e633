"""Laguerre polynomials, log-factorials and binomial coefficients.

All polynomial routines accept a scalar or an array argument ``z`` (real or
complex) and broadcast over it.
"""

import math
import threading

import numpy as np

MAX_DEGREE = 10_000
_EXACT_BINOMIAL_MAX = 60

_lf_lock = threading.Lock()
_lf_table = np.zeros(1)


def _check_degree(m):
    if m < 0:
        raise ValueError(f"degree must be non-negative, got {m}")
    if m > MAX_DEGREE:
        raise ValueError(f"degree {m} exceeds supported maximum {MAX_DEGREE}")


def assoc_laguerre(m, k, z):
    """Associated Laguerre polynomial L_m^k(z).

    Evaluated with the three-term recurrence in the degree ``m``::

        j L_j^k = (2j - 1 + k - z) L_{j-1}^k - (j - 1 + k) L_{j-2}^k

    seeded with L_0^k = 1 and L_1^k = 1 + k - z.

    Parameters
    ----------
    m : int
        degree, 0 <= m <= 10**4
    k : int
        order (upper index), k >= 0
    z : complex or array_like
        argument(s)

    Returns
    -------
    complex or numpy.ndarray
        same shape as ``z``; complex dtype if ``z`` is complex
    """
    _check_degree(m)
    if k < 0:
        raise ValueError(f"order must be non-negative, got {k}")
    z = np.asarray(z)
    prev = np.ones_like(z, dtype=np.result_type(z, float))
    if m == 0:
        return prev[()]
    cur = (1 + k) - z
    for j in range(2, m + 1):
        prev, cur = cur, ((2 * j - 1 + k - z) * cur - (j - 1 + k) * prev) / j
    return cur[()]


def laguerre(m, z):
    """Laguerre polynomial L_m(z); identical to ``assoc_laguerre(m, 0, z)``."""
    return assoc_laguerre(m, 0, z)


def laguerre_table(m_max, k, z):
    """Rows L_0^k(z) ... L_{m_max}^k(z) stacked along a new leading axis."""
    _check_degree(m_max)
    z = np.asarray(z)
    out = np.empty((m_max + 1,) + z.shape, dtype=np.result_type(z, float))
    out[0] = 1
    if m_max >= 1:
        out[1] = (1 + k) - z
    buf = np.empty_like(out[0])
    for j in range(2, m_max + 1):
        # in place: this loop dominates Wigner-grid evaluation
        np.subtract(2 * j - 1 + k, z, out=buf)
        buf *= out[j - 1]
        np.multiply(out[j - 2], -(j - 1 + k), out=out[j])
        out[j] += buf
        out[j] /= j
    return out


def _grow_log_factorial(n_max):
    global _lf_table
    with _lf_lock:
        table = _lf_table
        if n_max < table.size:
            return table
        size = max(n_max + 1, 2 * table.size, 256)
        logs = np.log(np.arange(1, size, dtype=float))
        new = np.empty(size)
        new[0] = 0.0
        np.cumsum(logs, out=new[1:])
        # the table is swapped atomically; readers keep whichever copy they hold
        _lf_table = new
        return new


def log_factorial(n):
    """ln(n!) for a non-negative integer or an integer array."""
    n_arr = np.asarray(n)
    if n_arr.size and n_arr.min() < 0:
        raise ValueError("log_factorial of a negative integer")
    top = int(n_arr.max()) if n_arr.size else 0
    table = _lf_table
    if top >= table.size:
        table = _grow_log_factorial(top)
    out = table[n_arr.astype(np.intp)]
    return float(out) if out.ndim == 0 else out


def binomial(n, k):
    """Binomial coefficient C(n, k) as a float; zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got {n}")
    if k < 0 or k > n:
        return 0.0
    if n <= _EXACT_BINOMIAL_MAX:
        return float(math.comb(n, k))
    return math.exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k))
