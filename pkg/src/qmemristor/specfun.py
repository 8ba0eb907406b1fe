"""Special functions for the harmonic-oscillator matrix elements.

Associated Laguerre polynomials, the P(g0, n, m) factor, matrix elements of
sin(phi/2) between Fock states, displacement-operator matrix elements and the
quasiparticle relaxation rate built from them.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError

MAX_LEVEL = 64
_EXACT_FACTORIAL_MAX = 20


def _check_levels(n, m):
    for name, k in (("n", n), ("m", m)):
        if k < 0:
            raise ParameterError(f"{name} must be non-negative, got {k}")
        if k > MAX_LEVEL:
            raise ParameterError(f"{name}={k} exceeds the supported maximum {MAX_LEVEL}")


def laguerre_assoc(n, k, x):
    """Associated Laguerre polynomial L_n^k(x).

    Uses the three-term recurrence
    (j+1) L_{j+1} = (2j + k + 1 - x) L_j - (j + k) L_{j-1}.
    ``x`` may be a scalar or an array.
    """
    if n < 0 or k < 0:
        raise ParameterError(f"laguerre_assoc needs n, k >= 0, got n={n}, k={k}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = k + 1.0 - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + k + 1 - x) * cur - (j + k) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def _log_factorial_ratio(lo, hi):
    """log(lo! / hi!) for lo <= hi."""
    if hi <= _EXACT_FACTORIAL_MAX:
        return math.log(math.factorial(lo) / math.factorial(hi))
    return math.lgamma(lo + 1) - math.lgamma(hi + 1)


def p_factor(g0, n, m):
    """P(g0, n, m) = exp(-g0^2) (m!/n!) g0^(2(n-m)) [L_m^(n-m)(g0^2)]^2 for m <= n.

    Symmetric in ``n`` and ``m``.
    """
    if g0 < 0:
        raise ParameterError("g0 must be non-negative")
    _check_levels(n, m)
    lo, hi = min(n, m), max(n, m)
    diff = hi - lo
    lag = laguerre_assoc(lo, diff, g0 * g0)
    if diff == 0:
        return math.exp(-g0 * g0) * lag * lag
    if g0 == 0.0 or lag == 0.0:
        return 0.0
    log_val = (
        -g0 * g0
        + _log_factorial_ratio(lo, hi)
        + 2 * diff * math.log(g0)
        + 2 * math.log(abs(lag))
    )
    return math.exp(log_val)


def sin_half_element_sq(g0, phi_d, n, m):
    """|<m| sin(phi/2) |n>|^2 for phi = 2 g0 (a + a^dag) + phi_d.

    The cosine term carries the sign (-1)^(1+|n-m|): odd parity differences
    go as (1 + cos phi_d)/2, even ones as (1 - cos phi_d)/2.
    """
    parity = -1.0 if (abs(n - m) + 1) % 2 else 1.0
    return p_factor(g0, n, m) * (1.0 + parity * np.cos(phi_d)) / 2.0


def displacement_element(alpha, n, m):
    """<m| D(alpha) |n> with D(alpha) = exp(alpha a^dag - alpha^* a)."""
    _check_levels(n, m)
    alpha = complex(alpha)
    r2 = abs(alpha) ** 2
    lo, hi = min(n, m), max(n, m)
    diff = hi - lo
    # m <= n: (-alpha^*)^(n-m);  m >= n: alpha^(m-n)
    base = -alpha.conjugate() if m <= n else alpha
    lag = laguerre_assoc(lo, diff, r2)
    if diff == 0:
        return complex(math.exp(-r2 / 2) * lag)
    if alpha == 0:
        return 0j
    mag = math.exp(-r2 / 2 + 0.5 * _log_factorial_ratio(lo, hi))
    return mag * base**diff * lag


def decay_rate(g0, phi_d, s_qp):
    """Quasiparticle relaxation rate 1 -> 0 in units of omega10.

    gamma = |<0| sin(phi/2) |1>|^2 * s_qp = P(g0,1,0) (1 + cos phi_d)/2 * s_qp.

    The rate vanishes at phi_d = pi.  Higher-order terms that take over there
    are not modeled.
    """
    if np.any(np.asarray(s_qp) < 0):
        raise ParameterError("s_qp must be non-negative")
    return p_factor(g0, 1, 0) * (1.0 + np.cos(phi_d)) / 2.0 * s_qp
