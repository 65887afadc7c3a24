"""Scalar special functions: factorial logs, Laguerre/Hermite recurrences,
the terminating 2F0 series and its singularity-free polynomial companion.

All functions accept numpy arrays in their continuous argument and
broadcast elementwise; order arguments are plain non-negative ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TerminatingHypParams",
    "log_factorial",
    "laguerre",
    "hyp2f0_terminating",
    "g_kernel",
    "hermite_psi",
]

# Above this order the combinatorial coefficients leave exact integer range
# and are assembled in log space instead.
_EXACT_COEFF_LIMIT = 20


@dataclass(frozen=True)
class TerminatingHypParams:
    """Parameters of the terminating 2F0(-n, -j; ; x) series.

    Both upper parameters are non-positive integers, so the series has
    exactly min(n, j) + 1 terms.
    """

    n: int
    j: int
    x: float

    def __post_init__(self):
        if self.n < 0 or self.j < 0:
            raise ValueError("series orders must be non-negative")

    @property
    def term_count(self) -> int:
        return min(self.n, self.j) + 1


def log_factorial(n: int) -> float:
    """ln(n!) for n >= 0, accurate to better than 1e-13 relative up to n ~ 200."""
    if n < 0:
        raise ValueError("factorial argument must be non-negative")
    return math.lgamma(n + 1)


def _kahan_add(total, comp, term):
    # One compensated-summation step; works for scalars and ndarrays alike.
    y = term - comp
    t = total + y
    comp = (t - total) - y
    return t, comp


def _series_coefficient(n: int, j: int, sigma: int) -> float:
    """n! j! / (sigma! (n-sigma)! (j-sigma)!), exact integers at small order,
    exp(log) with the same value above _EXACT_COEFF_LIMIT."""
    if n <= _EXACT_COEFF_LIMIT and j <= _EXACT_COEFF_LIMIT:
        num = math.factorial(n) * math.factorial(j)
        den = math.factorial(sigma) * math.factorial(n - sigma) * math.factorial(j - sigma)
        return num / den
    return math.exp(
        log_factorial(n) + log_factorial(j)
        - log_factorial(sigma) - log_factorial(n - sigma) - log_factorial(j - sigma)
    )


def laguerre(n: int, x):
    """Laguerre polynomial L_n(x) by the upward three-term recurrence
    (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}."""
    if n < 0:
        raise ValueError("Laguerre degree must be non-negative")
    x = np.asarray(x, dtype=float)
    ones = np.ones_like(x)
    if n == 0:
        return ones if ones.ndim else 1.0
    prev = ones
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def hyp2f0_terminating(n: int, j: int, x):
    """2F0(-n, -j; ; x) = sum_{s=0}^{min(n,j)} (-n)_s (-j)_s x^s / s!.

    Terminates because both upper parameters are non-positive integers;
    the alternating terms are accumulated with compensated summation.
    """
    params = TerminatingHypParams(n, j, 0.0)
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    comp = np.zeros_like(x)
    xpow = np.ones_like(x)
    for sigma in range(params.term_count):
        term = _series_coefficient(n, j, sigma) * xpow
        total, comp = _kahan_add(total, comp, term)
        xpow = xpow * x
    return total if total.ndim else float(total)


def g_kernel(n: int, j: int, z):
    """Combined kernel conj(z)^n z^j * 2F0(-n, -j; ; -1/|z|^2) in its
    polynomial form, regular at z = 0:

        G(n, j, z) = sum_s (-1)^s n! j! / (s! (n-s)! (j-s)!)
                     * conj(z)^(n-s) * z^(j-s)

    Satisfies G(j, n, z) = conj(G(n, j, z)) and
    G(n, n, z) = (-1)^n n! L_n(|z|^2).
    """
    if n < 0 or j < 0:
        raise ValueError("kernel orders must be non-negative")
    z = np.asarray(z, dtype=complex)
    zc = np.conj(z)
    # Highest powers first so each term is the previous one divided by z*zbar;
    # building the two power ladders once keeps the cost linear in min(n, j).
    nmax = min(n, j)
    zc_pows = [np.ones_like(z)]
    z_pows = [np.ones_like(z)]
    for _ in range(max(n, j)):
        zc_pows.append(zc_pows[-1] * zc)
        z_pows.append(z_pows[-1] * z)
    total = np.zeros_like(z)
    comp = np.zeros_like(z)
    for sigma in range(nmax + 1):
        coeff = _series_coefficient(n, j, sigma)
        if sigma % 2:
            coeff = -coeff
        term = coeff * zc_pows[n - sigma] * z_pows[j - sigma]
        total, comp = _kahan_add(total, comp, term)
    return total if total.ndim else complex(total)


def hermite_psi(n: int, y):
    """Normalized harmonic-oscillator eigenfunction
    psi_n(y) = (2^n n! sqrt(pi))^{-1/2} H_n(y) exp(-y^2/2),
    evaluated by the stable recurrence on the normalized functions
    psi_{k+1} = sqrt(2/(k+1)) y psi_k - sqrt(k/(k+1)) psi_{k-1}.
    """
    if n < 0:
        raise ValueError("oscillator level must be non-negative")
    y = np.asarray(y, dtype=float)
    psi0 = np.pi ** -0.25 * np.exp(-0.5 * y * y)
    if n == 0:
        return psi0 if psi0.ndim else float(psi0)
    psi1 = math.sqrt(2.0) * y * psi0
    for k in range(1, n):
        psi0, psi1 = psi1, math.sqrt(2.0 / (k + 1)) * y * psi1 - math.sqrt(k / (k + 1)) * psi0
    return psi1 if psi1.ndim else float(psi1)
