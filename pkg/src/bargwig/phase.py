"""Coordinate algebra between real phase space (q, p) and the complex
coherent-state label z, for a basis of width b and action scale hbar.

Convention: sqrt(2) z = q/b + i b p / hbar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BasisParams",
    "PhasePoint",
    "WirtingerCoefficients",
    "z_from_qp",
    "qp_from_z",
    "wirtinger_coefficients",
]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class BasisParams:
    """Coherent-state basis parameters: width b (length) and hbar (action)."""

    b: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("basis width b must be positive")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")


def z_from_qp(q, p, basis: BasisParams):
    """Complex label z = (q/b + i b p/hbar) / sqrt(2)."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    z = (q / basis.b + 1j * basis.b * p / basis.hbar) / _SQRT2
    return z if z.ndim else complex(z)


def qp_from_z(z, basis: BasisParams):
    """Inverse of z_from_qp: q = sqrt(2) b Re z, p = sqrt(2) hbar Im z / b."""
    z = np.asarray(z, dtype=complex)
    q = _SQRT2 * basis.b * z.real
    p = _SQRT2 * basis.hbar * z.imag / basis.b
    if q.ndim:
        return q, p
    return float(q), float(p)


@dataclass(frozen=True)
class PhasePoint:
    """A phase-space point with its basis and the derived complex label."""

    q: float
    p: float
    basis: BasisParams = field(default_factory=BasisParams)
    z: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "z", z_from_qp(self.q, self.p, self.basis))


@dataclass(frozen=True)
class WirtingerCoefficients:
    """Real coefficients expressing d/dz and d/dz* through d/dq and d/dp:

        d/dz  = dq_dz * d/dq + i * dp_dz  * d/dp
        d/dz* = dq_dz * d/dq + i * dp_dzs * d/dp

    with dq_dz = b/sqrt(2), dp_dz = -hbar/(b sqrt(2)), dp_dzs = +hbar/(b sqrt(2)).
    """

    dq_dz: float
    dp_dz: float
    dq_dzs: float
    dp_dzs: float

    def d_dz(self, w_q, w_p):
        """Assemble dW/dz from the real partials (dW/dq, dW/dp)."""
        return self.dq_dz * w_q + 1j * self.dp_dz * w_p

    def d_dzstar(self, w_q, w_p):
        """Assemble dW/dz* from the real partials (dW/dq, dW/dp)."""
        return self.dq_dzs * w_q + 1j * self.dp_dzs * w_p


def wirtinger_coefficients(basis: BasisParams) -> WirtingerCoefficients:
    """Coefficients of d/dz = (b d/dq - i (hbar/b) d/dp)/sqrt(2) and its conjugate."""
    a = basis.b / _SQRT2
    c = basis.hbar / (basis.b * _SQRT2)
    return WirtingerCoefficients(dq_dz=a, dp_dz=-c, dq_dzs=a, dp_dzs=c)
