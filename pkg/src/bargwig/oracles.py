"""Integral-representation oracles for the series engine.

Two independent routes to W:

  configuration space:
      W(q, p) = 1/(2 pi hbar) Int dy psi(q + y/2) conj(psi(q - y/2))
                exp(-i p y / hbar)

  phase space (Bargmann form):
      W(z, z*) = exp(-|z|^2)/(4 pi hbar) Int du dv / pi
                 conj(f(z + w/2)) f(z - w/2)
                 exp(-|w|^2/4 + z* w/2 - z w*/2),   w = u + i v

plus grid-level distributional checks (position marginal, normalization).
Every oracle self-checks by node doubling and rejects results whose
imaginary residual exceeds its budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .phase import BasisParams
from .states import StateSpec, bargmann, position_wavefunction

__all__ = [
    "QuadratureSpec",
    "OracleConvergenceError",
    "quadrature_nodes",
    "wigner_config_integral",
    "wigner_phase_integral",
    "MarginalDensity",
    "marginal_position",
    "normalization",
]

DEFAULT_CONFIG_HALFWIDTH = 12.0  # units of b, along the shift variable y
DEFAULT_PHASE_HALFWIDTH = 10.0  # per axis of w
DEFAULT_NODES = 257


class OracleConvergenceError(RuntimeError):
    """Node doubling moved the result by more than the allowed budget."""

    def __init__(self, message: str, coarse: complex, fine: complex):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature rule on [-H, H]: rule name, node count, halfwidth H."""

    rule: str = "gauss_legendre"
    nodes: int = DEFAULT_NODES
    domain_halfwidth: float = DEFAULT_CONFIG_HALFWIDTH

    def __post_init__(self):
        if self.rule not in ("gauss_legendre", "tanh_sinh"):
            raise ValueError(f"unknown quadrature rule {self.rule!r}")
        if self.nodes < 32:
            raise ValueError("at least 32 quadrature nodes required")
        if not self.domain_halfwidth > 0:
            raise ValueError("quadrature halfwidth must be positive")


def quadrature_nodes(rule: str, nodes: int, halfwidth: float):
    """Nodes and weights on [-halfwidth, halfwidth]."""
    if rule == "gauss_legendre":
        x, w = np.polynomial.legendre.leggauss(nodes)
        return x * halfwidth, w * halfwidth
    if rule == "tanh_sinh":
        m = nodes // 2
        # step chosen so the outermost abscissa sits ~1e-15 from the endpoint
        t_max = math.asinh(math.atanh(1.0 - 1e-15) * 2.0 / math.pi)
        h = t_max / m
        k = np.arange(-m, m + 1) * h
        u = 0.5 * math.pi * np.sinh(k)
        x = np.tanh(u)
        w = h * 0.5 * math.pi * np.cosh(k) / np.cosh(u) ** 2
        return x * halfwidth, w * halfwidth
    raise ValueError(f"unknown quadrature rule {rule!r}")


def _config_value(state, q, p, basis, rule, nodes, halfwidth) -> complex:
    y, w = quadrature_nodes(rule, nodes, halfwidth * basis.b)
    left = position_wavefunction(state, q + y / 2.0, basis)
    right = np.conj(position_wavefunction(state, q - y / 2.0, basis))
    kernel = np.exp(-1j * p * y / basis.hbar)
    return complex(np.sum(left * right * kernel * w) / (2.0 * math.pi * basis.hbar))


def wigner_config_integral(
    state: StateSpec,
    q: float,
    p: float,
    basis: BasisParams,
    quad: QuadratureSpec | None = None,
    tol: float = 1e-8,
) -> float:
    """Configuration-space quadrature estimate of W(q, p).

    The y-cutoff is quad.domain_halfwidth in units of the basis width b.
    Raises OracleConvergenceError if doubling the node count moves the value
    by more than 10*tol.
    """
    quad = quad or QuadratureSpec(domain_halfwidth=DEFAULT_CONFIG_HALFWIDTH)
    coarse = _config_value(state, q, p, basis, quad.rule, quad.nodes, quad.domain_halfwidth)
    fine = _config_value(state, q, p, basis, quad.rule, 2 * quad.nodes + 1, quad.domain_halfwidth)
    if abs(fine - coarse) > 10.0 * tol:
        raise OracleConvergenceError(
            f"configuration-space quadrature not converged at (q={q}, p={p}): "
            f"{coarse} vs {fine} under node doubling",
            coarse,
            fine,
        )
    if abs(fine.imag) > 1e-8:
        raise ArithmeticError(f"imaginary residual {fine.imag:.3e} in configuration integral")
    return fine.real


def _phase_value(state, z, basis, rule, nodes, halfwidth) -> complex:
    x, w = quadrature_nodes(rule, nodes, halfwidth)
    wgrid = x[:, None] + 1j * x[None, :]
    w2d = np.outer(w, w)
    left = np.conj(bargmann(state, z + wgrid / 2.0))
    right = bargmann(state, z - wgrid / 2.0)
    kernel = np.exp(
        -(np.conj(wgrid) * wgrid).real / 4.0
        + np.conj(z) * wgrid / 2.0
        - z * np.conj(wgrid) / 2.0
    )
    integral = np.sum(left * right * kernel * w2d) / math.pi
    return complex(math.exp(-abs(z) ** 2) / (4.0 * math.pi * basis.hbar) * integral)


def wigner_phase_integral(
    state: StateSpec,
    z: complex,
    basis: BasisParams,
    quad: QuadratureSpec | None = None,
    tol: float = 1e-8,
) -> float:
    """Phase-space quadrature estimate of W at the label z, integrating the
    Bargmann product over w = u + iv on [-H, H]^2 with measure du dv / pi."""
    quad = quad or QuadratureSpec(domain_halfwidth=DEFAULT_PHASE_HALFWIDTH)
    coarse = _phase_value(state, z, basis, quad.rule, quad.nodes, quad.domain_halfwidth)
    fine = _phase_value(state, z, basis, quad.rule, 2 * quad.nodes + 1, quad.domain_halfwidth)
    if abs(fine - coarse) > 10.0 * tol:
        raise OracleConvergenceError(
            f"phase-space quadrature not converged at z={z}: "
            f"{coarse} vs {fine} under node doubling",
            coarse,
            fine,
        )
    if abs(fine.imag) > 1e-7:
        raise ArithmeticError(f"imaginary residual {fine.imag:.3e} in phase-space integral")
    return fine.real


@dataclass(frozen=True)
class MarginalDensity:
    """Position density obtained by integrating a Wigner grid over p."""

    q: np.ndarray
    density: np.ndarray
    warning: Optional[str] = None


def marginal_position(grid) -> MarginalDensity:
    """Trapezoid-integrate W over p at each q column.

    Attaches a warning when the grid boundary still carries weight
    (|W| > 1e-6 of the peak), which biases the marginal.
    """
    q = grid.q_axis.points
    p = grid.p_axis.points
    values = grid.values
    density = np.trapezoid(values, p, axis=1)
    peak = np.max(np.abs(values))
    edge = max(
        np.max(np.abs(values[0, :])),
        np.max(np.abs(values[-1, :])),
        np.max(np.abs(values[:, 0])),
        np.max(np.abs(values[:, -1])),
    )
    warning = None
    if peak > 0 and edge > 1e-6 * peak:
        warning = (
            f"grid too narrow: boundary |W| up to {edge:.3e} "
            f"({edge / peak:.1e} of peak) leaks out of the window"
        )
    return MarginalDensity(q=q, density=density, warning=warning)


def normalization(grid) -> float:
    """Two-dimensional trapezoid integral of the grid; 1 for a valid state."""
    q = grid.q_axis.points
    p = grid.p_axis.points
    return float(np.trapezoid(np.trapezoid(grid.values, p, axis=1), q))
