"""Validation suites: closed-form agreement, kernel-variant agreement,
oracle concordance, marginals/normalization, and the basis-geometry checks.

Each check returns a CheckResult with its residual and tolerance; the CLI
`check` subcommand serializes them, and the acceptance tests assert them at
the same tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import TruncationPolicy, wigner_closed_coherent_gaussian, wigner_closed_fock, wigner_series
from .geometry import check_b_independence, check_identity_crossb
from .grid import GridAxis, evaluate_grid
from .oracles import QuadratureSpec, marginal_position, normalization, wigner_config_integral, wigner_phase_integral
from .phase import BasisParams, PhasePoint, qp_from_z, z_from_qp
from .states import CoherentState, FockState, StateSpec, cat_state, position_wavefunction, state_label, superposition

__all__ = ["CheckResult", "SUITES", "run_suite", "suite_series", "suite_oracles", "suite_geometry"]

_SEED = 20260810


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "residual": self.residual,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def _result(name, residual, tolerance, detail="") -> CheckResult:
    return CheckResult(name, bool(residual <= tolerance), float(residual), float(tolerance), detail)


def state_window(state: StateSpec, basis: BasisParams, n_widths: float = 6.0):
    """Rectangle covering n_widths position/momentum widths around the state.

    Returns (q_lo, q_hi, p_lo, p_hi). Superpositions get the envelope of
    their members.
    """
    b, hbar = basis.b, basis.hbar
    if isinstance(state, FockState):
        wq = b * math.sqrt(state.n + 0.5)
        wp = (hbar / b) * math.sqrt(state.n + 0.5)
        return -n_widths * wq, n_widths * wq, -n_widths * wp, n_widths * wp
    if isinstance(state, CoherentState):
        Q, P = qp_from_z(state.u, basis)
        wq = b / math.sqrt(2.0)
        wp = hbar / (b * math.sqrt(2.0))
        return Q - n_widths * wq, Q + n_widths * wq, P - n_widths * wp, P + n_widths * wp
    # superposition: envelope of member windows
    los_q, his_q, los_p, his_p = [], [], [], []
    for _, member in state.terms:
        lo_q, hi_q, lo_p, hi_p = state_window(member, basis, n_widths)
        los_q.append(lo_q)
        his_q.append(hi_q)
        los_p.append(lo_p)
        his_p.append(hi_p)
    return min(los_q), max(his_q), min(los_p), max(his_p)


def _fock_agreement_residual(n_max: int, grid_points: int, extent: float, basis: BasisParams) -> float:
    qs = np.linspace(-extent, extent, grid_points)
    qq, pp = np.meshgrid(qs, qs, indexing="ij")
    z = z_from_qp(qq, pp, basis)
    worst = 0.0
    for n in range(n_max + 1):
        got = wigner_series(FockState(n), z, basis=basis)
        ref = wigner_closed_fock(n, z, basis)
        worst = max(worst, float(np.max(np.abs(got - ref)) / np.max(np.abs(ref))))
    return worst


def _catalog_degree_le(max_degree: int):
    states = [FockState(n) for n in range(max_degree + 1)]
    states.append(
        superposition(
            [(0.5, FockState(0)), (0.5, FockState(1)), (0.5, FockState(2)), (0.5, FockState(3))]
        )
    )
    states.append(CoherentState(0.7 - 0.4j))
    states.append(cat_state(1.2))
    return states


def _variant_agreement_residual(n_points: int, r_lo: float, r_hi: float, basis: BasisParams) -> float:
    rng = np.random.default_rng(_SEED)
    r = rng.uniform(r_lo, r_hi, n_points)
    theta = rng.uniform(0.0, 2.0 * math.pi, n_points)
    z = r * np.exp(1j * theta)
    worst = 0.0
    for state in _catalog_degree_le(8):
        std = wigner_series(state, z, variant="standard", basis=basis)
        scl = wigner_series(state, z, variant="scaled", basis=basis)
        rel = np.abs(std - scl) / np.maximum(np.maximum(np.abs(std), np.abs(scl)), 1e-280)
        worst = max(worst, float(np.max(rel)))
    return worst


def suite_series(tol_override: Optional[float] = None) -> list[CheckResult]:
    basis = BasisParams()
    out = []

    tol = tol_override or 1e-10
    res = _fock_agreement_residual(n_max=8, grid_points=21, extent=3.0, basis=basis)
    out.append(_result("fock-closed-form", res, tol, "fock(0..8), 21x21 grid over [-3,3]^2"))

    tol = tol_override or 1e-9
    res = _variant_agreement_residual(n_points=200, r_lo=0.5, r_hi=4.0, basis=basis)
    out.append(_result("variant-agreement", res, tol, "standard vs scaled, 200 annulus points"))

    tol = tol_override or 1e-12
    target = -1.0 / math.pi
    phase_quad = QuadratureSpec(nodes=257, domain_halfwidth=14.0)
    values = {
        "series": wigner_series(FockState(1), 0j, basis=basis),
        "config-integral": wigner_config_integral(FockState(1), 0.0, 0.0, basis),
        "phase-integral": wigner_phase_integral(FockState(1), 0j, basis, phase_quad, tol=1e-12),
        "closed": wigner_closed_fock(1, 0j, basis),
    }
    res = max(abs(v - target) for v in values.values())
    out.append(_result("negativity-witness", res, tol, "fock(1) at the origin, four methods"))
    return out


def _probe_points(state: StateSpec, basis: BasisParams, n: int = 7, n_widths: float = 3.0):
    q_lo, q_hi, p_lo, p_hi = state_window(state, basis, n_widths)
    qs = np.linspace(q_lo, q_hi, n)
    ps = np.linspace(p_lo, p_hi, n)
    return [(float(q), float(p)) for q in qs for p in ps]


def suite_oracles(tol_override: Optional[float] = None) -> list[CheckResult]:
    basis = BasisParams()
    out = []

    tol = tol_override or 1e-6
    states = [FockState(n) for n in range(5)] + [CoherentState(0.9 - 1.2j), cat_state(1.0)]
    worst = 0.0
    worst_at = ""
    for state in states:
        for q, p in _probe_points(state, basis):
            z = z_from_qp(q, p, basis)
            w_series = wigner_series(state, z, basis=basis)
            w_config = wigner_config_integral(state, q, p, basis)
            w_phase = wigner_phase_integral(state, z, basis)
            dev = max(abs(w_config - w_series), abs(w_phase - w_series)) * math.pi * basis.hbar
            if dev > worst:
                worst, worst_at = dev, f"{state_label(state)} at ({q:.2f}, {p:.2f})"
    out.append(
        _result("oracle-concordance", worst, tol, f"7x7 probes, units 1/(pi hbar); worst {worst_at}")
    )

    tol = tol_override or 1e-6
    states = [FockState(n) for n in range(4)] + [CoherentState(0.8 + 0.55j)]
    worst_norm = 0.0
    worst_marg = 0.0
    for state in states:
        q_lo, q_hi, p_lo, p_hi = state_window(state, basis, 6.0)
        grid = evaluate_grid(state, GridAxis(q_lo, q_hi, 201), GridAxis(p_lo, p_hi, 201), basis)
        worst_norm = max(worst_norm, abs(normalization(grid) - 1.0))
        marg = marginal_position(grid)
        ref = np.abs(position_wavefunction(state, marg.q, basis)) ** 2
        worst_marg = max(worst_marg, float(np.max(np.abs(marg.density - ref))))
    out.append(_result("normalization", worst_norm, tol, "201x201 grids over 6 state widths"))
    out.append(_result("position-marginal", worst_marg, tol, "marginal vs |psi(q)|^2, pointwise"))
    return out


def suite_geometry(tol_override: Optional[float] = None) -> list[CheckResult]:
    hbar = 1.0
    U_center = (0.7, -0.4, 1.5)  # Q, P, B
    out = []

    tol = tol_override or 1e-6
    Q, P, B = U_center
    U = z_from_qp(Q, P, BasisParams(B, hbar))
    worst = 0.0
    scale = 1.0 / (math.pi * hbar)
    for b in (0.8, 1.0, 1.25):
        for q in np.linspace(-2.0, 2.0, 5):
            for p in np.linspace(-2.0, 2.0, 5):
                point = PhasePoint(float(q), float(p), BasisParams(b, hbar))
                report = check_identity_crossb(U, B, point, step=1e-3 * b)
                worst = max(worst, report.max_residual / max(abs(report.lhs), scale))
    out.append(_result("width-derivative-identity", worst, tol, "5x5x3 scan of (q, p, b)"))

    # second-order convergence of the central difference
    point = PhasePoint(1.3, 0.7, BasisParams(1.0, hbar))
    r1 = check_identity_crossb(U, B, point, step=2e-2).residuals["qp"]
    r2 = check_identity_crossb(U, B, point, step=1e-2).residuals["qp"]
    ratio = r1 / r2 if r2 > 0 else float("inf")
    res = abs(ratio - 4.0)
    out.append(
        _result("step-halving-convergence", res, 0.5 if tol_override is None else tol_override,
                f"residual ratio {ratio:.3f} for steps 2e-2 / 1e-2")
    )

    tol = tol_override or 1e-11
    rng = np.random.default_rng(_SEED)
    worst = 0.0
    for _ in range(100):
        q, p = rng.uniform(-3.0, 3.0, 2)
        worst = max(worst, check_b_independence(Q, P, B, float(q), float(p), 1.0, 2.0, hbar))
    out.append(_result("b-independence", worst, tol, "100 random points, bases b=1 vs b=2"))
    return out


SUITES = {
    "series": suite_series,
    "oracles": suite_oracles,
    "geometry": suite_geometry,
}


def run_suite(suite: str, tol_override: Optional[float] = None) -> list[CheckResult]:
    """Run one named suite or 'all'; returns the individual check results."""
    if suite == "all":
        results = []
        for fn in SUITES.values():
            results.extend(fn(tol_override))
        return results
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {('all', *SUITES)}")
    return SUITES[suite](tol_override)
