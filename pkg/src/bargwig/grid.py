"""Rectangular (q, p) Wigner grids: evaluation with any method, CSV/JSON
serialization, and convex mixing.

Grid evaluation parallelizes over q-rows with a process pool capped by the
BARGWIG_THREADS environment variable (default: hardware concurrency); the
truncation order is frozen before chunking and output assembly is row-major,
so results are byte-identical for any worker count.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .core import TruncationPolicy, choose_truncation, wigner_closed_coherent_gaussian, wigner_closed_fock, wigner_series
from .oracles import QuadratureSpec, DEFAULT_PHASE_HALFWIDTH, wigner_config_integral, wigner_phase_integral
from .phase import BasisParams, qp_from_z, z_from_qp
from .states import CoherentState, FockState, StateSpec, exact_degree, state_to_json

__all__ = ["GridAxis", "WignerGrid", "evaluate_grid", "mix", "METHODS"]

METHODS = ("series", "series-scaled", "config-integral", "phase-integral", "closed")

BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class GridAxis:
    """Uniform axis samples: count points from lo to hi inclusive."""

    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("each grid axis needs at least 2 points")
        if not self.hi > self.lo:
            raise ValueError("axis upper bound must exceed lower bound")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass
class WignerGrid:
    """W values on a rectangular lattice; values[i, j] = W(q_i, p_j)."""

    q_axis: GridAxis
    p_axis: GridAxis
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def validate(self, hbar: float = 1.0) -> None:
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid contains non-finite values")
        bound = 1.0 / (math.pi * hbar) + BOUND_SLACK
        worst = float(np.max(np.abs(self.values)))
        if worst > bound:
            raise ValueError(f"|W| = {worst} exceeds the 1/(pi hbar) bound {bound}")

    def to_dict(self, include_timestamp: bool = True) -> dict:
        meta = dict(self.metadata)
        if not include_timestamp:
            meta.pop("timestamp", None)
        return {
            "q_axis": {"min": self.q_axis.lo, "max": self.q_axis.hi, "count": self.q_axis.count},
            "p_axis": {"min": self.p_axis.lo, "max": self.p_axis.hi, "count": self.p_axis.count},
            "values": [list(row) for row in self.values],
            "metadata": meta,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "WignerGrid":
        qa = GridAxis(obj["q_axis"]["min"], obj["q_axis"]["max"], obj["q_axis"]["count"])
        pa = GridAxis(obj["p_axis"]["min"], obj["p_axis"]["max"], obj["p_axis"]["count"])
        values = np.asarray(obj["values"], dtype=float)
        if values.shape != (qa.count, pa.count):
            raise ValueError("value array does not match the axes")
        return cls(qa, pa, values, dict(obj.get("metadata", {})))

    def csv_lines(self):
        """Row-major q,p,W lines at 17 significant digits, deterministic."""
        yield f"# bargwig v{__version__}"
        yield "q,p,W"
        qs = self.q_axis.points
        ps = self.p_axis.points
        for i, q in enumerate(qs):
            for j, p in enumerate(ps):
                yield f"{q:.17g},{p:.17g},{self.values[i, j]:.17g}"

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            for line in self.csv_lines():
                fh.write(line + "\n")

    def write_json(self, path, include_timestamp: bool = True) -> None:
        import json

        with open(path, "w") as fh:
            json.dump(self.to_dict(include_timestamp=include_timestamp), fh, sort_keys=True)
            fh.write("\n")


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("BARGWIG_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValueError(f"BARGWIG_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def _closed_form_rows(state, q_rows, p_pts, basis):
    qq, pp = np.meshgrid(q_rows, p_pts, indexing="ij")
    if isinstance(state, FockState):
        z = z_from_qp(qq, pp, basis)
        return wigner_closed_fock(state.n, z, basis)
    if isinstance(state, CoherentState):
        Q, P = qp_from_z(state.u, basis)
        return wigner_closed_coherent_gaussian(Q, P, basis.b, qq, pp, basis.hbar)
    raise ValueError("closed-form evaluation is only available for Fock and coherent states")


def _eval_rows(state, q_rows, p_pts, basis, method, order, tol):
    """Evaluate a block of q-rows; the worker entry point for the pool."""
    qq, pp = np.meshgrid(q_rows, p_pts, indexing="ij")
    if method in ("series", "series-scaled"):
        z = z_from_qp(qq, pp, basis)
        variant = "auto" if method == "series" else "scaled"
        policy = TruncationPolicy(tail_tolerance=tol) if tol else TruncationPolicy()
        return wigner_series(state, z, policy=policy, variant=variant, basis=basis, order=order)
    if method == "config-integral":
        out = np.empty(qq.shape)
        quad = QuadratureSpec()
        for i in range(qq.shape[0]):
            for j in range(qq.shape[1]):
                out[i, j] = wigner_config_integral(state, qq[i, j], pp[i, j], basis, quad)
        return out
    if method == "phase-integral":
        out = np.empty(qq.shape)
        quad = QuadratureSpec(domain_halfwidth=DEFAULT_PHASE_HALFWIDTH)
        for i in range(qq.shape[0]):
            for j in range(qq.shape[1]):
                z = z_from_qp(qq[i, j], pp[i, j], basis)
                out[i, j] = wigner_phase_integral(state, z, basis, quad)
        return out
    if method == "closed":
        return _closed_form_rows(state, q_rows, p_pts, basis)
    raise ValueError(f"unknown method {method!r}")


def evaluate_grid(
    state: StateSpec,
    q_axis: GridAxis,
    p_axis: GridAxis,
    basis: Optional[BasisParams] = None,
    method: str = "series",
    tol: Optional[float] = None,
    threads: Optional[int] = None,
) -> WignerGrid:
    """Evaluate W on the lattice q_axis x p_axis with the chosen method.

    method is one of METHODS; tol feeds the series tail tolerance or the
    oracle convergence budget. Rows are distributed over a process pool
    (BARGWIG_THREADS caps it) and reassembled in fixed row-major order.
    """
    basis = basis or BasisParams()
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")

    q_pts = q_axis.points
    p_pts = p_axis.points

    order = None
    if method in ("series", "series-scaled"):
        # One truncation order for the whole grid keeps chunked evaluation
        # identical to serial evaluation.
        policy = TruncationPolicy(tail_tolerance=tol) if tol else TruncationPolicy()
        qq, pp = np.meshgrid(q_pts, p_pts, indexing="ij")
        order = choose_truncation(state, z_from_qp(qq, pp, basis), policy)

    threads = _resolve_threads(threads)
    n_chunks = min(threads, len(q_pts))
    if n_chunks <= 1:
        values = _eval_rows(state, q_pts, p_pts, basis, method, order, tol)
    else:
        from concurrent.futures import ProcessPoolExecutor

        bounds = np.linspace(0, len(q_pts), n_chunks + 1).astype(int)
        blocks = []
        with ProcessPoolExecutor(max_workers=n_chunks) as pool:
            futures = [
                pool.submit(_eval_rows, state, q_pts[lo:hi], p_pts, basis, method, order, tol)
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if hi > lo
            ]
            blocks = [f.result() for f in futures]
        values = np.vstack(blocks)

    grid = WignerGrid(
        q_axis,
        p_axis,
        np.asarray(values, dtype=float),
        metadata={
            "state": state_to_json(state),
            "basis": {"b": basis.b, "hbar": basis.hbar},
            "method": method,
            "truncation_order": order if order is not None else exact_degree(state),
            "tool": "bargwig",
            "version": __version__,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        },
    )
    grid.validate(basis.hbar)
    return grid


def mix(grids: Sequence[WignerGrid], weights: Sequence[float]) -> WignerGrid:
    """Convex combination sum_i w_i W_i of compatible grids (a mixed-ensemble
    Wigner function is the weighted average of its components')."""
    if len(grids) != len(weights) or not grids:
        raise ValueError("need matching, non-empty grids and weights")
    weights = [float(w) for w in weights]
    if any(w < 0 for w in weights):
        raise ValueError("mixture weights must be non-negative")
    if abs(sum(weights) - 1.0) > 1e-12:
        raise ValueError("mixture weights must sum to 1")
    first = grids[0]
    for g in grids[1:]:
        if g.q_axis != first.q_axis or g.p_axis != first.p_axis:
            raise ValueError("all grids in a mixture must share the same axes")
    values = np.zeros_like(first.values)
    for w, g in zip(weights, grids):
        values += w * g.values
    return WignerGrid(
        first.q_axis,
        first.p_axis,
        values,
        metadata={
            "method": "mixture",
            "weights": weights,
            "components": [g.metadata for g in grids],
            "tool": "bargwig",
            "version": __version__,
        },
    )
