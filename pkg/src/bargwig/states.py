"""State catalog: Fock states, coherent states, and finite superpositions,
with exact Bargmann functions, analytic derivative towers, and position
wavefunctions.

The Bargmann function of a state is f(w) = exp(|w|^2 / 2) <psi|w>, an entire
function of w. For the catalog:

    fock(N):      f(z) = z^N / sqrt(N!)
    coherent(U):  f(z) = exp(conj(U) z - |U|^2 / 2)

and superpositions combine linearly. Derivative towers are closed-form;
finite differences appear only in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .phase import BasisParams
from .special import hermite_psi, log_factorial

__all__ = [
    "FockState",
    "CoherentState",
    "Superposition",
    "StateSpec",
    "BargmannDerivatives",
    "bargmann_of_fock",
    "bargmann_of_coherent",
    "bargmann",
    "derivative_tower",
    "position_wavefunction",
    "exact_degree",
    "overlap",
    "norm_squared",
    "superposition",
    "cat_state",
    "state_from_json",
    "state_to_json",
    "state_label",
]

MAX_SUPERPOSITION_TERMS = 64
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class FockState:
    """Number state |n>."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Fock index must be non-negative")


@dataclass(frozen=True)
class CoherentState:
    """Coherent state |u> whose width equals the analysis-basis width b."""

    u: complex

    def __post_init__(self):
        object.__setattr__(self, "u", complex(self.u))


@dataclass(frozen=True)
class Superposition:
    """Normalized finite superposition of Fock and/or coherent states.

    Nesting depth is one: members must be FockState or CoherentState.
    Construction rejects unnormalized coefficient sets; use superposition()
    with normalize=True to rescale.
    """

    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ValueError("superposition needs at least one term")
        if len(self.terms) > MAX_SUPERPOSITION_TERMS:
            raise ValueError(f"superposition capped at {MAX_SUPERPOSITION_TERMS} terms")
        clean = []
        for coeff, member in self.terms:
            if not isinstance(member, (FockState, CoherentState)):
                raise ValueError("superposition members must be Fock or coherent states")
            clean.append((complex(coeff), member))
        object.__setattr__(self, "terms", tuple(clean))
        nsq = norm_squared(self)
        if abs(nsq - 1.0) > NORMALIZATION_TOL:
            raise ValueError(
                f"superposition is not normalized: <psi|psi> = {nsq!r}; "
                "pass normalize=True to superposition() to rescale"
            )


StateSpec = Union[FockState, CoherentState, Superposition]


def overlap(left: StateSpec, right: StateSpec) -> complex:
    """Exact inner product <left|right> for catalog states."""
    if isinstance(left, Superposition):
        return sum(np.conj(c) * overlap(s, right) for c, s in left.terms)
    if isinstance(right, Superposition):
        return sum(c * overlap(left, s) for c, s in right.terms)
    if isinstance(left, FockState) and isinstance(right, FockState):
        return 1.0 + 0.0j if left.n == right.n else 0.0j
    if isinstance(left, FockState) and isinstance(right, CoherentState):
        u = right.u
        amp = math.exp(-0.5 * abs(u) ** 2 - 0.5 * log_factorial(left.n))
        return amp * u ** left.n
    if isinstance(left, CoherentState) and isinstance(right, FockState):
        return np.conj(overlap(right, left))
    if isinstance(left, CoherentState) and isinstance(right, CoherentState):
        v, u = left.u, right.u
        return np.exp(-0.5 * abs(v) ** 2 - 0.5 * abs(u) ** 2 + np.conj(v) * u)
    raise TypeError(f"unsupported state types: {type(left)}, {type(right)}")


def norm_squared(state: StateSpec) -> float:
    """<psi|psi> (real part; the imaginary part cancels exactly)."""
    return float(np.real(overlap(state, state)))


def superposition(terms, normalize: bool = False) -> Superposition:
    """Build a superposition from (coefficient, state) pairs.

    With normalize=True the coefficients are rescaled so <psi|psi> = 1;
    otherwise an unnormalized set is rejected.
    """
    terms = tuple((complex(c), s) for c, s in terms)
    if normalize:
        probe = object.__new__(Superposition)
        object.__setattr__(probe, "terms", terms)
        nsq = norm_squared(probe)
        if nsq <= 0:
            raise ValueError("cannot normalize a null superposition")
        scale = 1.0 / math.sqrt(nsq)
        terms = tuple((c * scale, s) for c, s in terms)
    return Superposition(terms)


def cat_state(u: complex, sign: int = 1) -> Superposition:
    """Normalized two-component cat |u> + sign |-u>."""
    if sign not in (1, -1):
        raise ValueError("cat sign must be +1 or -1")
    return superposition(
        [(1.0, CoherentState(u)), (float(sign), CoherentState(-u))], normalize=True
    )


def bargmann_of_fock(N: int, z):
    """f(z) = z^N / sqrt(N!)."""
    if N < 0:
        raise ValueError("Fock index must be non-negative")
    z = np.asarray(z, dtype=complex)
    val = z ** N * math.exp(-0.5 * log_factorial(N))
    return val if val.ndim else complex(val)


def bargmann_of_coherent(U: complex, z):
    """f(z) = exp(conj(U) z - |U|^2 / 2)."""
    z = np.asarray(z, dtype=complex)
    val = np.exp(np.conj(U) * z - 0.5 * abs(U) ** 2)
    return val if val.ndim else complex(val)


def bargmann(state: StateSpec, z):
    """Bargmann function f(z) of a catalog state."""
    if isinstance(state, FockState):
        return bargmann_of_fock(state.n, z)
    if isinstance(state, CoherentState):
        return bargmann_of_coherent(state.u, z)
    if isinstance(state, Superposition):
        z = np.asarray(z, dtype=complex)
        total = np.zeros_like(z)
        for c, member in state.terms:
            total = total + c * bargmann(member, z)
        return total if total.ndim else complex(total)
    raise TypeError(f"unsupported state type: {type(state)}")


@dataclass(frozen=True)
class BargmannDerivatives:
    """The derivative stack (f, f', ..., f^(K)) of a Bargmann function at z.

    values has shape (K+1,) + shape(z); entry k holds d^k f / dz^k.
    exact_degree is the polynomial degree when f is a polynomial (all higher
    derivatives vanish identically), None otherwise.
    """

    z: np.ndarray
    values: np.ndarray
    exact_degree: Optional[int] = None


def exact_degree(state: StateSpec) -> Optional[int]:
    """Polynomial degree of the Bargmann function, or None if entire non-polynomial."""
    if isinstance(state, FockState):
        return state.n
    if isinstance(state, CoherentState):
        return None
    if isinstance(state, Superposition):
        degs = [exact_degree(s) for _, s in state.terms]
        if any(d is None for d in degs):
            return None
        return max(degs)
    raise TypeError(f"unsupported state type: {type(state)}")


def _fock_tower(N: int, z: np.ndarray, K: int) -> np.ndarray:
    # d^k/dz^k [z^N/sqrt(N!)] = sqrt(N!) z^(N-k)/(N-k)!  for k <= N, else 0
    out = np.zeros((K + 1,) + z.shape, dtype=complex)
    half_log_nfact = 0.5 * log_factorial(N)
    for k in range(min(N, K) + 1):
        coeff = math.exp(half_log_nfact - log_factorial(N - k))
        out[k] = coeff * z ** (N - k)
    return out

def _coherent_tower(U: complex, z: np.ndarray, K: int) -> np.ndarray:
    # d^k f/dz^k = conj(U)^k f(z)
    f = np.exp(np.conj(U) * z - 0.5 * abs(U) ** 2)
    out = np.empty((K + 1,) + z.shape, dtype=complex)
    out[0] = f
    for k in range(1, K + 1):
        out[k] = np.conj(U) * out[k - 1]
    return out


def derivative_tower(state: StateSpec, z, K: int) -> BargmannDerivatives:
    """Exact derivatives d^k f/dz^k for k = 0..K at the point(s) z."""
    if K < 0:
        raise ValueError("tower order must be non-negative")
    z = np.asarray(z, dtype=complex)
    if isinstance(state, FockState):
        return BargmannDerivatives(z, _fock_tower(state.n, z, K), exact_degree=state.n)
    if isinstance(state, CoherentState):
        return BargmannDerivatives(z, _coherent_tower(state.u, z, K), exact_degree=None)
    if isinstance(state, Superposition):
        values = np.zeros((K + 1,) + z.shape, dtype=complex)
        for c, member in state.terms:
            values += c * derivative_tower(member, z, K).values
        return BargmannDerivatives(z, values, exact_degree=exact_degree(state))
    raise TypeError(f"unsupported state type: {type(state)}")


def position_wavefunction(state: StateSpec, y, basis: BasisParams):
    """Normalized position-representation wavefunction psi(y).

    fock(n):     psi(y) = b^{-1/2} phi_n(y/b) with phi_n the dimensionless
                 oscillator eigenfunction;
    coherent(u): psi(y) = pi^{-1/4} b^{-1/2}
                 exp(-(y/b - sqrt(2) u)^2 / 2 + u (u - conj(u)) / 2).
    """
    y = np.asarray(y, dtype=float)
    b = basis.b
    if isinstance(state, FockState):
        val = hermite_psi(state.n, y / b) / math.sqrt(b) + 0.0j
        return val if np.ndim(val) else complex(val)
    if isinstance(state, CoherentState):
        u = state.u
        arg = -0.5 * (y / b - math.sqrt(2.0) * u) ** 2 + 0.5 * u * (u - np.conj(u))
        val = np.pi ** -0.25 / math.sqrt(b) * np.exp(arg)
        return val if np.ndim(val) else complex(val)
    if isinstance(state, Superposition):
        total = np.zeros(y.shape, dtype=complex)
        for c, member in state.terms:
            total = total + c * position_wavefunction(member, y, basis)
        return total if total.ndim else complex(total)
    raise TypeError(f"unsupported state type: {type(state)}")


def state_from_json(obj: dict, normalize: bool = False) -> StateSpec:
    """Parse the state-description JSON schema:

        {"type": "fock", "n": 3}
        {"type": "coherent", "re": 0.7, "im": -0.4}
        {"type": "superposition", "terms": [{"coeff": {"re": .., "im": ..},
                                             "state": {...}}, ...]}

    Unnormalized superpositions are rejected unless normalize is set.
    """
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValueError("state description must be an object with a 'type' field")
    kind = obj["type"]
    if kind == "fock":
        try:
            n = int(obj["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError("fock state needs an integer field 'n'") from exc
        return FockState(n)
    if kind == "coherent":
        try:
            u = complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
        except (TypeError, ValueError) as exc:
            raise ValueError("coherent state fields 're'/'im' must be numbers") from exc
        return CoherentState(u)
    if kind == "superposition":
        raw_terms = obj.get("terms")
        if not isinstance(raw_terms, list) or not raw_terms:
            raise ValueError("superposition needs a non-empty 'terms' list")
        terms = []
        for entry in raw_terms:
            try:
                cdict = entry["coeff"]
                coeff = complex(float(cdict.get("re", 0.0)), float(cdict.get("im", 0.0)))
                member = state_from_json(entry["state"])
            except (KeyError, TypeError, AttributeError) as exc:
                raise ValueError(
                    "superposition terms need 'coeff' {re, im} and 'state' objects"
                ) from exc
            if isinstance(member, Superposition):
                raise ValueError("superpositions cannot nest")
            terms.append((coeff, member))
        return superposition(terms, normalize=normalize)
    raise ValueError(f"unknown state type {kind!r}")


def state_to_json(state: StateSpec) -> dict:
    """Inverse of state_from_json."""
    if isinstance(state, FockState):
        return {"type": "fock", "n": state.n}
    if isinstance(state, CoherentState):
        return {"type": "coherent", "re": state.u.real, "im": state.u.imag}
    if isinstance(state, Superposition):
        return {
            "type": "superposition",
            "terms": [
                {"coeff": {"re": c.real, "im": c.imag}, "state": state_to_json(s)}
                for c, s in state.terms
            ],
        }
    raise TypeError(f"unsupported state type: {type(state)}")


def state_label(state: StateSpec) -> str:
    """Short human-readable tag used in logs and benchmark tables."""
    if isinstance(state, FockState):
        return f"fock({state.n})"
    if isinstance(state, CoherentState):
        return f"coherent({state.u:.3g})"
    if isinstance(state, Superposition):
        return f"superposition[{len(state.terms)}]"
    return repr(state)
