import math

import numpy as np
import pytest

from bargwig.core import (
    KernelMatrix,
    TruncationError,
    TruncationPolicy,
    build_F,
    choose_truncation,
    wigner_closed_coherent_crossb,
    wigner_closed_coherent_gaussian,
    wigner_closed_fock,
    wigner_series,
)
from bargwig.phase import BasisParams, qp_from_z, z_from_qp
from bargwig.special import hyp2f0_terminating, log_factorial
from bargwig.states import CoherentState, FockState, cat_state, derivative_tower, superposition

RNG_SEED = 307

CATALOG = [
    FockState(0),
    FockState(1),
    FockState(4),
    CoherentState(0.7 - 0.4j),
    superposition([(1 / math.sqrt(2), FockState(0)), (1j / math.sqrt(2), FockState(1))]),
    cat_state(1.1),
]


def quadratic_form_reference(state, z, variant):
    """V†FV through build_F with explicit Taylor weights; the slow route."""
    deg = choose_truncation(state, z, TruncationPolicy())
    F = build_F(z, deg, variant).entries
    tower = derivative_tower(state, z, deg).values
    weights = np.exp(-np.array([log_factorial(k) for k in range(deg + 1)]))
    v = tower * weights
    if variant == "scaled":
        v = v * np.array([z**k for k in range(deg + 1)])
    form = np.vdot(v, F @ v)
    return math.exp(-2 * abs(z) ** 2) / math.pi * form.real


class TestTruncationPolicy:
    def test_defaults(self):
        pol = TruncationPolicy()
        assert pol.mode == "adaptive" and pol.max_order == 64 and pol.tail_tolerance == 1e-12

    @pytest.mark.parametrize(
        "kwargs",
        [{"mode": "magic"}, {"max_order": 0}, {"tail_tolerance": 0.0}, {"tail_tolerance": -1.0}],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            TruncationPolicy(**kwargs)


class TestBuildF:
    def test_order_zero(self):
        F = build_F(0.3 + 0.2j, 0)
        assert F.entries.shape == (1, 1)
        assert F.entries[0, 0] == 1.0 + 0j
        assert F.order == 0

    def test_standard_entry_11(self):
        z = 0.8 - 0.5j
        F = build_F(z, 2, "standard")
        assert F.entries[1, 1] == pytest.approx(abs(z) ** 2 - 1.0)

    def test_standard_at_origin_is_signed_factorial_diagonal(self):
        F = build_F(0j, 4, "standard").entries
        for n in range(5):
            for j in range(5):
                want = (-1.0) ** n * math.factorial(n) if n == j else 0.0
                assert F[n, j] == pytest.approx(want)

    def test_standard_hermitian(self):
        rng = np.random.default_rng(RNG_SEED)
        for _ in range(20):
            z = complex(rng.normal(), rng.normal())
            F = build_F(z, 12, "standard").entries
            assert np.max(np.abs(F - F.conj().T)) <= 1e-14 * max(1.0, np.max(np.abs(F)))

    def test_scaled_real_symmetric(self):
        z = 1.7 + 0.6j
        F = build_F(z, 10, "scaled")
        assert F.entries.dtype == float
        assert np.array_equal(F.entries, F.entries.T)

    def test_scaled_entries_are_2f0_values(self):
        z = 2.0 - 1.0j
        x = -1.0 / abs(z) ** 2
        F = build_F(z, 6, "scaled").entries
        for n in range(7):
            for j in range(7):
                assert F[n, j] == pytest.approx(hyp2f0_terminating(n, j, x), rel=1e-14)

    def test_scaled_singular_at_origin(self):
        with pytest.raises(ValueError, match="singular at origin"):
            build_F(0j, 3, "scaled")

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            build_F(1j, 2, "fancy")

    def test_negative_order(self):
        with pytest.raises(ValueError):
            build_F(1j, -1)


class TestChooseTruncation:
    def test_fock_exact_degree(self):
        assert choose_truncation(FockState(5), 1j, TruncationPolicy()) == 5

    def test_superposition_takes_max_degree(self):
        st = superposition(
            [(0.5, FockState(0)), (0.5, FockState(1)), (0.5, FockState(2)), (0.5, FockState(3))]
        )
        assert choose_truncation(st, 0.3 + 0j, TruncationPolicy()) == 3

    def test_coherent_regression_value(self):
        # frozen once computed; must stay at or below 40
        K = choose_truncation(CoherentState(1.0), 1.0 + 0j, TruncationPolicy())
        assert K == 27
        assert K <= 40

    def test_exact_degree_mode_rejects_entire_states(self):
        with pytest.raises(ValueError, match="adaptive"):
            choose_truncation(CoherentState(1.0), 1j, TruncationPolicy(mode="exact_degree"))

    def test_cap_error_carries_estimate(self):
        policy = TruncationPolicy(max_order=4, tail_tolerance=1e-14)
        with pytest.raises(TruncationError) as err:
            choose_truncation(CoherentState(2.0), 2.0 + 0j, policy)
        assert err.value.tail_estimate > 1e-14

    def test_grows_with_amplitude(self):
        pol = TruncationPolicy()
        k_small = choose_truncation(CoherentState(0.3), 0.5j, pol)
        k_large = choose_truncation(CoherentState(1.5), 2.5j, pol)
        assert k_small < k_large


class TestWignerSeries:
    def test_vacuum_peak(self):
        assert wigner_series(FockState(0), 0j) == pytest.approx(1 / math.pi, rel=1e-14)

    def test_vacuum_peak_hbar(self):
        basis = BasisParams(hbar=2.0)
        assert wigner_series(FockState(0), 0j, basis=basis) == pytest.approx(1 / (2 * math.pi))

    def test_fock1_negative_origin(self):
        assert wigner_series(FockState(1), 0j) == pytest.approx(-1 / math.pi, rel=1e-14)

    def test_matches_fock_closed_form(self):
        rng = np.random.default_rng(RNG_SEED)
        z = rng.uniform(-2.1, 2.1, (2, 100)).view(np.complex128) if False else (
            rng.uniform(0.0, 3.0, 100) * np.exp(1j * rng.uniform(0, 2 * np.pi, 100))
        )
        for n in range(9):
            got = wigner_series(FockState(n), z)
            ref = wigner_closed_fock(n, z)
            assert np.max(np.abs(got - ref)) <= 1e-10 * np.max(np.abs(ref))

    def test_matches_buildf_route_standard(self):
        for state in CATALOG:
            for z in (0.4 + 0.3j, 1.9 - 0.8j):
                got = wigner_series(state, z, variant="standard")
                ref = quadratic_form_reference(state, z, "standard")
                assert got == pytest.approx(ref, rel=1e-11, abs=1e-14)

    def test_matches_buildf_route_scaled(self):
        for state in CATALOG:
            for z in (0.4 + 0.3j, 1.9 - 0.8j):
                got = wigner_series(state, z, variant="scaled")
                ref = quadratic_form_reference(state, z, "scaled")
                assert got == pytest.approx(ref, rel=1e-11, abs=1e-14)

    def test_variant_agreement_annulus(self):
        rng = np.random.default_rng(RNG_SEED)
        z = rng.uniform(0.5, 4.0, 200) * np.exp(1j * rng.uniform(0, 2 * np.pi, 200))
        for state in CATALOG:
            std = wigner_series(state, z, variant="standard")
            scl = wigner_series(state, z, variant="scaled")
            rel = np.abs(std - scl) / np.maximum(np.maximum(np.abs(std), np.abs(scl)), 1e-280)
            assert np.max(rel) <= 1e-9

    def test_scaled_rejects_origin(self):
        with pytest.raises(ValueError, match="singular at origin"):
            wigner_series(FockState(1), 0j, variant="scaled")

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            wigner_series(FockState(0), 0j, variant="weird")

    def test_rotational_symmetry_for_fock(self):
        rng = np.random.default_rng(RNG_SEED)
        for n in (1, 3, 6):
            r = rng.uniform(0.2, 3.0, 40)
            th1, th2 = rng.uniform(0, 2 * np.pi, (2, 40))
            w1 = wigner_series(FockState(n), r * np.exp(1j * th1))
            w2 = wigner_series(FockState(n), r * np.exp(1j * th2))
            assert np.max(np.abs(w1 - w2)) <= 1e-11

    def test_global_bound(self):
        rng = np.random.default_rng(RNG_SEED)
        z = rng.uniform(0, 4.0, 300) * np.exp(1j * rng.uniform(0, 2 * np.pi, 300))
        for state in CATALOG:
            w = wigner_series(state, z)
            assert np.max(np.abs(w)) <= 1 / math.pi + 1e-9

    def test_realness_residual_within_budget(self):
        # the engine raises if the imaginary residual exceeds 1e-10 relative;
        # a broad random scan must therefore pass silently
        rng = np.random.default_rng(RNG_SEED + 1)
        z = rng.uniform(0, 4.0, 500) * np.exp(1j * rng.uniform(0, 2 * np.pi, 500))
        for state in CATALOG:
            wigner_series(state, z)

    def test_scalar_and_array_shapes(self):
        out = wigner_series(FockState(2), 0.5 + 0.5j)
        assert isinstance(out, float)
        grid = np.full((3, 4), 0.5 + 0.5j)
        assert wigner_series(FockState(2), grid).shape == (3, 4)

    def test_exact_degree_superposition_sum(self):
        # interference term of a 2-component Fock superposition, checked
        # against a dense-matrix evaluation
        st = superposition([(1 / math.sqrt(2), FockState(0)), (1j / math.sqrt(2), FockState(1))])
        z = 0.6 - 0.2j
        assert wigner_series(st, z) == pytest.approx(
            quadratic_form_reference(st, z, "standard"), rel=1e-12
        )


class TestClosedForms:
    def test_fock_peak_values(self):
        assert wigner_closed_fock(0, 0j) == pytest.approx(1 / math.pi)
        assert wigner_closed_fock(2, 0j) == pytest.approx(1 / math.pi)

    def test_fock1_zero_crossing(self):
        z = 0.5  # 4|z|^2 = 1, the L1 root
        assert wigner_closed_fock(1, z + 0j) == pytest.approx(0.0, abs=1e-16)

    def test_gaussian_peak_and_width(self):
        assert wigner_closed_coherent_gaussian(0.7, -0.4, 1.5, 0.7, -0.4) == pytest.approx(1 / math.pi)
        got = wigner_closed_coherent_gaussian(0.7, -0.4, 1.5, 0.7 + 1.5, -0.4)
        assert got == pytest.approx(math.exp(-1) / math.pi)

    def test_gaussian_integrates_to_one(self):
        x, w = np.polynomial.legendre.leggauss(200)
        q = 0.7 + 12.0 * x
        p = -0.4 + 12.0 * x
        qq, pp = np.meshgrid(q, p, indexing="ij")
        vals = wigner_closed_coherent_gaussian(0.7, -0.4, 1.5, qq, pp)
        integral = (12.0 * w) @ vals @ (12.0 * w)
        assert integral == pytest.approx(1.0, abs=1e-8)

    def test_crossb_reduces_at_equal_widths(self):
        basis = BasisParams(b=1.5)
        U = 0.5 - 0.1j
        for z in (0.3 + 0.4j, -1.0 + 0.2j):
            got = wigner_closed_coherent_crossb(U, 1.5, z, basis)
            want = math.exp(-2 * abs(z - U) ** 2) / math.pi
            assert got == pytest.approx(want, rel=1e-13)

    def test_crossb_matches_gaussian_grid(self):
        Q, P, B = 0.7, -0.4, 1.5
        hbar = 1.0
        U = z_from_qp(Q, P, BasisParams(B, hbar))
        basis = BasisParams(1.0, hbar)
        qs = np.linspace(-2, 2, 11)
        qq, pp = np.meshgrid(qs, qs, indexing="ij")
        z = z_from_qp(qq, pp, basis)
        got = wigner_closed_coherent_crossb(U, B, z, basis)
        want = wigner_closed_coherent_gaussian(Q, P, B, qq, pp, hbar)
        assert np.max(np.abs(got - want) / np.abs(want)) <= 1e-10

    def test_crossb_is_basis_independent(self):
        Q, P, B = 0.7, -0.4, 1.5
        U = z_from_qp(Q, P, BasisParams(B))
        for q, p in [(1.0, 1.0), (-0.3, 2.1)]:
            w1 = wigner_closed_coherent_crossb(U, B, z_from_qp(q, p, BasisParams(1.0)), BasisParams(1.0))
            w2 = wigner_closed_coherent_crossb(U, B, z_from_qp(q, p, BasisParams(2.0)), BasisParams(2.0))
            assert abs(w1 - w2) <= 1e-12

    def test_series_matches_gaussian_for_coherent(self):
        u = 0.7 - 0.4j
        basis = BasisParams()
        Q, P = qp_from_z(u, basis)
        qs = np.linspace(-2.5, 2.5, 9)
        qq, pp = np.meshgrid(qs, qs, indexing="ij")
        z = z_from_qp(qq, pp, basis)
        got = wigner_series(CoherentState(u), z, basis=basis)
        want = wigner_closed_coherent_gaussian(Q, P, basis.b, qq, pp, basis.hbar)
        assert np.max(np.abs(got - want)) <= 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            wigner_closed_fock(-1, 0j)
        with pytest.raises(ValueError):
            wigner_closed_coherent_gaussian(0, 0, -1.0, 0, 0)
        with pytest.raises(ValueError):
            wigner_closed_coherent_crossb(0j, 0.0, 0j, BasisParams())


class TestKernelMatrixType:
    def test_fields(self):
        F = build_F(1 + 1j, 3, "standard")
        assert isinstance(F, KernelMatrix)
        assert F.z == 1 + 1j
        assert F.variant == "standard"
        assert F.order == 3
