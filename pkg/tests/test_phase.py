import math

import numpy as np
import pytest

from bargwig.phase import (
    BasisParams,
    PhasePoint,
    qp_from_z,
    wirtinger_coefficients,
    z_from_qp,
)

SQRT2 = math.sqrt(2.0)


class TestBasisParams:
    def test_defaults(self):
        basis = BasisParams()
        assert basis.b == 1.0 and basis.hbar == 1.0

    @pytest.mark.parametrize("kwargs", [{"b": 0.0}, {"b": -1.0}, {"hbar": 0.0}, {"hbar": -2.0}])
    def test_rejects_nonpositive(self, kwargs):
        with pytest.raises(ValueError):
            BasisParams(**kwargs)


class TestLabelConversion:
    def test_origin_maps_to_origin(self):
        assert z_from_qp(0.0, 0.0, BasisParams(b=2.7, hbar=0.3)) == 0j

    def test_unit_point(self):
        assert z_from_qp(1.0, 1.0, BasisParams()) == pytest.approx((1 + 1j) / SQRT2)

    def test_width_rescaling(self):
        q, p, hbar = 0.6, -1.1, 1.0
        z2 = z_from_qp(q, p, BasisParams(b=2.0, hbar=hbar))
        assert z2 == pytest.approx((q / 2.0 + 1j * 2.0 * p / hbar) / SQRT2)

    def test_inverse_unit_point(self):
        q, p = qp_from_z((1 + 1j) / SQRT2, BasisParams())
        assert q == pytest.approx(1.0) and p == pytest.approx(1.0)

    def test_zero_inverse(self):
        assert qp_from_z(0j, BasisParams(b=0.4)) == (0.0, 0.0)

    def test_round_trip_property(self):
        rng = np.random.default_rng(101)
        q = rng.uniform(-100, 100, 1000)
        p = rng.uniform(-100, 100, 1000)
        b = rng.uniform(0.1, 10.0, 1000)
        for i in range(1000):
            basis = BasisParams(b=b[i], hbar=1.0)
            qq, pp = qp_from_z(z_from_qp(q[i], p[i], basis), basis)
            assert abs(qq - q[i]) <= 1e-14 * max(1.0, abs(q[i]))
            assert abs(pp - p[i]) <= 1e-14 * max(1.0, abs(p[i]))

    def test_modulus_identity(self):
        rng = np.random.default_rng(103)
        for _ in range(200):
            q, p = rng.uniform(-20, 20, 2)
            b = rng.uniform(0.1, 10.0)
            hbar = rng.uniform(0.5, 2.0)
            z = z_from_qp(q, p, BasisParams(b, hbar))
            want = (q**2 / b**2 + b**2 * p**2 / hbar**2) / 2.0
            assert abs(z) ** 2 == pytest.approx(want, rel=1e-14, abs=1e-14)

    def test_array_shapes(self):
        q = np.zeros((3, 4))
        p = np.ones((3, 4))
        z = z_from_qp(q, p, BasisParams())
        assert z.shape == (3, 4)
        qq, pp = qp_from_z(z, BasisParams())
        assert qq.shape == (3, 4) and np.allclose(pp, 1.0)


class TestPhasePoint:
    def test_label_cached_on_construction(self):
        pt = PhasePoint(1.0, 1.0)
        assert pt.z == pytest.approx((1 + 1j) / SQRT2)

    def test_immutable(self):
        pt = PhasePoint(0.5, -0.5)
        with pytest.raises(AttributeError):
            pt.q = 2.0


class TestWirtinger:
    def test_unit_basis_coefficients(self):
        wc = wirtinger_coefficients(BasisParams())
        # d/dz = (d/dq - i d/dp)/sqrt(2)
        assert wc.dq_dz == pytest.approx(1 / SQRT2)
        assert wc.dp_dz == pytest.approx(-1 / SQRT2)
        assert wc.dq_dzs == pytest.approx(1 / SQRT2)
        assert wc.dp_dzs == pytest.approx(1 / SQRT2)

    def test_scaling_consistency(self):
        for b in (0.3, 1.0, 4.2):
            wc = wirtinger_coefficients(BasisParams(b=b))
            assert wc.dq_dz * (SQRT2 / b) == pytest.approx(1.0)

    def test_identity_reduces_to_qp_form(self):
        # z* d/dz + z d/dz* applied to real partials must equal q d/dq - p d/dp
        rng = np.random.default_rng(107)
        for _ in range(50):
            q, p = rng.uniform(-3, 3, 2)
            b = rng.uniform(0.4, 2.5)
            basis = BasisParams(b=b)
            wq, wp = rng.normal(size=2)
            z = z_from_qp(q, p, basis)
            wc = wirtinger_coefficients(basis)
            lhs = (np.conj(z) * wc.d_dz(wq, wp) + z * wc.d_dzstar(wq, wp)).real
            assert lhs == pytest.approx(q * wq - p * wp, rel=1e-12, abs=1e-12)
