import dataclasses

import numpy as np
import pytest

from heun_racah import (coeff_f0, coeff_f1, coeff_g0, coeff_g1, coeff_k1,
                        coeff_k2, op_A, op_B, op_C, verify_relation)
from heun_racah.core import residual_norm, vector_residual
from heun_racah.dynamical import DynContext, RelationId
from heun_racah.errors import ParameterDomainError, RelationViolation
from heun_racah.racah import Representation, build_representation
from heun_racah.sampling import draw_racah_params, draw_rho
from heun_racah.serialize import dump_json


class TestCoefficients:
    def test_f0_half_integer_m(self, p0):
        # 4m^2 - 1 = 0 leaves only -d2
        assert coeff_f0(2.31 + 0.7j, 0.5, p0) == pytest.approx(231 / 8)

    def test_f0_values(self, p0):
        assert coeff_f0(1, 1, p0) == pytest.approx(-27 / 8)
        assert coeff_f0(0, 0, p0) == pytest.approx(39.75)

    def test_f1(self):
        assert coeff_f1(2 * 0.73, 0.73) == 0
        assert coeff_f1(1, 1) == pytest.approx(1.5)
        assert coeff_f1(-1, 1) == coeff_f1(1, 1)

    def test_g0_pole(self, ctx0):
        with pytest.raises(ParameterDomainError):
            coeff_g0(1, 0.3, ctx0)

    def test_g0_equal_d_constants(self, p0, ctx0):
        # d1 = d2 for the reference set, so only the polynomial part remains
        u, m = 2.2 - 0.4j, 0.9 + 0.1j
        rho = ctx0.rho
        expected = rho * coeff_f0(u, m, p0) + (2 * m * rho - 1) \
            * (4 * m - u + 1) * (2 * p0.b + 1 - u * u) / 8
        assert coeff_g0(u, m, ctx0) == pytest.approx(expected)

    def test_g1_roots(self):
        m, rho = 0.8, 1.7
        assert coeff_g1(2 * m, m, rho) == 0
        assert abs(coeff_g1(2 * m - 2 / rho, m, rho)) <= 1e-15

    def test_k1(self):
        assert coeff_k1(5, 1) == pytest.approx(1 / 3)
        assert coeff_k1(1.5 + 2, 1.5) == 0  # numerator root at u = v + 2
        with pytest.raises(ParameterDomainError):
            coeff_k1(2.0, -2.0)

    def test_k1_large_u_limit(self):
        assert abs(coeff_k1(1e6, 1.7) - 1) <= 1e-5

    def test_k2(self):
        assert coeff_k2(3.3, 1, 0.4, 1.9) == 0
        for bad in ((2, 0, 0.4), (2, 2, 0.4), (2, 1.5, 1 / (2 * 1.9))):
            with pytest.raises(ParameterDomainError):
                coeff_k2(bad[0], bad[1], bad[2], 1.9)


class TestOperators:
    def test_B_even_in_u_exactly(self, ctx0):
        u, m = 1.37 - 0.62j, 0.85 + 0.3j
        np.testing.assert_array_equal(op_B(u, m, ctx0), op_B(-u, m, ctx0))

    def test_A_not_even_in_u(self, ctx0):
        assert residual_norm(op_A(3, 1, ctx0), op_A(-3, 1, ctx0)) > 1e-3

    def test_A_reference_pin(self, ctx0):
        # direct evaluation: g0(3,1)=57.75, g1(3,1)=-2, g1(-1,1)=-6, den=3
        expected = np.array([[125.6, -50.4], [-57.6, 188.4]]) / 3
        np.testing.assert_allclose(op_A(3, 1, ctx0), expected, atol=1e-12)

    def test_B_reference_pin(self, ctx0):
        expected = np.array([[64.8, -43.2], [-12.8, 115.2]])
        np.testing.assert_allclose(op_B(1, 1, ctx0), expected, atol=1e-12)

    def test_A_pole(self, ctx0):
        with pytest.raises(ParameterDomainError):
            op_A(2.0, 1 / (2 * ctx0.rho), ctx0)

    def test_C_fixed_point(self, ctx0):
        m = 1 / (2 * ctx0.rho)
        np.testing.assert_array_equal(op_C(1.3, m, ctx0), op_B(1.3, m, ctx0))

    def test_C_is_reflected_B(self, ctx0):
        np.testing.assert_array_equal(op_C(1, 1, ctx0),
                                      op_B(1, -1 + 1 / ctx0.rho, ctx0))

    def test_vacuum_triangularity(self, p0, ctx0):
        from heun_racah import vacuum, vacuum_coeffs
        e0 = vacuum(p0.N)
        u, m = 4.0, 1.0
        vc = vacuum_coeffs(u, m, p0, ctx0.rho)
        lhs = op_A(u, m, ctx0) @ e0
        rhs = vc.xi * e0 + vc.zeta * (op_B(u, m, ctx0) @ e0)
        assert vector_residual(lhs, rhs) <= 1e-11


class TestVerifyRelation:
    def test_bb_exchange(self, ctx0):
        report = verify_relation(RelationId.BB_EXCHANGE, ctx0, samples=50, seed=1)
        assert report.max_residual <= 1e-11

    def test_ab_exchange(self, ctx0):
        report = verify_relation(RelationId.AB_EXCHANGE, ctx0, samples=50, seed=2)
        assert report.max_residual <= 1e-10

    def test_ca_exchange(self, ctx0):
        report = verify_relation(RelationId.CA_EXCHANGE, ctx0, samples=50, seed=3)
        assert report.max_residual <= 1e-11

    def test_r2_perturbed_constant(self, rep0):
        bad = dataclasses.replace(rep0.params, b=rep0.params.b + 1e-3)
        broken = Representation(params=bad, X=rep0.X, Y=rep0.Y, Z=rep0.Z)
        ctx = DynContext(rep=broken, rho=2)
        with pytest.raises(RelationViolation):
            verify_relation(RelationId.R2, ctx, samples=1, seed=0)

    def test_defining_implies_exchange(self):
        # forward direction of the equivalence: whenever the defining
        # relations hold, the exchange relations hold too
        rng = np.random.default_rng(21)
        for N in (1, 2, 4, 8):
            rep = build_representation(draw_racah_params(rng, N))
            ctx = DynContext(rep=rep, rho=draw_rho(rng))
            from heun_racah import verify_defining_relations
            assert max(verify_defining_relations(rep, 1e-10).values()) <= 1e-10
            for rel in (RelationId.BB_EXCHANGE, RelationId.AB_EXCHANGE):
                report = verify_relation(rel, ctx, samples=10, seed=N)
                assert report.max_residual <= 1e-10

    def test_seeded_determinism(self, ctx0):
        a = verify_relation(RelationId.AB_EXCHANGE, ctx0, samples=5, seed=7)
        b = verify_relation(RelationId.AB_EXCHANGE, ctx0, samples=5, seed=7)
        assert dump_json(a.to_json_dict()) == dump_json(b.to_json_dict())
        assert a.max_residual == b.max_residual

    def test_report_shape(self, ctx0):
        report = verify_relation(RelationId.BB_EXCHANGE, ctx0, samples=3, seed=9)
        out = report.to_json_dict()
        assert out["relation"] == "BB_EXCHANGE"
        assert out["samples"] == 3 and out["seed"] == 9
        assert set(out["worst_tuple"]) == {"u", "v", "m"}
