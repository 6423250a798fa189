import math
from fractions import Fraction

import numpy as np
import pytest

from c2alg.clifford import ccl, ccl_interleaved
from c2alg.linalg import realify
from c2alg.pin_spin import (PinElement, check_phi_real,
                            check_rho_real_equivariance, is_fixed_spinc,
                            iv_model_action, phi_lift, rho_residual, spin_lift,
                            twisted_adjoint, unit_residual)
from c2alg.scalars import GaussianRational, MultiPoly
from c2alg.verify import (_rng, rand_multivector, rand_pin, rand_polynomial,
                          random_unitary, rational_unit_vector)

I = GaussianRational.I


class TestPinElement:
    def test_identity(self):
        g = PinElement.identity(ccl(2, 0))
        assert g.is_even and g.value == ccl(2, 0).scalar(1)

    def test_non_homogeneous_rejected(self):
        alg = ccl(2, 0)
        with pytest.raises(ValueError):
            PinElement(alg.scalar(1) + alg.generator(1))

    def test_non_unit_rejected(self):
        alg = ccl(2, 0)
        with pytest.raises(ValueError):
            PinElement(alg.generator(1).scale(2))

    def test_certificate_rejects_non_unit_factor(self):
        alg = ccl(2, 0)
        with pytest.raises(ValueError):
            PinElement.from_factors(alg, [alg.vector([1, 1])])

    def test_certificate_rejects_complex_vector(self):
        # (5/3)^2 + (4i/3)^2 = 1 but the vector is outside the real span
        alg = ccl(2, 0)
        v = alg.vector([Fraction(5, 3), GaussianRational(0, Fraction(4, 3))])
        assert v * v == alg.scalar(1)
        with pytest.raises(ValueError):
            PinElement.from_factors(alg, [v])


class TestTwistedAdjoint:
    def test_unit_vector_is_reflection(self):
        alg = ccl(3, 0)
        g = PinElement.from_factors(alg, [alg.generator(1)])
        rho = twisted_adjoint(g)
        expect = ((Fraction(-1), Fraction(0), Fraction(0)),
                  (Fraction(0), Fraction(1), Fraction(0)),
                  (Fraction(0), Fraction(0), Fraction(1)))
        assert rho.rows == expect

    def test_identity_and_central_phase(self):
        alg = ccl(2, 0)
        ident = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
        assert twisted_adjoint(PinElement.identity(alg)).rows == ident
        phase = GaussianRational(Fraction(3, 5), Fraction(4, 5))
        g = PinElement.from_factors(alg, [], phase)
        assert twisted_adjoint(g).rows == ident

    def test_homomorphism_exact(self):
        rng = _rng(21, "rho-hom")
        alg = ccl(2, 2)
        for _ in range(25):
            g = rand_pin(rng, alg, 4)
            h = rand_pin(rng, alg, 4)
            assert twisted_adjoint(g * h) == twisted_adjoint(g) @ twisted_adjoint(h)
            assert twisted_adjoint(g).is_orthogonal()


class TestRhoRealEquivariance:
    def test_real_coefficients_trivial(self):
        alg = ccl(3, 0)
        g = PinElement.from_factors(alg, [rational_unit_vector(_rng(1, "x"), alg)])
        assert check_rho_real_equivariance(g)

    def test_sign_generator(self):
        alg = ccl(1, 1)
        g = PinElement.from_factors(alg, [alg.generator(2)])
        assert check_rho_real_equivariance(g)

    def test_random_products_exact(self):
        rng = _rng(22, "rho-real")
        for _ in range(40):
            p = rng.randint(0, 4)
            q = rng.randint(0, 4 - p)
            if p + q == 0:
                p = 1
            g = rand_pin(rng, ccl(p, q), 4)
            assert check_rho_real_equivariance(g)

    def test_interleaved_convention(self):
        rng = _rng(24, "rho-real-interleaved")
        alg = ccl_interleaved(2)
        for _ in range(20):
            g = rand_pin(rng, alg, 4)
            assert check_rho_real_equivariance(g)


class TestSpinLift:
    def test_identity(self):
        g = spin_lift(np.eye(3))
        assert g.value.max_diff(ccl(3, 0).scalar(1).to_numeric()) < 1e-12

    def test_quarter_turn(self):
        R = np.array([[0.0, -1.0], [1.0, 0.0]])
        g = spin_lift(R)
        alg = ccl(2, 0)
        s = 1 / math.sqrt(2)
        expected = alg.scalar(complex(s)) - (alg.generator(1) * alg.generator(2)).scale(complex(s))
        assert min(g.value.max_diff(expected), g.value.max_diff(-expected)) < 1e-12
        assert rho_residual(g, R) < 1e-12

    def test_deterministic_branch(self):
        R = np.array([[0.0, -1.0], [1.0, 0.0]])
        a = spin_lift(R).value
        b = spin_lift(R).value
        assert a.max_diff(b) == 0.0
        lead = a.coeff(0)
        assert lead.real > 0

    def test_determinant_minus_one_rejected(self):
        with pytest.raises(ValueError):
            spin_lift(np.diag([1.0, -1.0]))

    def test_non_orthogonal_rejected(self):
        with pytest.raises(ValueError):
            spin_lift(np.diag([2.0, 0.5]))

    def test_near_identity_stability(self):
        theta = 1e-9
        R = np.array([[math.cos(theta), -math.sin(theta)],
                      [math.sin(theta), math.cos(theta)]])
        g = spin_lift(R)
        assert rho_residual(g, R) < 1e-12

    def test_half_turn_planes(self):
        # columns land on -e_j, exercising the single-reflection branch
        R = np.diag([-1.0, -1.0, 1.0])
        g = spin_lift(R)
        assert rho_residual(g, R) < 1e-12
        expected = (ccl(3, 0).generator(1) * ccl(3, 0).generator(2)).to_numeric()
        assert min(g.value.max_diff(expected), g.value.max_diff(-expected)) < 1e-12

    def test_minus_identity_in_four_dimensions(self):
        R = -np.eye(4)
        g = spin_lift(R)
        assert rho_residual(g, R) < 1e-12
        assert g.value.grades() == {4}


class TestPhiLift:
    def test_identity(self):
        g = phi_lift(np.eye(2))
        assert g.value.max_diff(ccl_interleaved(2).scalar(1).to_numeric()) < 1e-12

    def test_multiplication_by_i(self):
        U = np.array([[1j]])
        g = phi_lift(U)
        assert rho_residual(g, realify(U)) < 1e-12
        phase = g.meta["phase"]
        assert abs(phase * phase - 1j) < 1e-12
        alg = ccl_interleaved(1)
        s = 1 / math.sqrt(2)
        expected = (alg.scalar(complex(s)) -
                    (alg.generator(1) * alg.generator(2)).scale(complex(s))
                    ).scale(complex(math.cos(math.pi / 4), math.sin(math.pi / 4)))
        assert g.value.max_diff(expected) < 1e-12

    def test_homomorphism(self):
        nrng = np.random.default_rng(5)
        for n in (1, 2, 3):
            U = random_unitary(nrng, n)
            V = random_unitary(nrng, n)
            lhs = phi_lift(U @ V).value
            rhs = phi_lift(U).value * phi_lift(V).value
            assert lhs.max_diff(rhs) < 1e-9

    def test_diagonal_rotor_product_formula(self):
        # for diagonal input the lift is the plane-rotor product times the
        # half-determinant phase, independent of any eigenbasis choice
        a, b = 0.9, -2.3
        U = np.diag([np.exp(1j * a), np.exp(1j * b)])
        g = phi_lift(U)
        alg = ccl_interleaved(2)
        phase = np.exp(1j * (a + b) / 2)
        rotor1 = alg.scalar(complex(math.cos(a / 2))) - \
            (alg.generator(1) * alg.generator(2)).scale(complex(math.sin(a / 2)))
        rotor2 = alg.scalar(complex(math.cos(b / 2))) - \
            (alg.generator(3) * alg.generator(4)).scale(complex(math.sin(b / 2)))
        expected = (rotor1 * rotor2).scale(complex(phase))
        assert g.value.max_diff(expected) < 1e-12

    def test_canonicity(self):
        nrng = np.random.default_rng(6)
        U = random_unitary(nrng, 3)
        base = phi_lift(U).value
        for _ in range(3):
            assert base.max_diff(phi_lift(U, rng=nrng).value) < 1e-9

    def test_branch_cut_flagged(self):
        g = phi_lift(np.array([[-1.0 + 0j]]))
        assert g.meta["near_branch_cut"]

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError):
            phi_lift(np.diag([2.0 + 0j]))


class TestPhiReal:
    def test_real_orthogonal_input(self):
        R = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)
        assert check_phi_real(R)
        g = phi_lift(R)
        assert g.value.max_diff(g.value.bar()) < 1e-12

    def test_multiplication_by_i_both_sides(self):
        U = np.array([[1j]])
        lifted = phi_lift(np.conj(U)).value
        alg = ccl_interleaved(1)
        s = 1 / math.sqrt(2)
        expected = (alg.scalar(complex(s)) +
                    (alg.generator(1) * alg.generator(2)).scale(complex(s))
                    ).scale(complex(math.cos(math.pi / 4), -math.sin(math.pi / 4)))
        assert lifted.max_diff(expected) < 1e-12
        assert check_phi_real(U)

    def test_random_u2(self):
        nrng = np.random.default_rng(8)
        for _ in range(50):
            assert check_phi_real(random_unitary(nrng, 2))


class TestFixedSpinc:
    def test_rational_rotation_lift(self):
        R = np.array([[0.6, -0.8], [0.8, 0.6]])
        assert is_fixed_spinc(spin_lift(R))

    def test_phase_not_fixed(self):
        alg = ccl(2, 0)
        phase = GaussianRational(Fraction(3, 5), Fraction(4, 5))
        g = PinElement.from_factors(alg, [], phase)
        assert not is_fixed_spinc(g)

    def test_negative_branch_absorbed(self):
        alg = ccl(2, 0)
        s = 1 / math.sqrt(2)
        value = alg.scalar(complex(-s)) + (alg.generator(1) * alg.generator(2)).scale(complex(s))
        assert is_fixed_spinc(PinElement(value))


class TestIvModelAction:
    def test_identity_action(self):
        alg = ccl(2, 0)
        g = PinElement.identity(alg)
        x = alg.generator(1)
        f = MultiPoly(2, {(1, 0): Fraction(1)})
        gx, gf = iv_model_action(g, x, f)
        assert gx == x and gf == f

    def test_reflection_substitution(self):
        alg = ccl(2, 0)
        g = PinElement.from_factors(alg, [alg.generator(1)])
        x = alg.generator(2)
        t1 = MultiPoly(2, {(1, 0): Fraction(1)})
        gx, gf = iv_model_action(g, x, t1)
        assert gx == alg.generator(1) * x
        assert gf == -t1

    def test_action_composition(self):
        rng = _rng(23, "iv")
        alg = ccl(2, 1)
        for _ in range(20):
            g = rand_pin(rng, alg, 3)
            h = rand_pin(rng, alg, 3)
            x = rand_multivector(rng, alg, 2)
            f = rand_polynomial(rng, 3)
            x1, f1 = iv_model_action(h, x, f)
            x2, f2 = iv_model_action(g, x1, f1)
            x3, f3 = iv_model_action(g * h, x, f)
            assert x2 == x3 and f2 == f3

    def test_variable_count_mismatch_rejected(self):
        alg = ccl(2, 0)
        with pytest.raises(ValueError):
            iv_model_action(PinElement.identity(alg), alg.zero(),
                            MultiPoly(3, {(1, 0, 0): Fraction(1)}))


class TestUnitResidual:
    def test_float_unit(self):
        g = spin_lift(np.array([[0.0, -1.0], [1.0, 0.0]]))
        assert unit_residual(g) < 1e-12
