"""
Tests de la relación TQ y de la aproximación termodinámica.
"""
import unittest
import sys
import os

import numpy as np

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import RegimeError, SingularRecurrenceError
from model.chain import hopping_matrix, astar_matrix
from model.correlation import RegionSpec
from core.numerics import poly_roots
from bethe.aba import BetheState, reduced_bethe_defects
from bethe.heun import heun_operator, heun_spectrum
from bethe.tq import (
    tq_coeffs, lambda_polynomial, q_polynomial, solve_tq, vieta_residual, tq_residual
)
from tests.fixtures import (
    table1_params, table1_region, small_both_params, small_beta0_params, generic_params,
    chain_and_spectral
)

TABLE1_TQ = np.array([-778916, -592816, -444746, -327294, -234579,
                      -161955, -105783, -63253.2, -32283.3, -11583.9])
TABLE1_THERMO = np.array([-778741, -592623, -444544, -327099, -234418,
                          -161865, -105813, -63460.2, -32687.9, -11957.8])

U_SAMPLES = np.array([0.3 + 0.2j, -1.7 + 0.5j, 2.4 - 1.1j, 0.05j])


def _heun_values(p, region):
    chain, _ = chain_and_spectral(p)
    h = heun_operator(hopping_matrix(chain), astar_matrix(p), p, region)
    return heun_spectrum(h).values


class TestCoefficients(unittest.TestCase):

    def test_sigma_zero_at_origin(self):
        c = tq_coeffs(small_both_params(), RegionSpec(L=4, K=7))
        self.assertEqual(c.sigma[0], 0.0)
        self.assertEqual(len(c.rho), 6)

    def test_table1_rho(self):
        c = tq_coeffs(table1_params(), table1_region())
        self.assertAlmostEqual(-c.rho[0] / -11957.8, 1.0, places=5)
        self.assertAlmostEqual(-c.rho[9] / -778741, 1.0, places=5)

    def test_delta_nonzero_has_no_recurrence(self):
        c = tq_coeffs(small_beta0_params(), RegionSpec(L=2, K=3))
        self.assertIsNone(c.rho)
        self.assertEqual(c.pU.degree, 3)
        with self.assertRaises(RegimeError):
            lambda_polynomial(c, 2)

    def test_beta_nonzero_rejected(self):
        with self.assertRaises(RegimeError):
            tq_coeffs(generic_params(), RegionSpec(L=2, K=3))


class TestLambdaPolynomial(unittest.TestCase):

    def test_degree(self):
        p = small_both_params()
        for L in (0, 1, 4):
            c = tq_coeffs(p, RegionSpec(L=L, K=7))
            self.assertEqual(lambda_polynomial(c, L).degree, L + 1)

    def test_single_site_root_is_heun_entry(self):
        p = small_both_params(8)
        region = RegionSpec(L=0, K=3)
        solution = solve_tq(p, region)
        self.assertEqual(len(solution.lambdas), 1)
        value = _heun_values(p, region)[0]
        self.assertAlmostEqual(solution.lambdas[0] / value, 1.0, places=10)
        self.assertEqual(len(solution.states[0].u), 0)

    def test_vanishing_pivot(self):
        c = tq_coeffs(small_both_params(), RegionSpec(L=4, K=2))
        with self.assertRaises(SingularRecurrenceError):
            lambda_polynomial(c, 4)

    def test_q_polynomial(self):
        Q = q_polynomial([1.0, 3.0, 2.0])
        np.testing.assert_allclose(Q.coeffs, [2.0, -3.0, 1.0])


class TestSolveTQ(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.p = table1_params()
        cls.region = table1_region()
        cls.solution = solve_tq(cls.p, cls.region)

    def test_table1_lambdas(self):
        np.testing.assert_allclose(self.solution.lambdas, TABLE1_TQ, rtol=2e-5)
        self.assertEqual(self.solution.flagged, ())

    def test_table1_agrees_with_heun(self):
        heun = _heun_values(self.p, self.region)
        np.testing.assert_allclose(self.solution.lambdas, heun, rtol=1e-4)

    def test_table1_thermo(self):
        thermo = np.sort(self.solution.thermo)
        np.testing.assert_allclose(thermo, TABLE1_THERMO, rtol=1e-5)
        rel = np.abs(thermo - self.solution.lambdas) / np.abs(self.solution.lambdas)
        self.assertLessEqual(rel.max(), config.THERMO_TOL)

    def test_q_polynomials_are_monic(self):
        for Q in self.solution.qpolys:
            self.assertEqual(Q.degree, self.region.L)
            self.assertAlmostEqual(Q.coeffs[-1], 1.0, places=12)

    def test_table1_states_have_all_roots(self):
        self.assertEqual(len(self.solution.states), 10)
        for state in self.solution.states:
            self.assertEqual(len(state.u), self.region.L)
            self.assertTrue(np.all(np.isfinite(state.u)))

    def test_table1_states_satisfy_bethe_equations(self):
        for state in self.solution.states:
            self.assertIsNotNone(state.residuals)
            self.assertLessEqual(np.max(np.abs(state.residuals)), 1e-8)

    def test_table1_vieta(self):
        for state, Q in zip(self.solution.states, self.solution.qpolys):
            self.assertLessEqual(vieta_residual(state, Q), 1e-8)

    def test_table1_lambda_is_root_of_sweep(self):
        # Raíces del polinomio en doble precisión, antes del pulido
        c = tq_coeffs(self.p, self.region)
        scale = max(float(np.max(np.abs(c.rho))), 1.0)
        poly = lambda_polynomial(c, self.region.L, scale)
        roots = np.sort(poly_roots(poly).real * scale)
        np.testing.assert_allclose(self.solution.lambdas, roots, rtol=1e-6)


class TestTQIdentity(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.p = small_both_params(12)
        cls.region = RegionSpec(L=4, K=7)
        cls.c = tq_coeffs(cls.p, cls.region)
        cls.solution = solve_tq(cls.p, cls.region)

    def test_vieta(self):
        for state, Q in zip(self.solution.states, self.solution.qpolys):
            self.assertLessEqual(vieta_residual(state, Q), 1e-8)

    def test_difference_equation(self):
        for state in self.solution.states:
            self.assertLessEqual(tq_residual(state, self.c, self.p, self.region, U_SAMPLES), 1e-8)

    def test_perturbed_root_is_detected(self):
        state = self.solution.states[0]
        U = state.U.copy()
        U[0] = U[0] * (1.0 + 1e-3)
        perturbed = BetheState(u=np.sqrt(self.p.q / U), U=U, lam=state.lam)
        self.assertGreater(tq_residual(perturbed, self.c, self.p, self.region, U_SAMPLES), 1e-5)

    def test_roots_match_heun(self):
        heun = _heun_values(self.p, self.region)
        np.testing.assert_allclose(self.solution.lambdas, heun, rtol=1e-8)

    def test_states_carry_reduced_defects(self):
        for state in self.solution.states:
            np.testing.assert_allclose(state.residuals, reduced_bethe_defects(state.u, self.p, self.region))

    def test_residual_rejects_beta(self):
        with self.assertRaises(RegimeError):
            tq_residual(self.solution.states[0], self.c, generic_params(), self.region, U_SAMPLES)


if __name__ == '__main__':
    unittest.main()
