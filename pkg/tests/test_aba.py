"""
Tests del ansatz de Bethe algebraico.
"""
import types
import unittest
import sys
import os

import numpy as np

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.errors import (
    PoleError, RegimeError, SingularConfigurationError, DomainError, ConsistencyError
)
from model.correlation import RegionSpec, correlation_data
from bethe.aba import (
    BetheAnsatz, BetheState, DEFAULT_SPECTRAL_POINT, reduced_bethe_defects, refine_roots_beta0
)
from bethe.heun import heun_spectrum
from bethe.tq import solve_tq
from tests.fixtures import (
    generic_params, small_both_params, small_beta0_params, random_generic_params,
    chain_and_spectral, rng
)

U0 = 0.9 + 0.1j
V0 = 1.1 - 0.2j


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


class TestScalars(unittest.TestCase):

    def setUp(self):
        chain, _ = chain_and_spectral(generic_params(6))
        self.aba = BetheAnsatz(chain, RegionSpec(L=2, K=3))

    def test_tau(self):
        p = self.aba.p
        self.assertAlmostEqual(self.aba.tau, np.sqrt(p.q / p.abgd))

    def test_f_pole(self):
        with self.assertRaises(PoleError):
            self.aba.scalars.f(U0, U0)
        with self.assertRaises(PoleError):
            self.aba.scalars.f(U0, -U0)

    def test_scalar_dispatch(self):
        s = self.aba.scalars
        self.assertEqual(s.scalar('g', U0, V0, 1), complex(s.g(U0, V0, 1)))
        with self.assertRaises(DomainError):
            s.scalar('h', U0)

    def test_tau_undefined_at_beta_zero(self):
        chain, _ = chain_and_spectral(small_both_params(6))
        self.assertIsNone(BetheAnsatz(chain, RegionSpec(L=2, K=3)).tau)


class TestDynamicalOperators(unittest.TestCase):

    def test_b_action_generic(self):
        chain, _ = chain_and_spectral(generic_params(6))
        aba = BetheAnsatz(chain, RegionSpec(L=2, K=3))
        for m in (0, 1, 2):
            self.assertLessEqual(aba.b_action_residual(U0, m), 1e-10)

    def test_b_action_beta_zero(self):
        chain, _ = chain_and_spectral(small_beta0_params(6))
        aba = BetheAnsatz(chain, RegionSpec(L=2, K=3))
        coeffs = aba.b_action_coeffs([1])
        self.assertTrue(np.allclose(coeffs.Z, 0.0))
        self.assertLessEqual(aba.b_action_residual(U0, 1), 1e-10)

    def test_a_on_vacuum(self):
        chain, _ = chain_and_spectral(generic_params(6))
        aba = BetheAnsatz(chain, RegionSpec(L=2, K=3))
        for u in (U0, V0, 1.4 + 0.0j):
            col = aba.dyn_A(u, 0)[:, 0]
            a = aba.scalars.a(u)
            self.assertLessEqual(_rel(col[0], a), 1e-10)
            self.assertLessEqual(np.linalg.norm(col[1:]), 1e-10 * abs(a))

    def test_bethe_vector_ignores_root_order(self):
        g = rng(59)
        chain, _ = chain_and_spectral(generic_params(8))
        for L in (2, 3):
            aba = BetheAnsatz(chain, RegionSpec(L=L, K=4))
            u = g.uniform(0.6, 1.4, size=L) * np.exp(1j * g.uniform(-0.3, 0.3, size=L))
            v = aba.bethe_vector(BetheState.from_roots(u, aba.p))
            w = aba.bethe_vector(BetheState.from_roots(u[::-1], aba.p))
            self.assertLessEqual(np.linalg.norm(v - w) / np.linalg.norm(v), 1e-10)

    def test_exchange_relations_random(self):
        g = rng(53)
        for _ in range(3):
            p = random_generic_params(g, int(g.integers(3, 13)))
            chain, _ = chain_and_spectral(p)
            aba = BetheAnsatz(chain, RegionSpec(L=1, K=1))
            res1, res2 = aba.verify_exchange(U0, V0, 1)
            self.assertLessEqual(res1, 1e-9)
            self.assertLessEqual(res2, 1e-9)
            self.assertLessEqual(aba.heun_from_dynA(U0), 1e-9)

    def test_exchange_without_tau(self):
        chain, _ = chain_and_spectral(small_both_params(8))
        aba = BetheAnsatz(chain, RegionSpec(L=2, K=4))
        res1, res2 = aba.verify_exchange(U0, V0, 0)
        self.assertLessEqual(res1, 1e-9)
        self.assertIsNone(res2)
        self.assertIsNone(aba.heun_from_dynA(U0))


class TestBetaZeroClosure(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.p = small_both_params(12)
        cls.region = RegionSpec(L=4, K=7)
        chain, cls.spectral = chain_and_spectral(cls.p)
        cls.aba = BetheAnsatz(chain, cls.region)
        cls.solution = solve_tq(cls.p, cls.region)
        cls.states = [cls.aba.make_state(s.u) for s in cls.solution.states]
        cls.heun_values = heun_spectrum(cls.aba.heun).values

    def test_defects(self):
        for state in self.states:
            self.assertLessEqual(np.max(np.abs(state.residuals)), 1e-8)

    def test_eigen2_matches_heun(self):
        for state, value in zip(self.states, self.heun_values):
            self.assertLessEqual(_rel(state.lam.real, value), 1e-8)
            self.assertLessEqual(abs(state.lam.imag), 1e-8 * abs(value))

    def test_bethe_vector_is_eigenvector(self):
        T = self.aba.heun.T.entries
        for state, value in zip(self.states, self.heun_values):
            v = self.aba.bethe_vector(state)
            self.assertTrue(np.allclose(v[self.region.L + 1:], 0.0))
            res = np.linalg.norm(T @ v - value * v) / (np.linalg.norm(T) * np.linalg.norm(v))
            self.assertLessEqual(res, 1e-7)

    def test_wavefunction_closed_form(self):
        q, L = self.p.q, self.region.L
        for state in self.states:
            wf = self.aba.wavefunction_beta0(state)
            v = self.aba.bethe_vector(state)
            self.assertLessEqual(np.linalg.norm(q ** L * v - wf) / np.linalg.norm(wf), 1e-8)
            # n = L: q^(-L(L-1)/2) prod_(i<L) J_i / q^(i+1)
            expected = q ** (-L * (L - 1) / 2) * np.prod(self.aba.model.J[:L] / q ** np.arange(1, L + 1))
            self.assertLessEqual(_rel(self.aba.bethe_wavefunction_beta0(state, L), expected), 1e-10)

    def test_c_eigenvalue(self):
        c_direct = correlation_data(self.spectral, self.region).c_eigs
        for state in self.states:
            c = self.aba.c_eigenvalue_beta0(state, self.spectral)
            self.assertLessEqual(np.min(np.abs(c_direct - c)), 1e-8)
            wf = np.abs(self.aba.wavefunction_beta0(state)[:self.region.L + 1])
            second = np.argsort(wf)[::-1][1]
            other = self.aba.c_eigenvalue_beta0(state, self.spectral, n=int(second))
            self.assertAlmostEqual(c, other, delta=1e-8)

    def test_c_outside_unit_interval(self):
        values = [self.aba.c_eigenvalue_beta0(state, self.spectral) for state in self.states]
        state = self.states[int(np.argmax(values))]
        scaled = types.SimpleNamespace(phi=self.spectral.phi * np.sqrt(3.0))
        with self.assertRaises(ConsistencyError) as ctx:
            self.aba.c_eigenvalue_beta0(state, scaled)
        self.assertEqual(ctx.exception.name, 'c_intervalo')

    def test_c_disagrees_off_shell(self):
        u = self.states[0].u.copy()
        u[0] *= 1.0 + 1e-3
        with self.assertRaises(ConsistencyError):
            self.aba.c_eigenvalue_beta0(BetheState.from_roots(u, self.p), self.spectral)

    def test_c_complex_roots_rejected(self):
        u = self.states[0].u * np.exp(0.05j)
        with self.assertRaises(ConsistencyError) as ctx:
            self.aba.c_eigenvalue_beta0(BetheState.from_roots(u, self.p), self.spectral)
        self.assertEqual(ctx.exception.name, 'c_parte_imaginaria')

    def test_perturbed_root_breaks_equations(self):
        state = self.states[0]
        u = state.u.copy()
        u[0] += 1e-3
        perturbed = self.aba.make_state(u)
        self.assertGreater(np.max(np.abs(perturbed.residuals)), 1e-5)

    def test_refinement_restores_roots(self):
        state = self.states[1]
        nudged = state.u * (1.0 + 1e-6)
        self.assertGreater(np.max(np.abs(reduced_bethe_defects(nudged, self.p, self.region))), 1e-9)
        refined = refine_roots_beta0(nudged, self.p, self.region)
        self.assertLessEqual(np.max(np.abs(reduced_bethe_defects(refined, self.p, self.region))), 1e-10)
        np.testing.assert_allclose(refined, state.u, rtol=1e-8)

    def test_coincident_roots(self):
        u = np.array([1.3, 1.3, 0.7, 0.9], dtype=complex)
        with self.assertRaises(SingularConfigurationError):
            self.aba.bethe_residuals(BetheState.from_roots(u, self.p))

    def test_generic_wavefunction_rejected(self):
        chain, _ = chain_and_spectral(generic_params(6))
        aba = BetheAnsatz(chain, RegionSpec(L=2, K=3))
        state = BetheState.from_roots([1.1, 0.8], aba.p)
        with self.assertRaises(RegimeError):
            aba.bethe_wavefunction_beta0(state, 0)


class TestSingleRootStates(unittest.TestCase):

    def test_generic_states_from_eigenvectors(self):
        chain, _ = chain_and_spectral(generic_params(8))
        aba = BetheAnsatz(chain, RegionSpec(L=1, K=3))
        dec = heun_spectrum(aba.heun)
        for j, value in enumerate(dec.values):
            state = aba.state_from_eigenvector(dec.vectors[:, j])
            self.assertLessEqual(np.max(np.abs(state.residuals)), 1e-8)
            self.assertLessEqual(_rel(state.lam, value), 1e-8)
            self.assertLessEqual(_rel(aba.lambda_eval(state, DEFAULT_SPECTRAL_POINT, form='eigen1'), value), 1e-8)

    def test_eigen1_independent_of_spectral_parameter(self):
        chain, _ = chain_and_spectral(generic_params(8))
        aba = BetheAnsatz(chain, RegionSpec(L=1, K=3))
        dec = heun_spectrum(aba.heun)
        for j in range(len(dec.values)):
            state = aba.state_from_eigenvector(dec.vectors[:, j])
            first = aba.lambda_eval(state, DEFAULT_SPECTRAL_POINT, form='eigen1')
            second = aba.lambda_eval(state, 1.3 + 0.2j, form='eigen1')
            self.assertLessEqual(_rel(first, second), 1e-8)

    def test_beta_zero_states_from_eigenvectors(self):
        chain, _ = chain_and_spectral(small_beta0_params(8))
        aba = BetheAnsatz(chain, RegionSpec(L=1, K=3))
        dec = heun_spectrum(aba.heun)
        for j, value in enumerate(dec.values):
            state = aba.state_from_eigenvector(dec.vectors[:, j])
            self.assertLessEqual(np.max(np.abs(state.residuals)), 1e-8)
            self.assertLessEqual(_rel(state.lam, value), 1e-8)

    def test_requires_single_root(self):
        chain, _ = chain_and_spectral(generic_params(8))
        aba = BetheAnsatz(chain, RegionSpec(L=2, K=3))
        with self.assertRaises(DomainError):
            aba.state_from_eigenvector([1.0, 0.0, 0.0])

    def test_eigen1_requires_tau(self):
        chain, _ = chain_and_spectral(small_both_params(8))
        aba = BetheAnsatz(chain, RegionSpec(L=2, K=4))
        with self.assertRaises(RegimeError):
            aba.lambda_eval(BetheState.from_roots([1.1, 0.8], aba.p), DEFAULT_SPECTRAL_POINT, form='eigen1')


if __name__ == '__main__':
    unittest.main()
