"""
Tests del modelo de cadena: validación, acoplamientos, matrices y funciones de onda.
"""
import unittest
import sys
import os

import numpy as np

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import ValidationError
from core.qkernel import ChainParams, racah_coeffs, omega, weights
from model.chain import (
    validate, build_chain, hopping_matrix, astar_matrix, spectral_data,
    spectrum_residuals, spectrum_invariance, orthonormality_deviation
)
from bethe.heun import astar_conjugation_residual
from tests.fixtures import (
    table1_params, generic_params, regime_params, random_generic_params, chain_and_spectral, rng
)


class TestValidate(unittest.TestCase):

    def test_table1_is_valid(self):
        self.assertTrue(validate(table1_params()).ok)

    def test_untruncated_alpha(self):
        p = ChainParams(q=0.8, alpha=3.0, beta=0.0, gamma=0.5, delta=0.0, N=5)
        report = validate(p)
        self.assertFalse(report.ok)
        self.assertTrue(any("J_N" in v for v in report.violations))

    def test_sign_flip_names_index(self):
        # gamma > q^-1 cambia el signo del factor (1 - gamma q^(n+1)) en los primeros sitios
        p = ChainParams.truncated(q=0.8, beta=0.0, gamma=1.5, delta=0.0, N=6)
        report = validate(p)
        self.assertFalse(report.ok)
        self.assertTrue(any("n=0" in v for v in report.violations))

    def test_build_chain_raises(self):
        with self.assertRaises(ValidationError):
            build_chain(ChainParams(q=0.8, alpha=3.0, beta=0.0, gamma=0.5, delta=0.0, N=5))


class TestBuildChain(unittest.TestCase):

    def test_mu0(self):
        p = generic_params()
        chain = build_chain(p)
        c = racah_coeffs(p)
        self.assertAlmostEqual(chain.mu[0], c.A[0] - 1.0 - p.gamma * p.delta * p.q, places=12)

    def test_last_coupling_nonzero(self):
        chain = build_chain(table1_params())
        self.assertTrue(np.isfinite(chain.J[-1]) and chain.J[-1] != 0.0)

    def test_eps_flip(self):
        p = generic_params()
        a, b = build_chain(p), build_chain(p.with_eps(-1))
        np.testing.assert_allclose(b.J, -a.J)
        np.testing.assert_allclose(b.mu, a.mu)

    def test_hopping_two_by_two(self):
        p = ChainParams.truncated(q=0.8, beta=-0.4, gamma=0.6, delta=-0.3, N=1)
        chain = build_chain(p)
        expected = np.array([[-chain.mu[0], chain.J[0]], [chain.J[0], -chain.mu[1]]])
        np.testing.assert_allclose(hopping_matrix(chain).to_dense(), expected)

    def test_astar_entries(self):
        t = table1_params()
        np.testing.assert_allclose(np.diag(astar_matrix(t, 5)), 1.25 ** np.arange(6), rtol=1e-14)
        p = generic_params()
        self.assertAlmostEqual(astar_matrix(p)[0, 0], 1.0 + p.alpha * p.beta * p.q)


class TestSpectralData(unittest.TestCase):

    def test_eigenvalues_match_omega(self):
        for name, p in regime_params(6).items():
            with self.subTest(regime=name):
                chain, spectral = chain_and_spectral(p)
                eig_err, vec_err = spectrum_residuals(chain, spectral)
                self.assertLessEqual(eig_err, 1e-10)
                self.assertLessEqual(vec_err, 1e-9 * max(np.max(np.abs(spectral.omegas)), 1.0))

    def test_random_params_up_to_thirty(self):
        g = rng(29)
        for N in (10, 20, 30):
            chain, spectral = chain_and_spectral(random_generic_params(g, N))
            eig_err, _ = spectrum_residuals(chain, spectral)
            self.assertLessEqual(eig_err, 1e-9)
            for _, dev in orthonormality_deviation(spectral.phi).values():
                self.assertLessEqual(dev, 1e-8)

    def test_phi0_is_sqrt_weight(self):
        p = generic_params(6)
        _, spectral = chain_and_spectral(p)
        np.testing.assert_allclose(spectral.phi[0], np.sqrt(weights(p)), rtol=1e-12)

    def test_eps_flip_alternates_rows(self):
        p = generic_params(6)
        _, a = chain_and_spectral(p)
        _, b = chain_and_spectral(p.with_eps(-1))
        signs = (-1.0) ** np.arange(p.N + 1)
        np.testing.assert_allclose(b.phi, signs[:, None] * a.phi, atol=1e-13)

    def test_table1_orthonormality(self):
        _, spectral = chain_and_spectral(table1_params())
        for _, dev in orthonormality_deviation(spectral.phi).values():
            self.assertLessEqual(dev, 1e-8)

    def test_orthonormality_at_large_N(self):
        for N in (30, 40, 49):
            with self.subTest(N=N):
                chain = build_chain(ChainParams.truncated(q=0.8, beta=0.0, gamma=0.5, delta=0.0, N=N))
                spectral = spectral_data(chain)
                for _, dev in orthonormality_deviation(spectral.phi).values():
                    self.assertLessEqual(dev, config.ORTHO_TOL)
                self.assertLessEqual(spectrum_residuals(chain, spectral)[0], 1e-9)

    def test_astar_conjugation(self):
        p = random_generic_params(rng(31), 6)
        _, spectral = chain_and_spectral(p)
        self.assertLessEqual(astar_conjugation_residual(spectral, p), 1e-10)


class TestSpectrumInvariance(unittest.TestCase):

    def test_rescaling_and_eps_flip(self):
        p = generic_params(6)
        result = spectrum_invariance(p, kappa=2.0)
        self.assertLessEqual(result['eps_flip'], 1e-12)
        self.assertIsNotNone(result['rescaling'])
        self.assertLessEqual(result['rescaling'], 1e-10)

    def test_negative_q_builds(self):
        p = ChainParams.truncated(q=-0.8, beta=0.0, gamma=0.5, delta=0.0, N=4)
        report = validate(p)
        if report.ok:
            chain, spectral = chain_and_spectral(p)
            self.assertLessEqual(spectrum_residuals(chain, spectral)[0], 1e-10)
        else:
            self.assertTrue(len(report.violations) > 0)


if __name__ == '__main__':
    unittest.main()
