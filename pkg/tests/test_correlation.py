"""
Tests de las matrices de correlación y la entropía.
"""
import math
import unittest
import sys
import os

import numpy as np

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.errors import DomainError
from core.qkernel import weights
from model.correlation import (
    RegionSpec, projector, full_correlation, truncated_correlation, projector_residuals,
    entanglement_entropy, correlation_data, complement_entropy, entropy_profile
)
from tests.fixtures import generic_params, random_generic_params, chain_and_spectral, rng


class TestRegionSpec(unittest.TestCase):

    def test_out_of_range(self):
        with self.assertRaises(DomainError):
            RegionSpec(L=5, K=0).check(5)
        with self.assertRaises(DomainError):
            RegionSpec(L=0, K=-1).check(5)

    def test_projector(self):
        np.testing.assert_array_equal(projector(3, 1), np.diag([1.0, 1.0, 0.0, 0.0]))


class TestFullCorrelation(unittest.TestCase):

    def setUp(self):
        self.p = generic_params(6)
        _, self.spectral = chain_and_spectral(self.p)

    def test_complete_filling_is_identity(self):
        chat = full_correlation(self.spectral, self.p.N)
        np.testing.assert_allclose(chat.entries, np.eye(self.p.N + 1), atol=1e-12)

    def test_projector_properties(self):
        chat = full_correlation(self.spectral, 2)
        idem, trace = projector_residuals(chat, 2)
        self.assertLessEqual(idem, 1e-10)
        self.assertLessEqual(trace, 1e-10)

    def test_K_out_of_range(self):
        with self.assertRaises(DomainError):
            full_correlation(self.spectral, self.p.N + 1)


class TestTruncatedCorrelation(unittest.TestCase):

    def test_single_site_is_weight_sum(self):
        p = generic_params(6)
        _, spectral = chain_and_spectral(p)
        c = truncated_correlation(spectral, RegionSpec(L=0, K=3))
        self.assertAlmostEqual(c.entries[0, 0], float(np.sum(weights(p)[:4])), places=12)

    def test_eigenvalues_in_unit_interval(self):
        p = random_generic_params(rng(37), 8)
        _, spectral = chain_and_spectral(p)
        data = correlation_data(spectral, RegionSpec(L=3, K=4))
        self.assertGreaterEqual(data.c_eigs.min(), -1e-12)
        self.assertLessEqual(data.c_eigs.max(), 1.0 + 1e-12)
        np.testing.assert_allclose(data.c_eigs, np.linalg.eigvalsh(data.C.entries), atol=1e-12)


class TestEntropy(unittest.TestCase):

    def test_half_filling_single_mode(self):
        self.assertAlmostEqual(entanglement_entropy([0.5]), math.log(2.0), places=12)

    def test_pure_values(self):
        self.assertEqual(entanglement_entropy([0.0, 1.0, 1.0]), 0.0)

    def test_clamps_rounding(self):
        self.assertEqual(entanglement_entropy([-1e-12, 1.0 + 1e-12]), 0.0)

    def test_outside_unit_interval(self):
        with self.assertRaises(DomainError):
            entanglement_entropy([1.2])

    def test_full_filling_profile_is_zero(self):
        p = generic_params(8)
        _, spectral = chain_and_spectral(p)
        profile = entropy_profile(spectral, p.N, range(p.N + 1))
        self.assertEqual(list(profile.columns), ['L', 'entropy'])
        np.testing.assert_allclose(profile['entropy'], 0.0, atol=1e-9)

    def test_profile_matches_direct_call(self):
        p = generic_params(8)
        _, spectral = chain_and_spectral(p)
        profile = entropy_profile(spectral, 3, [4])
        direct = correlation_data(spectral, RegionSpec(L=4, K=3)).entropy
        self.assertAlmostEqual(profile['entropy'].iloc[0], direct, places=14)

    def test_complement_symmetry(self):
        p = random_generic_params(rng(41), 20)
        _, spectral = chain_and_spectral(p)
        for L in (0, 5, 12, 19):
            region = RegionSpec(L=L, K=9)
            inside = correlation_data(spectral, region).entropy
            outside = complement_entropy(spectral, 9, L)
            self.assertAlmostEqual(inside, outside, delta=1e-8)
            self.assertGreaterEqual(inside, 0.0)

    def test_eps_flip_invariance(self):
        p = generic_params(10)
        _, a = chain_and_spectral(p)
        _, b = chain_and_spectral(p.with_eps(-1))
        region = RegionSpec(L=4, K=5)
        self.assertAlmostEqual(correlation_data(a, region).entropy,
                               correlation_data(b, region).entropy, delta=1e-12)


if __name__ == '__main__':
    unittest.main()
