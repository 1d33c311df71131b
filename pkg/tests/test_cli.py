"""
Tests de la línea de comandos: códigos de salida, archivos emitidos y determinismo.
"""
import contextlib
import io
import json
import os
import sys
import tempfile
import unittest

import numpy as np
import pandas as pd

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.cli import main, EXIT_OK, EXIT_TOLERANCE, EXIT_CONFIG, EXIT_VALIDATION


def _both(N=8):
    return {'q': 0.8, 'beta': 0.0, 'gamma': 0.5, 'delta': 0.0, 'N': N, 'truncate_alpha': True}


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def write_config(self, data, name='run.json'):
        path = os.path.join(self.tmp, name)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f)
        return path

    def run_cli(self, *argv):
        with contextlib.redirect_stdout(io.StringIO()):
            return main(list(argv))


class TestExitCodes(CliTestCase):

    def test_missing_config_file(self):
        code = self.run_cli('spectrum', '--config', os.path.join(self.tmp, 'missing.json'))
        self.assertEqual(code, EXIT_CONFIG)

    def test_unknown_key(self):
        path = self.write_config({'params': _both(), 'region': {'L': 2, 'K': 4}, 'colour': 'red'})
        self.assertEqual(self.run_cli('spectrum', '--config', path), EXIT_CONFIG)

    def test_invalid_chain(self):
        params = _both(6)
        params['gamma'] = 1.5
        path = self.write_config({'params': params, 'region': {'L': 2, 'K': 3}})
        out = os.path.join(self.tmp, 'out')
        self.assertEqual(self.run_cli('validate', '--config', path, '--out', out), EXIT_VALIDATION)
        self.assertFalse(os.path.exists(out))

    def test_negative_seed(self):
        path = self.write_config({'params': _both(), 'region': {'L': 2, 'K': 4}})
        self.assertEqual(self.run_cli('verify', '--config', path, '--seed', '-1'), EXIT_CONFIG)

    def test_regime_error_is_failure(self):
        params = {'q': 0.8, 'beta': -0.4, 'gamma': 0.5, 'delta': 0.0, 'N': 8, 'truncate_alpha': True}
        path = self.write_config({'params': params, 'region': {'L': 2, 'K': 4}})
        out = os.path.join(self.tmp, 'out')
        self.assertEqual(self.run_cli('bethe', '--config', path, '--out', out), EXIT_TOLERANCE)

    def test_unknown_subcommand(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                main(['plot'])


class TestOutputs(CliTestCase):

    def test_entropy_full_filling(self):
        path = self.write_config({'params': _both(8), 'region': {'L': 3, 'K': 8}})
        out = os.path.join(self.tmp, 'out')
        self.assertEqual(self.run_cli('entropy', '--config', path, '--out', out), EXIT_OK)
        profile = pd.read_csv(os.path.join(out, 'entropy_entropy.csv'))
        self.assertEqual(list(profile['L']), list(range(9)))
        np.testing.assert_allclose(profile['entropy'], 0.0, atol=1e-9)
        checks = pd.read_csv(os.path.join(out, 'entropy_checks.csv'), keep_default_na=False)
        self.assertIn('n/a', set(checks['status']))

    def test_spectrum_is_deterministic(self):
        path = self.write_config({'params': _both(10), 'region': {'L': 3, 'K': 4}})
        first, second = os.path.join(self.tmp, 'a'), os.path.join(self.tmp, 'b')
        self.assertEqual(self.run_cli('spectrum', '--config', path, '--out', first), EXIT_OK)
        self.assertEqual(self.run_cli('spectrum', '--config', path, '--out', second), EXIT_OK)
        for name in ('spectrum_spectrum.csv', 'spectrum_checks.csv'):
            with open(os.path.join(first, name), 'rb') as a, open(os.path.join(second, name), 'rb') as b:
                self.assertEqual(a.read(), b.read())

    def test_json_format(self):
        path = self.write_config({'params': _both(8), 'region': {'L': 2, 'K': 4}})
        out = os.path.join(self.tmp, 'out')
        self.assertEqual(self.run_cli('heun', '--config', path, '--out', out, '--format', 'json'), EXIT_OK)
        heun = pd.read_json(os.path.join(out, 'heun_heun.json'))
        self.assertEqual(list(heun.columns), ['index', 'eigenvalue'])
        self.assertEqual(len(heun), 3)
        self.assertTrue(heun['eigenvalue'].is_monotonic_increasing)

    def test_json_matches_csv_bit_for_bit(self):
        path = self.write_config({'params': _both(10), 'region': {'L': 3, 'K': 4}})
        csv_out, json_out = os.path.join(self.tmp, 'csv'), os.path.join(self.tmp, 'json')
        self.assertEqual(self.run_cli('heun', '--config', path, '--out', csv_out), EXIT_OK)
        self.assertEqual(self.run_cli('heun', '--config', path, '--out', json_out, '--format', 'json'), EXIT_OK)
        table = pd.read_csv(os.path.join(csv_out, 'heun_heun.csv'), float_precision='round_trip')
        with open(os.path.join(json_out, 'heun_heun.json'), encoding='utf-8') as f:
            records = json.load(f)
        self.assertEqual(len(records), len(table))
        for record, value in zip(records, table['eigenvalue']):
            self.assertEqual(record['eigenvalue'].hex(), float(value).hex())

    def test_json_writes_missing_values_as_null(self):
        path = self.write_config({'params': _both(6), 'region': {'L': 2, 'K': 3}})
        out = os.path.join(self.tmp, 'out')
        self.assertEqual(self.run_cli('couplings', '--config', path, '--out', out, '--format', 'json'), EXIT_OK)
        with open(os.path.join(out, 'couplings_couplings.json'), encoding='utf-8') as f:
            records = json.load(f)
        self.assertIsNone(records[-1]['J'])

    def test_couplings(self):
        path = self.write_config({'params': _both(6), 'region': {'L': 2, 'K': 3}})
        out = os.path.join(self.tmp, 'out')
        self.assertEqual(self.run_cli('couplings', '--config', path, '--out', out), EXIT_OK)
        table = pd.read_csv(os.path.join(out, 'couplings_couplings.csv'))
        self.assertEqual(list(table.columns), ['n', 'J', 'mu', 'A', 'C'])
        self.assertTrue(np.isnan(table['J'].iloc[-1]))

    def test_bethe_states(self):
        path = self.write_config({'params': _both(8), 'region': {'L': 2, 'K': 4}})
        out = os.path.join(self.tmp, 'out')
        self.assertEqual(self.run_cli('bethe', '--config', path, '--out', out), EXIT_OK)
        states = pd.read_csv(os.path.join(out, 'bethe_states.csv'))
        roots = pd.read_csv(os.path.join(out, 'bethe_roots.csv'))
        self.assertEqual(len(states), 3)
        self.assertEqual(len(roots), 6)

    def test_verify_with_random_trials(self):
        path = self.write_config({'params': _both(8), 'region': {'L': 2, 'K': 4}, 'random_trials': 2})
        out = os.path.join(self.tmp, 'out')
        self.assertEqual(self.run_cli('verify', '--config', path, '--out', out, '--seed', '5'), EXIT_OK)
        trials = pd.read_csv(os.path.join(out, 'verify_trials.csv'))
        self.assertEqual(len(trials), 2)

    def test_table1_without_config(self):
        out = os.path.join(self.tmp, 'out')
        self.assertEqual(self.run_cli('table1', '--out', out), EXIT_OK)
        table = pd.read_csv(os.path.join(out, 'table1_table1.csv'))
        self.assertEqual(len(table), 10)
        self.assertLessEqual(table['dev_tq_heun'].max(), 1e-4)


if __name__ == '__main__':
    unittest.main()
