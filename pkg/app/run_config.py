"""
Configuración de una corrida.
Lee un documento JSON con parámetros, región, tolerancias y salida,
y resuelve los presets de parámetros.
"""
from dataclasses import dataclass, field
import json
import sys
import os

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import ConfigError, QRacahError
from core.qkernel import ChainParams
from model.correlation import RegionSpec

TOP_LEVEL_KEYS = ('preset', 'params', 'region', 'tolerances', 'output', 'seed', 'random_trials')
PARAM_KEYS = ('q', 'alpha', 'beta', 'gamma', 'delta', 'N', 'eps', 'truncate_alpha')
REGION_KEYS = ('L', 'K')
OUTPUT_KEYS = ('format', 'path')
OUTPUT_FORMATS = ('csv', 'json')
PRESETS = ('table1', 'fig1a', 'fig1b', 'fig1c', 'fig1d')


@dataclass(frozen=True)
class RunConfig:
    """Parámetros, región, tolerancias y salida de una corrida."""
    params: ChainParams
    region: RegionSpec
    tolerances: dict = field(default_factory=config.default_tolerances)
    output_format: str = config.OUTPUT_FORMAT
    output_path: str = config.OUTPUT_DIR
    seed: int = config.DEFAULT_SEED
    random_trials: int = config.DEFAULT_RANDOM_TRIALS
    preset: str = None

    def tol(self, name):
        """Tolerancia por nombre (en minúsculas)."""
        return self.tolerances[name]


def _reject_unknown(section, data, allowed):
    if not isinstance(data, dict):
        raise ConfigError(f"La sección '{section}' debe ser un objeto JSON")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"Claves desconocidas en '{section}': {', '.join(unknown)}")


def preset_params(name, q=None, N=None, eps=1):
    """
    Parámetros de un preset.

    Args:
        name (str): 'table1' o 'fig1a'..'fig1d'
        q (float, optional): q para las familias fig1 (por defecto 0.8)
        N (int, optional): N para las familias fig1 (por defecto 10)
        eps (int): Signo del hopping

    Returns:
        tuple: (ChainParams, RegionSpec o None)
    """
    if name == 'table1':
        return ChainParams.truncated(q=0.8, beta=0.0, gamma=0.5, delta=0.0, N=49, eps=eps), RegionSpec(L=9, K=24)

    q = 0.8 if q is None else float(q)
    N = 10 if N is None else int(N)
    families = {
        'fig1a': (q ** (2 * N), q ** (-2 * N), (q ** (-2 * N) + q ** (-N)) / 2.0),
        'fig1b': (-q, q * q / 2.0, q * q / 2.0),
        'fig1c': (q ** (2 * N), q ** (-2 * N), q ** (-N - 1)),
        'fig1d': (q ** (8 * N), q ** (-2 * N), q ** (-8 * N)),
    }
    if name not in families:
        raise ConfigError(f"Preset desconocido: {name}")
    beta, gamma, delta = families[name]
    return ChainParams.truncated(q=q, beta=beta, gamma=gamma, delta=delta, N=N, eps=eps), None


def _build_params(data):
    _reject_unknown('params', data, PARAM_KEYS)
    try:
        q = float(data['q'])
        N = int(data['N'])
        eps = int(data.get('eps', 1))
        beta = float(data.get('beta', 0.0))
        gamma = float(data['gamma'])
        delta = float(data.get('delta', 0.0))
    except KeyError as e:
        raise ConfigError(f"Falta el parámetro {e}")
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Parámetro con formato inválido: {e}")

    if data.get('truncate_alpha', False):
        if 'alpha' in data:
            raise ConfigError("'alpha' y 'truncate_alpha' son excluyentes")
        return ChainParams.truncated(q=q, beta=beta, gamma=gamma, delta=delta, N=N, eps=eps)
    if 'alpha' not in data:
        raise ConfigError("Falta 'alpha' (o 'truncate_alpha': true)")
    return ChainParams(q=q, alpha=float(data['alpha']), beta=beta, gamma=gamma, delta=delta, N=N, eps=eps)


def _build_tolerances(data):
    _reject_unknown('tolerances', data, config.TOLERANCE_NAMES)
    tolerances = config.default_tolerances()
    for name, value in data.items():
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"Tolerancia '{name}' no numérica")
        if not value > 0:
            raise ConfigError(f"Tolerancia '{name}' debe ser positiva")
        tolerances[name] = value
    return tolerances


def parse_run_config(data):
    """
    Construye un RunConfig desde un diccionario ya deserializado.

    Args:
        data (dict): Documento de configuración

    Returns:
        RunConfig: Configuración validada en su forma

    Raises:
        ConfigError: Claves desconocidas, valores faltantes o inválidos
    """
    _reject_unknown('config', data, TOP_LEVEL_KEYS)
    preset = data.get('preset')

    try:
        if preset is not None:
            if preset not in PRESETS:
                raise ConfigError(f"Preset desconocido: {preset}")
            extra = data.get('params', {})
            _reject_unknown('params', extra, ('q', 'N', 'eps'))
            params, region = preset_params(preset, extra.get('q'), extra.get('N'), int(extra.get('eps', 1)))
        else:
            if 'params' not in data:
                raise ConfigError("Falta la sección 'params'")
            params, region = _build_params(data['params']), None
    except ConfigError:
        raise
    except QRacahError as e:
        raise ConfigError(f"Parámetros inválidos: {e}")

    if 'region' in data:
        _reject_unknown('region', data['region'], REGION_KEYS)
        try:
            region = RegionSpec(L=int(data['region']['L']), K=int(data['region']['K']))
        except KeyError as e:
            raise ConfigError(f"Falta {e} en 'region'")
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Región inválida: {e}")
    if region is None:
        raise ConfigError("Falta la sección 'region'")

    output = data.get('output', {})
    _reject_unknown('output', output, OUTPUT_KEYS)
    fmt = output.get('format', config.OUTPUT_FORMAT)
    if fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"Formato de salida desconocido: {fmt}")

    try:
        seed = int(data.get('seed', config.DEFAULT_SEED))
        trials = int(data.get('random_trials', config.DEFAULT_RANDOM_TRIALS))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Semilla o número de pruebas inválido: {e}")
    if seed < 0 or trials < 0:
        raise ConfigError("'seed' y 'random_trials' deben ser no negativos")

    return RunConfig(
        params=params,
        region=region,
        tolerances=_build_tolerances(data.get('tolerances', {})),
        output_format=fmt,
        output_path=output.get('path', config.OUTPUT_DIR),
        seed=seed,
        random_trials=trials,
        preset=preset,
    )


def load_run_config(path):
    """
    Lee y valida un archivo JSON de configuración.

    Args:
        path (str): Ruta al archivo

    Returns:
        RunConfig: Configuración de la corrida

    Raises:
        ConfigError: Si el archivo no existe, no es JSON o no pasa la validación
    """
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"No existe el archivo de configuración: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"JSON inválido en {path}: {e}")
    return parse_run_config(data)


if __name__ == "__main__":
    cfg = parse_run_config({'preset': 'table1'})
    print(f"✅ Preset table1: {cfg.params}")
    print(f"   Región: {cfg.region}")
