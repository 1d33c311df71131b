"""
Fábricas de parámetros compartidas por los tests.
"""
import sys
import os

import numpy as np

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.qkernel import ChainParams
from model.chain import validate, build_chain, spectral_data
from model.correlation import RegionSpec

SEED = 20220718


def table1_params():
    """Parámetros de la tabla de referencia (N=49, q=0.8, gamma=0.5)."""
    return ChainParams.truncated(q=0.8, beta=0.0, gamma=0.5, delta=0.0, N=49)


def table1_region():
    return RegionSpec(L=9, K=24)


def small_both_params(N=12):
    """beta = delta = 0 a escala chica."""
    return ChainParams.truncated(q=0.8, beta=0.0, gamma=0.5, delta=0.0, N=N)


def small_beta0_params(N=8):
    """beta = 0 con delta distinto de cero."""
    return ChainParams.truncated(q=0.8, beta=0.0, gamma=0.5, delta=-0.4, N=N)


def small_delta0_params(N=8):
    """delta = 0 con beta distinto de cero."""
    return ChainParams.truncated(q=0.8, beta=-0.4, gamma=0.5, delta=0.0, N=N)


def generic_params(N=8):
    """Régimen genérico con alpha*beta*gamma*delta > 0."""
    return ChainParams.truncated(q=0.8, beta=-0.4, gamma=0.6, delta=-0.3, N=N)


def regime_params(N=8):
    """Un conjunto por régimen: generic, beta0, delta0, both."""
    return {
        'generic': generic_params(N),
        'beta0': small_beta0_params(N),
        'delta0': small_delta0_params(N),
        'both': small_both_params(N),
    }


def random_generic_params(rng, N):
    """Parámetros genéricos válidos al azar."""
    while True:
        q = rng.uniform(0.75, 0.92)
        p = ChainParams(q=q, alpha=q ** (-N - 1), beta=-rng.uniform(0.05, 1.0),
                        gamma=rng.uniform(0.05, 0.95), delta=-rng.uniform(0.05, 1.0), N=N)
        if validate(p).ok:
            return p


def chain_and_spectral(p):
    chain = build_chain(p)
    return chain, spectral_data(chain)


def rng(seed=SEED):
    return np.random.default_rng(seed)
