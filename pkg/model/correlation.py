"""
Matrices de correlación y entropía de entrelazamiento.
"""
from dataclasses import dataclass
import sys
import os

import numpy as np
import pandas as pd
from scipy.special import xlogy

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import DomainError
from core.numerics import DenseSym, eig_dense_sym


@dataclass(frozen=True)
class RegionSpec:
    """Subsistema A = sitios 0..L con los modos k = 0..K ocupados."""
    L: int
    K: int

    def check(self, N):
        """
        Verifica 0 <= L <= N-1 y 0 <= K <= N-1.

        Raises:
            DomainError: Si la región no es compatible con N
        """
        if not 0 <= self.L <= N - 1:
            raise DomainError(f"L={self.L} fuera de rango para N={N}")
        if not 0 <= self.K <= N - 1:
            raise DomainError(f"K={self.K} fuera de rango para N={N}")


@dataclass(frozen=True)
class CorrelationData:
    """Matriz completa, bloque truncado, sus autovalores y la entropía."""
    Chat: DenseSym
    C: DenseSym
    c_eigs: np.ndarray
    entropy: float


def projector(N, L):
    """Proyector pi_A sobre los sitios 0..L en el espacio de dimensión N+1."""
    pi = np.zeros((N + 1, N + 1))
    pi[np.arange(L + 1), np.arange(L + 1)] = 1.0
    return pi


def full_correlation(s, K):
    """
    Matriz de correlación completa C_hat = sum_(k<=K) |w_k><w_k|.

    Args:
        s (SpectralData): Datos espectrales
        K (int): Último modo ocupado (0 <= K <= N)

    Returns:
        DenseSym: Proyector de rango K+1
    """
    N = s.phi.shape[0] - 1
    if not 0 <= K <= N:
        raise DomainError(f"K={K} fuera de rango para N={N}")
    filled = s.phi[:, :K + 1]
    return DenseSym(filled @ filled.T)


def truncated_correlation(s, r):
    """Bloque (L+1) x (L+1) superior izquierdo de C_hat."""
    chat = full_correlation(s, r.K)
    return DenseSym(chat.entries[:r.L + 1, :r.L + 1])


def projector_residuals(chat, K):
    """
    Residuos del proyector: ||C_hat^2 - C_hat||_F y |tr C_hat - (K+1)|.

    Returns:
        tuple: (float, float)
    """
    m = chat.entries
    return float(np.linalg.norm(m @ m - m, 'fro')), float(abs(np.trace(m) - (K + 1)))


def entanglement_entropy(c_eigs, tol=None):
    """
    Entropía S = -sum[c ln c + (1-c) ln(1-c)] con 0 ln 0 = 0.

    Args:
        c_eigs (array-like): Autovalores de la matriz truncada
        tol (float, optional): Ventana de recorte alrededor de [0, 1]

    Returns:
        float: Entropía no negativa

    Raises:
        DomainError: Si algún autovalor sale de [-tol, 1+tol]
    """
    tol = config.CLAMP_TOL if tol is None else tol
    c = np.asarray(c_eigs, dtype=float).ravel()
    outside = (c < -tol) | (c > 1.0 + tol)
    if np.any(outside):
        bad = c[outside][0]
        raise DomainError(f"Autovalor de correlación {bad:.3e} fuera de [0, 1]")
    c = np.clip(c, 0.0, 1.0)
    return float(-np.sum(xlogy(c, c) + xlogy(1.0 - c, 1.0 - c)))


def correlation_data(s, r, eig_tol=None, clamp_tol=None):
    """
    Calcula C_hat, C, sus autovalores por diagonalización directa y la entropía.

    Args:
        s (SpectralData): Datos espectrales
        r (RegionSpec): Región y modos ocupados
        eig_tol (float, optional): Tolerancia del eigensolver
        clamp_tol (float, optional): Ventana de recorte para la entropía

    Returns:
        CorrelationData: Datos de correlación
    """
    chat = full_correlation(s, r.K)
    c = DenseSym(chat.entries[:r.L + 1, :r.L + 1])
    c_eigs = eig_dense_sym(c, tol=eig_tol).values
    return CorrelationData(chat, c, c_eigs, entanglement_entropy(c_eigs, clamp_tol))


def complement_entropy(s, K, L, eig_tol=None, clamp_tol=None):
    """
    Entropía del complemento (sitios L+1..N) para el mismo mar de Fermi.

    Args:
        s (SpectralData): Datos espectrales
        K (int): Último modo ocupado
        L (int): Último sitio del subsistema A

    Returns:
        float: Entropía del complemento (0 si está vacío)
    """
    chat = full_correlation(s, K)
    block = chat.entries[L + 1:, L + 1:]
    if block.shape[0] == 0:
        return 0.0
    eigs = eig_dense_sym(DenseSym(block), tol=eig_tol).values
    return entanglement_entropy(eigs, clamp_tol)


def entropy_profile(s, K, L_range, eig_tol=None, clamp_tol=None):
    """
    Perfil de entropía S(L) para cada L del rango.

    Args:
        s (SpectralData): Datos espectrales
        K (int): Último modo ocupado
        L_range (iterable): Valores de L

    Returns:
        pd.DataFrame: Columnas ['L', 'entropy'] ordenadas por L
    """
    N = s.phi.shape[0] - 1
    rows = []
    for L in sorted(int(x) for x in L_range):
        if not 0 <= L <= N:
            raise DomainError(f"L={L} fuera de rango para N={N}")
        region = RegionSpec(L=L, K=K)
        data = correlation_data(s, region, eig_tol, clamp_tol)
        rows.append({'L': L, 'entropy': data.entropy})
    return pd.DataFrame(rows, columns=['L', 'entropy'])


if __name__ == "__main__":
    from core.qkernel import ChainParams
    from model.chain import build_chain, spectral_data

    params = ChainParams.truncated(q=0.8, beta=0.0, gamma=0.5, delta=0.0, N=20)
    spectral = spectral_data(build_chain(params))
    print("Perfil de entropía (N=20, K=9):")
    print(entropy_profile(spectral, 9, range(0, 20)))
