"""
Operador de Heun algebraico.
Construye T = {A, A*} - (lambda_L + lambda_(L+1)) A - (omega_K + omega_(K+1)) A*,
verifica sus conmutaciones y las relaciones del álgebra de Askey-Wilson.
"""
from dataclasses import dataclass, field
import sys
import os

import numpy as np

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import ConsistencyError
from core.numerics import (
    NORM_FLOOR, DenseSym, SymTridiag, as_matrix, commutator_residual,
    eig_sym_tridiag, eig_dense_sym
)
from core.qkernel import omega, lambda_pos, difference_coeffs
from model.correlation import projector


@dataclass(frozen=True)
class HeunData:
    """Operador T, su bloque restringido a los sitios 0..L y los residuos de construcción."""
    T: DenseSym
    T_block: DenseSym
    region: object
    residuals: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AWConstants:
    """Constantes de estructura del álgebra de Askey-Wilson."""
    chi: float
    chi_star: float
    xi: float
    eta: float
    eta_star: float


def heun_operator(A, Astar, p, r, chat=None, pi_tol=None, chat_tol=None):
    """
    Construye el operador de Heun y verifica que conmuta con pi_A (y con C_hat si se entrega).

    Args:
        A: Matriz de hopping (SymTridiag o array)
        Astar: Matriz diagonal A*
        p (ChainParams): Parámetros del modelo
        r (RegionSpec): Región y modos ocupados
        chat (DenseSym, optional): Correlación completa para verificar [T, C_hat]
        pi_tol (float, optional): Tolerancia de [T, pi_A]
        chat_tol (float, optional): Tolerancia de [T, C_hat]

    Returns:
        HeunData: T, bloque T_block y residuos

    Raises:
        ConsistencyError: Si algún conmutador excede su tolerancia
    """
    pi_tol = config.PI_COMMUTATOR_TOL if pi_tol is None else pi_tol
    chat_tol = config.COMMUTATOR_TOL if chat_tol is None else chat_tol
    r.check(p.N)

    a = as_matrix(A)
    a_star = as_matrix(Astar)
    lam = lambda_pos(p, [r.L, r.L + 1]).sum()
    om = omega(p, [r.K, r.K + 1]).sum()
    t = a @ a_star + a_star @ a - lam * a - om * a_star
    t = 0.5 * (t + t.T)

    residuals = {'pi': commutator_residual(t, projector(p.N, r.L))}
    if residuals['pi'] > pi_tol:
        raise ConsistencyError('[T, pi_A]', residuals['pi'], pi_tol)
    if chat is not None:
        residuals['chat'] = commutator_residual(t, chat)
        if residuals['chat'] > chat_tol:
            raise ConsistencyError('[T, C_hat]', residuals['chat'], chat_tol)

    block = DenseSym(t[:r.L + 1, :r.L + 1])
    return HeunData(T=DenseSym(t), T_block=block, region=r, residuals=residuals)


def aw_constants(p):
    """
    Constantes xi, chi, chi*, eta, eta* en función de los parámetros.

    Args:
        p (ChainParams): Parámetros del modelo

    Returns:
        AWConstants: Las cinco constantes
    """
    q, a, b, g, d = p.q, p.alpha, p.beta, p.gamma, p.delta
    qm2 = (q - 1.0) ** 2
    chi = -g * d * (q * q - 1.0) ** 2 / q
    chi_star = -a * b * (q * q - 1.0) ** 2 / q
    xi = -qm2 * (a * (b * d + b + g + 1.0) + g * (b * d + d + 1.0) + b * d)
    eta = qm2 * (q + 1.0) * (a * g * (b * d + d + 1.0) + a * b * d + g * d * (b * d + b + g + 1.0))
    eta_star = qm2 * (q + 1.0) * (a * a * b + a * (b * b * d + b * (g + 1.0) * (d + 1.0) + g) + b * g * d)
    return AWConstants(chi=chi, chi_star=chi_star, xi=xi, eta=eta, eta_star=eta_star)


def verify_aw(A, Astar, c, q):
    """
    Residuos de las dos relaciones de Askey-Wilson, normalizados por la norma
    de la combinación cúbica de cada una.

    Args:
        A: Matriz A
        Astar: Matriz A*
        c (AWConstants): Constantes de estructura
        q (float): Parámetro q

    Returns:
        tuple: (residual1, residual2)
    """
    a = as_matrix(A).astype(float)
    s = as_matrix(Astar).astype(float)
    eye = np.eye(a.shape[0])
    qq = q + 1.0 / q

    cubic1 = a @ a @ s - qq * (a @ s @ a) + s @ a @ a
    cubic2 = s @ s @ a - qq * (s @ a @ s) + a @ s @ s
    diff1 = cubic1 - (c.xi * a + c.chi * s + c.eta * eye)
    diff2 = cubic2 - (c.chi_star * a + c.xi * s + c.eta_star * eye)
    res1 = np.linalg.norm(diff1, 'fro') / max(np.linalg.norm(cubic1, 'fro'), NORM_FLOOR)
    res2 = np.linalg.norm(diff2, 'fro') / max(np.linalg.norm(cubic2, 'fro'), NORM_FLOOR)
    return float(res1), float(res2)


def spectral_gap(values):
    """Mínima separación entre autovalores dividida por su rango (inf si hay uno solo)."""
    values = np.sort(np.asarray(values, dtype=float))
    if len(values) < 2:
        return np.inf
    spread = values[-1] - values[0]
    return float(np.min(np.diff(values)) / max(spread, NORM_FLOOR))


def heun_spectrum(h, tol=None, gap_tol=None):
    """
    Diagonaliza T_block (tridiagonal en la base de posiciones).

    Args:
        h (HeunData): Operador de Heun
        tol (float, optional): Tolerancia del eigensolver
        gap_tol (float, optional): Umbral de separación relativa

    Returns:
        EigenDecomp: Autovalores ascendentes y autovectores de T_block
    """
    gap_tol = config.GAP_TOL if gap_tol is None else gap_tol
    dec = eig_sym_tridiag(SymTridiag.from_dense(h.T_block), tol=tol)
    gap = spectral_gap(dec.values)
    if gap < gap_tol:
        print(f"⚠️  Espectro de T_block casi degenerado: separación relativa {gap:.2e}")
    return dec


def heun_correlation_eigs(h, C, tol=None, gap_tol=None):
    """
    Autovalores de C leídos en la base propia de T_block. Si el espectro de T_block
    es casi degenerado, se diagonaliza C directamente.

    Args:
        h (HeunData): Operador de Heun
        C (DenseSym): Matriz de correlación truncada
        tol (float, optional): Tolerancia del eigensolver
        gap_tol (float, optional): Umbral de separación relativa

    Returns:
        tuple: (np.ndarray autovalores ascendentes, str ruta 'heun' o 'direct',
        float residuo fuera de la diagonal de V^T C V)
    """
    gap_tol = config.GAP_TOL if gap_tol is None else gap_tol
    dec = heun_spectrum(h, tol=tol, gap_tol=gap_tol)
    if spectral_gap(dec.values) < gap_tol:
        return eig_dense_sym(C, tol=tol).values, 'direct', float('nan')
    v = dec.vectors
    rotated = v.T @ as_matrix(C) @ v
    offdiag = float(np.max(np.abs(rotated - np.diag(np.diag(rotated))), initial=0.0))
    return np.sort(np.diag(rotated)), 'heun', offdiag


def astar_conjugation_residual(s, p, Astar=None):
    """
    Compara Phi^T A* Phi con la tridiagonal (Jbar, -mubar) de la base de energía.
    Los elementos fuera de la diagonal se comparan en valor absoluto.

    Args:
        s (SpectralData): Datos espectrales
        p (ChainParams): Parámetros del modelo
        Astar (np.ndarray, optional): Matriz A*

    Returns:
        float: Máxima desviación absoluta relativa a max |lambda_n|
    """
    a_star = as_matrix(Astar) if Astar is not None else np.diag(lambda_pos(p, np.arange(p.N + 1)))
    conj = s.phi.T @ a_star @ s.phi
    jbar, mubar = difference_coeffs(p)
    expected = np.diag(-mubar) + np.diag(jbar, 1) + np.diag(jbar, -1)
    scale = max(float(np.max(np.abs(np.diag(a_star)))), 1.0)
    off = ~np.eye(conj.shape[0], dtype=bool)
    off_err = np.max(np.abs(np.abs(conj) - np.abs(expected))[off], initial=0.0)
    diag_err = np.max(np.abs(np.diag(conj) + mubar))
    return float(max(off_err, diag_err) / scale)


if __name__ == "__main__":
    from core.qkernel import ChainParams
    from model.chain import build_chain, hopping_matrix, astar_matrix
    from model.correlation import RegionSpec

    params = ChainParams.truncated(q=0.8, beta=0.0, gamma=0.5, delta=0.0, N=49)
    chain = build_chain(params)
    region = RegionSpec(L=9, K=24)
    heun = heun_operator(hopping_matrix(chain), astar_matrix(params), params, region)
    print("Autovalores de T_block (tabla de referencia):")
    print(heun_spectrum(heun).values)
