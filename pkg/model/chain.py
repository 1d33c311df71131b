"""
Modelo de la cadena de fermiones libres.
Construye los acoplamientos J_n y campos mu_n a partir de los coeficientes
q-Racah, las matrices de una partícula A y A*, y las funciones de onda analíticas.
"""
from dataclasses import dataclass, field
import sys
import os

import numpy as np

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import (
    QRacahError, SingularParameterError, ValidationError, NumericDegradationError
)
from core.numerics import SymTridiag, eig_sym_tridiag
from core.qkernel import (
    ChainParams, racah_coeffs, racah_row_scaled, weight, omega, lambda_pos
)


@dataclass(frozen=True)
class ValidationReport:
    """Lista de condiciones violadas; vacía si los parámetros son válidos."""
    violations: tuple = ()

    @property
    def ok(self):
        return len(self.violations) == 0


@dataclass(frozen=True)
class ChainModel:
    """Cadena construida: J_n (n=0..N-1) y mu_n (n=0..N)."""
    params: ChainParams
    J: np.ndarray
    mu: np.ndarray
    coeffs: object = field(repr=False, default=None)


@dataclass(frozen=True)
class SpectralData:
    """Autovalores omega_k y matriz phi[n, k] = phi_n(omega_k)."""
    omegas: np.ndarray
    phi: np.ndarray


def validate(p):
    """
    Verifica que los parámetros definan una cadena válida.

    Args:
        p (ChainParams): Parámetros del modelo

    Returns:
        ValidationReport: Condiciones violadas (positividad de A_n C_(n+1),
        truncación J_N = 0 y denominadores singulares)
    """
    violations = []
    try:
        coeffs = racah_coeffs(p)
    except SingularParameterError as e:
        return ValidationReport((f"Denominador singular '{e.denominator}' en n={e.n}",))

    A, C, N = coeffs.A, coeffs.C, p.N
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(C))):
        violations.append("Coeficientes A_n o C_n no finitos")

    if A[N] * C[N + 1] != 0.0:
        violations.append(f"J_N != 0 (A_N = {A[N]:.6g})")

    products = A[:N] * C[1:N + 1]
    for n in np.nonzero(~(products > 0))[0]:
        violations.append(f"A_n*C_(n+1) <= 0 en n={int(n)} ({products[n]:.6g})")

    return ValidationReport(tuple(violations))


def build_chain(p):
    """
    Construye el modelo de cadena: J_n = eps*sqrt(A_n C_(n+1)), mu_n = A_n + C_n - 1 - gamma*delta*q.

    Args:
        p (ChainParams): Parámetros del modelo

    Returns:
        ChainModel: Acoplamientos y campos

    Raises:
        ValidationError: Si los parámetros no pasan validate
    """
    report = validate(p)
    if not report.ok:
        raise ValidationError(report)
    coeffs = racah_coeffs(p)
    N = p.N
    J = p.eps * np.sqrt(coeffs.A[:N] * coeffs.C[1:N + 1])
    mu = coeffs.A + coeffs.C[:N + 1] - 1.0 - p.gamma * p.delta * p.q
    J.setflags(write=False)
    mu.setflags(write=False)
    return ChainModel(params=p, J=J, mu=mu, coeffs=coeffs)


def hopping_matrix(m):
    """Matriz tridiagonal A: diagonal -mu_n, subdiagonal J_n."""
    return SymTridiag(-m.mu, m.J)


def astar_matrix(p, n_max=None):
    """
    Matriz diagonal A* con entradas lambda_n = q^-n + alpha*beta*q^(n+1).

    Args:
        p (ChainParams): Parámetros del modelo
        n_max (int, optional): Último índice (por defecto N)

    Returns:
        np.ndarray: Matriz (n_max+1) x (n_max+1)
    """
    n_max = p.N if n_max is None else n_max
    if n_max > p.N:
        raise QRacahError(f"n_max={n_max} excede N={p.N}")
    return np.diag(lambda_pos(p, np.arange(n_max + 1)))


def _worst_offdiag(gram):
    dev = np.abs(gram - np.eye(gram.shape[0]))
    idx = np.unravel_index(int(np.argmax(dev)), dev.shape)
    return (int(idx[0]), int(idx[1])), float(dev[idx])


def orthonormality_deviation(phi):
    """
    Peor desviación de las dos relaciones de ortonormalidad.

    Returns:
        dict: {'columns': (par, desviación), 'rows': (par, desviación)}
    """
    return {
        'columns': _worst_offdiag(phi.T @ phi),
        'rows': _worst_offdiag(phi @ phi.T),
    }


def spectral_data(m, tol=None):
    """
    Autovalores y funciones de onda analíticas
    phi_n(omega_k) = eps^n sqrt(W_k) prod_(j=1..n) [A_(j-1)/sqrt(A_(j-1) C_j)] R_n(omega_k).

    El signo de cada factor del producto es el de A_(j-1), lo que hace de cada
    columna un autovector de la matriz de hopping.

    Args:
        m (ChainModel): Modelo construido
        tol (float, optional): Tolerancia de ortonormalidad

    Returns:
        SpectralData: omegas y phi

    Raises:
        NumericDegradationError: Si se pierde la ortonormalidad
    """
    tol = config.ORTHO_TOL if tol is None else tol
    p = m.params
    N = p.N
    A, C = m.coeffs.A, m.coeffs.C

    n = np.arange(N + 1)
    log_ratio = np.zeros(N + 1)
    log_ratio[1:] = 0.5 * np.cumsum(np.log(np.abs(A[:N])) - np.log(np.abs(C[1:N + 1])))
    sign_ratio = np.ones(N + 1)
    sign_ratio[1:] = np.cumprod(np.sign(A[:N]))
    gauge = float(p.eps) ** n * sign_ratio

    phi = np.zeros((N + 1, N + 1))
    for k in range(N + 1):
        w = weight(p, k).sqrt()
        mant, logs = racah_row_scaled(p, k, m.coeffs)
        with np.errstate(over='ignore', under='ignore'):
            phi[:, k] = gauge * w.sign * mant * np.exp(w.log_magnitude + log_ratio + logs)

    deviations = orthonormality_deviation(phi)
    for kind, (pair, dev) in deviations.items():
        if not dev <= tol:
            raise NumericDegradationError(kind, pair, dev)

    omegas = omega(p, n)
    omegas.setflags(write=False)
    phi.setflags(write=False)
    return SpectralData(omegas=omegas, phi=phi)


def spectrum_residuals(m, s, tol=None):
    """
    Compara el espectro numérico de A con los omega_k analíticos.

    Args:
        m (ChainModel): Modelo construido
        s (SpectralData): Datos espectrales analíticos
        tol (float, optional): Tolerancia del eigensolver

    Returns:
        tuple: (error relativo máximo de autovalores, residuo máximo ||A phi_k - omega_k phi_k||)
    """
    h = hopping_matrix(m)
    dec = eig_sym_tridiag(h, tol=tol)
    analytic = np.sort(s.omegas)
    scale = np.maximum(np.abs(analytic), 1.0)
    eig_err = float(np.max(np.abs(dec.values - analytic) / scale))
    dense = h.to_dense()
    vec_err = float(np.max(np.linalg.norm(dense @ s.phi - s.phi * s.omegas, axis=0)))
    return eig_err, vec_err


def spectrum_invariance(p, kappa=2.0, tol=None):
    """
    Residuos del espectro de A bajo gamma -> gamma/kappa, delta -> delta*kappa y bajo eps -> -eps.
    La transformación de escala se omite (None) si los parámetros nuevos no son válidos.

    Args:
        p (ChainParams): Parámetros del modelo
        kappa (float): Factor de escala
        tol (float, optional): Tolerancia del eigensolver

    Returns:
        dict: {'rescaling': float o None, 'eps_flip': float}
    """
    base = eig_sym_tridiag(hopping_matrix(build_chain(p)), tol=tol).values
    scale = max(float(np.max(np.abs(base))), 1.0)

    flipped = eig_sym_tridiag(hopping_matrix(build_chain(p.with_eps(-p.eps))), tol=tol).values
    result = {'eps_flip': float(np.max(np.abs(flipped - base)) / scale), 'rescaling': None}

    rescaled = p.rescaled(kappa)
    if validate(rescaled).ok:
        other = eig_sym_tridiag(hopping_matrix(build_chain(rescaled)), tol=tol).values
        result['rescaling'] = float(np.max(np.abs(other - base)) / scale)
    return result


if __name__ == "__main__":
    # Demo con una cadena pequeña
    params = ChainParams.truncated(q=0.8, beta=0.0, gamma=0.5, delta=0.0, N=6)
    report = validate(params)
    print("=" * 70)
    print("DEMO DEL MODELO DE CADENA")
    print("=" * 70)
    print(f"Validación: {'✅ válida' if report.ok else report.violations}")
    chain = build_chain(params)
    print(f"J = {np.round(chain.J, 6)}")
    print(f"mu = {np.round(chain.mu, 6)}")
    spectral = spectral_data(chain)
    eig_err, vec_err = spectrum_residuals(chain, spectral)
    print(f"Error de autovalores: {eig_err:.2e} | residuo de autovectores: {vec_err:.2e}")
