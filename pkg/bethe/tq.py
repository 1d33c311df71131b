"""
Relación TQ para beta = 0.
Recurrencia de tres términos para los S_r, polinomio en Lambda, recuperación
de raíces de Bethe desde Q(U) y aproximación termodinámica -rho_n.
"""
from dataclasses import dataclass, field
import math
import sys
import os

import mpmath
import numpy as np
from mpmath.libmp import NoConvergence
from numpy.polynomial import polynomial as P

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import RegimeError, SingularRecurrenceError, RescalingError, ConvergenceError
from core.qkernel import GUARD_DIGITS, exact_params
from core.numerics import EPS, NORM_FLOOR, PolyReal, poly_roots, elementary_symmetric
from bethe.aba import BetheState, reduced_bethe_defects, refine_roots_beta0


@dataclass(frozen=True)
class TQCoeffs:
    """
    Coeficientes de la recurrencia (n = 0..L+1, sólo con delta = 0) y p(U).
    eps_rec es el coeficiente epsilon_n de la recurrencia, no el signo del hopping.
    """
    sigma: np.ndarray
    rho: np.ndarray
    eps_rec: np.ndarray
    eps_minus1: float
    pU: PolyReal


@dataclass(frozen=True)
class TQSolution:
    """Autovalores Lambda, estados de Bethe recuperados y aproximación -rho_n."""
    lambdas: np.ndarray
    states: tuple
    thermo: np.ndarray
    flagged: tuple = ()
    qpolys: tuple = field(default=(), repr=False)


def _eps_rec(p, r, n):
    q = p.q
    n = np.asarray(n, dtype=float)
    return p.alpha * p.gamma * (q + 1.0) * (q ** (-n) - q ** (-r.L)) * (1.0 - q ** (n - r.K))


def tq_coeffs(p, r):
    """
    Calcula sigma_n, rho_n, epsilon_n y p(U).

    Args:
        p (ChainParams): Parámetros con beta = 0
        r (RegionSpec): Región y modos ocupados

    Returns:
        TQCoeffs: Con sigma/rho/eps_rec en None si delta != 0

    Raises:
        RegimeError: Si beta != 0
    """
    if p.beta != 0:
        raise RegimeError("La relación TQ requiere beta = 0")
    r.check(p.N)
    q, a, g, d = p.q, p.alpha, p.gamma, p.delta
    L, K = r.L, r.K

    c0 = -a * g * g * d * (q + 1.0) ** 2 / q ** L
    c1 = g * (q + 1.0) / q ** (K + L) * (a * g * d * q ** (2 * K + L + 2)
                                          + q ** K * (a * d + a + g * d + d) + a * q ** L)
    c2 = -2.0 * q * (a * g + a + g * d + g)
    c3 = 2.0 * (q + 1.0)
    pU = PolyReal([c0, c1, c2, c3])

    if d != 0:
        return TQCoeffs(sigma=None, rho=None, eps_rec=None, eps_minus1=None, pU=pU)

    n = np.arange(L + 2, dtype=float)
    sigma = (q + 1.0) * (q ** (-n) + q ** n - 2.0)
    rho = ((q + 1.0) * q ** (n - L - K) * (a * g * q ** (K + L + 1) + 1.0 / q)
           + (q + 1.0) * (a + g) * q ** (-n) - 2.0 * q * (a * g + a + g))
    eps_rec = _eps_rec(p, r, n)
    eps_minus1 = float(_eps_rec(p, r, -1))
    for arr in (sigma, rho, eps_rec):
        arr.setflags(write=False)
    return TQCoeffs(sigma=sigma, rho=rho, eps_rec=eps_rec, eps_minus1=eps_minus1, pU=pU)


def _pivot(c, n):
    """epsilon_n para n = -1..L-1, con control de anulación."""
    value = c.eps_minus1 if n == -1 else float(c.eps_rec[n])
    scale = float(np.max(np.abs(c.eps_rec))) if len(c.eps_rec) else 1.0
    if abs(value) <= config.POLE_FACTOR * EPS * max(scale, abs(c.eps_minus1), NORM_FLOOR):
        raise SingularRecurrenceError(n)
    return value


def _require_recurrence(c):
    if c.rho is None:
        raise RegimeError("La recurrencia de tres términos requiere delta = 0")


def lambda_polynomial(c, L, scale=1.0):
    """
    Polinomio S_(-1)(Lambda) de grado L+1, con semilla S_(L+1) = 0, S_L = 1 y barrido
    descendente 0 = sigma_(m+1) S_(m+1) + (rho_m + Lambda) S_m + epsilon_(m-1) S_(m-1).

    Args:
        c (TQCoeffs): Coeficientes con delta = 0
        L (int): Último sitio del subsistema
        scale (float): La variable del polinomio es Lambda/scale

    Returns:
        PolyReal: Coeficientes ascendentes en Lambda/scale

    Raises:
        SingularRecurrenceError: Si algún pivote epsilon_n se anula
    """
    _require_recurrence(c)
    upper = np.zeros(1)
    current = np.ones(1)
    for m in range(L, -1, -1):
        pivot = _pivot(c, m - 1)
        term = P.polyadd(c.sigma[m + 1] * upper, P.polymul([c.rho[m], scale], current))
        upper, current = current, -term / pivot
    return PolyReal(current)


def q_polynomial(S):
    """
    Q(U) = sum_(i=0..L) (-1)^(L-i) S_(L-i) U^i a partir de S_0..S_L.

    Returns:
        PolyReal: Polinomio mónico si S_0 = 1
    """
    S = np.asarray(S)
    L = len(S) - 1
    i = np.arange(L + 1)
    return PolyReal((-1.0) ** (L - i) * S[L - i].real)


# Recurrencia en precisión extendida

def _mp_recurrence(p, r):
    """sigma_n (n = 0..L+1), rho_n (n = 0..L) y epsilon_n (n = -1..L-1) como mpf."""
    q, a, _, g, _ = exact_params(p)
    L, K = r.L, r.K
    sigma = [(q + 1) * (q ** (-n) + q ** n - 2) for n in range(L + 2)]
    rho = [(q + 1) * q ** (n - L - K) * (a * g * q ** (K + L + 1) + 1 / q)
           + (q + 1) * (a + g) * q ** (-n) - 2 * q * (a * g + a + g) for n in range(L + 1)]
    eps = {n: a * g * (q + 1) * (q ** (-n) - q ** (-L)) * (1 - q ** (n - K)) for n in range(-1, L)}
    return sigma, rho, eps


def _mp_sweep(rec, L, lam):
    """
    Barrido descendente en la precisión vigente, con su derivada en Lambda.

    Returns:
        tuple: (S, dS, pérdida) con S[j] = S_(j-1), j = 0..L+1, y la pérdida por
        cancelación acumulada en S_0..S_(L-1), en dígitos
    """
    sigma, rho, eps = rec
    S = [mpmath.mpf(0)] * (L + 3)
    dS = [mpmath.mpf(0)] * (L + 3)
    S[L + 1] = mpmath.mpf(1)
    loss = 0.0
    for m in range(L, -1, -1):
        upper = sigma[m + 1] * S[m + 2]
        middle = (rho[m] + lam) * S[m + 1]
        S[m] = -(upper + middle) / eps[m - 1]
        dS[m] = -(sigma[m + 1] * dS[m + 2] + S[m + 1] + (rho[m] + lam) * dS[m + 1]) / eps[m - 1]
        if m >= 1:
            size = max(abs(upper), abs(middle))
            # Un S exactamente nulo no mide cancelación; S_0 = 0 se trata aparte
            if S[m] != 0 and size > 0:
                loss += max(0.0, float(mpmath.log10(size / abs(S[m] * eps[m - 1]))))
    return S[:L + 2], dS[:L + 2], loss


def _polish_lambda(rec, L, lam, digits):
    """Newton sobre S_(-1)(Lambda) = 0 desde una raíz aproximada."""
    limit = mpmath.mpf(10) ** (-(digits - 5))
    for _ in range(config.TQ_NEWTON_ITER):
        S, dS, _ = _mp_sweep(rec, L, lam)
        if dS[0] == 0:
            break
        step = S[0] / dS[0]
        lam -= step
        if abs(step) <= limit * max(abs(lam), 1):
            break
    return lam


def _sweep_digits(c, L, lam):
    """Cota inicial de dígitos: amplificación del barrido más los de guarda."""
    m = np.arange(L + 1)
    eps = np.array([c.eps_minus1 if k == 0 else c.eps_rec[k - 1] for k in m], dtype=float)
    growth = np.log10(1.0 + (np.abs(c.sigma[m + 1]) + np.abs(c.rho[m] + lam)) / np.abs(eps))
    return GUARD_DIGITS + 2 * int(math.ceil(growth.sum()))


def _tq_root(p, r, c, lam0):
    """
    Lambda pulido, S_0..S_L normalizados (S_0 = 1) y raíces U_i de Q(U).

    La precisión se duplica mientras la cancelación acumulada del barrido no deje
    GUARD_DIGITS dígitos correctos en S_0.

    Raises:
        RescalingError: Si S_0 se anula o no se resuelve antes de TQ_MAX_DIGITS
    """
    L = r.L
    digits = _sweep_digits(c, L, lam0)
    steps = max(200, 20 * L)
    lam = lam0
    while True:
        with mpmath.workdps(digits):
            rec = _mp_recurrence(p, r)
            lam = _polish_lambda(rec, L, mpmath.mpf(lam), digits)
            S, _, loss = _mp_sweep(rec, L, lam)
            if S[1] == 0:
                raise RescalingError(float(lam))
            if loss <= digits - GUARD_DIGITS:
                S = [S[j + 1] / S[1] for j in range(L + 1)]
                # Coeficientes de Q del grado L al 0: (-1)^k S_k
                coeffs = [(-1) ** k * S[k] for k in range(L + 1)]
                U = []
                if L > 0:
                    try:
                        U = mpmath.polyroots(coeffs, maxsteps=steps, extraprec=digits)
                    except NoConvergence:
                        raise ConvergenceError(0, steps)
                U = np.array([complex(x) for x in U], dtype=complex)
                U = U[np.lexsort((U.imag, U.real))] if L > 0 else U
                return float(lam), np.array([float(s) for s in S]), U
        if digits >= config.TQ_MAX_DIGITS:
            raise RescalingError(float(lam))
        digits = min(config.TQ_MAX_DIGITS, max(2 * digits, GUARD_DIGITS + 2 * int(math.ceil(loss))))
        lam = float(lam)


def solve_tq(p, r, imag_tol=None):
    """
    Resuelve la relación TQ: raíces del polinomio en Lambda, secuencias S_r,
    polinomios Q(U) y raíces de Bethe u_i = +sqrt(q/U_i).

    Las raíces en Lambda del polinomio en doble precisión se pulen por Newton
    sobre el barrido en mpmath; S_r y las raíces de Q(U) se obtienen en la misma
    precisión. Las raíces u_i se refinan sobre las ecuaciones de Bethe reducidas
    y cada estado lleva sus defectos.

    Args:
        p (ChainParams): Parámetros con beta = delta = 0
        r (RegionSpec): Región y modos ocupados
        imag_tol (float, optional): Tolerancia relativa de parte imaginaria

    Returns:
        TQSolution: lambdas ascendentes, estados, -rho_n y raíces descartadas

    Raises:
        RegimeError: Si beta != 0 o delta != 0
        RescalingError: Si S_0 se anula o se pierde por cancelación aun con TQ_MAX_DIGITS
        ConvergenceError: Si las raíces de Q(U) no convergen
    """
    imag_tol = config.IMAG_TOL if imag_tol is None else imag_tol
    c = tq_coeffs(p, r)
    _require_recurrence(c)
    L = r.L

    scale = max(float(np.max(np.abs(c.rho[:L + 1]))), 1.0)
    raw = poly_roots(lambda_polynomial(c, L, scale)) * scale

    accepted, flagged = [], []
    for root in raw:
        if abs(root.imag) > imag_tol * max(abs(root), 1.0):
            print(f"⚠️  Raíz compleja del polinomio en Lambda descartada: {root:.6g}")
            flagged.append(complex(root))
        else:
            accepted.append(float(root.real))

    roots = sorted((_tq_root(p, r, c, lam) for lam in accepted), key=lambda root: root[0])
    states, qpolys = [], []
    for lam, S, U in roots:
        u = refine_roots_beta0(np.sqrt(p.q / U), p, r)
        defects = reduced_bethe_defects(u, p, r) if L > 0 else np.zeros(0, dtype=complex)
        states.append(BetheState.from_roots(u, p, lam=complex(lam), residuals=defects))
        qpolys.append(q_polynomial(S))

    lambdas = np.array([root[0] for root in roots])
    thermo = -np.asarray(c.rho[:L + 1])
    return TQSolution(lambdas=lambdas, states=tuple(states), thermo=thermo,
                      flagged=tuple(flagged), qpolys=tuple(qpolys))


def vieta_residual(state, Q):
    """Desviación relativa entre los S_r de las raíces de Q y los coeficientes de Q."""
    L = len(state.U)
    if Q.degree != L:
        return np.inf
    i = np.arange(L + 1)
    # S_(L-i) = (-1)^(L-i) * coeficiente de U^i
    expected = (-1.0) ** (L - i) * np.asarray(Q.coeffs)
    from_roots = elementary_symmetric(state.U)[L - i]
    return float(np.max(np.abs(from_roots - expected)) / max(np.max(np.abs(expected)), NORM_FLOOR))


def tq_residual(state, c, p, r, U_samples):
    """
    Residuo de la ecuación en q-diferencias
    U^2 Q(U) Lambda = (q+1)(U-alpha)(U-gamma)(U-gamma*delta) q^-L Q(qU) - p(U) Q(U)
                      + q^L (q+1)(U-q^(-K-L-1))(U-alpha*gamma*q)(U-gamma*delta*q^(K-L+1)) Q(U/q).

    Args:
        state (BetheState): Estado con lam definido
        c (TQCoeffs): Coeficientes (se usa p(U))
        p (ChainParams): Parámetros con beta = 0
        r (RegionSpec): Región y modos ocupados
        U_samples (array-like): Puntos de evaluación

    Returns:
        float: Máximo de |lhs - rhs| / max(|lhs|, |rhs|)
    """
    if p.beta != 0:
        raise RegimeError("La relación TQ requiere beta = 0")
    q, a, g, gd = p.q, p.alpha, p.gamma, p.gamma * p.delta
    L, K = r.L, r.K
    S = elementary_symmetric(state.U)
    i = np.arange(len(state.U) + 1)
    coeffs = (-1.0) ** (len(state.U) - i) * S[len(state.U) - i]

    def Q(x):
        return P.polyval(x, coeffs)

    worst = 0.0
    for U in np.asarray(U_samples, dtype=complex).ravel():
        lhs = U * U * Q(U) * state.lam
        t1 = (q + 1.0) * (U - a) * (U - g) * (U - gd) * q ** (-L) * Q(q * U)
        t2 = -P.polyval(U, c.pU.coeffs) * Q(U)
        t3 = (q ** L * (q + 1.0) * (U - q ** (-K - L - 1)) * (U - a * g * q)
              * (U - gd * q ** (K - L + 1)) * Q(U / q))
        scale = max(abs(lhs), abs(t1 + t2 + t3), NORM_FLOOR)
        worst = max(worst, abs(lhs - (t1 + t2 + t3)) / scale)
    return float(worst)


if __name__ == "__main__":
    from core.qkernel import ChainParams
    from model.correlation import RegionSpec

    params = ChainParams.truncated(q=0.8, beta=0.0, gamma=0.5, delta=0.0, N=49)
    region = RegionSpec(L=9, K=24)
    solution = solve_tq(params, region)
    print("=" * 70)
    print("RELACIÓN TQ (tabla de referencia)")
    print("=" * 70)
    for lam, thermo in zip(solution.lambdas, np.sort(solution.thermo)):
        print(f"  Lambda = {lam:14.6g} | -rho = {thermo:14.6g}")
