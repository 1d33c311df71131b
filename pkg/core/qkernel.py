"""
Capa de funciones q-especiales.
Símbolos de q-Pochhammer, coeficientes de recurrencia y de diferencia de los
polinomios q-Racah, grillas de autovalores, evaluación de polinomios por
recurrencia y pesos de ortonormalidad.
"""
from dataclasses import dataclass, replace
import math
import sys
import os

import mpmath
import numpy as np

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import (
    DomainError, SingularParameterError, ParameterDomainError, DegenerateRecurrenceError
)
from core.numerics import EPS, LogProduct, log_product

# Factores más chicos que SNAP_FACTOR * eps * escala se consideran ceros exactos
SNAP_FACTOR = 64.0


@dataclass(frozen=True)
class ChainParams:
    """
    Parámetros del modelo: q, alpha, beta, gamma, delta, largo N (sitios 0..N)
    y signo eps del hopping.
    """
    q: float
    alpha: float
    beta: float
    gamma: float
    delta: float
    N: int
    eps: int = 1

    def __post_init__(self):
        values = (self.q, self.alpha, self.beta, self.gamma, self.delta)
        if not all(math.isfinite(float(v)) for v in values):
            raise DomainError("Los parámetros deben ser finitos")
        if self.q == 0 or abs(self.q) == 1:
            raise DomainError(f"q debe cumplir q != 0 y |q| != 1 (q={self.q})")
        if self.alpha == 0:
            raise DomainError("alpha no puede ser cero")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N debe ser un entero >= 1 (N={self.N})")
        if self.eps not in (1, -1):
            raise DomainError(f"eps debe ser +1 o -1 (eps={self.eps})")
        object.__setattr__(self, 'N', int(self.N))
        object.__setattr__(self, 'eps', int(self.eps))
        for name in ('q', 'alpha', 'beta', 'gamma', 'delta'):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def truncated(cls, q, beta, gamma, delta, N, eps=1):
        """Parámetros con la truncación estándar alpha = q^(-N-1)."""
        return cls(q=q, alpha=float(q) ** (-N - 1), beta=beta, gamma=gamma,
                   delta=delta, N=N, eps=eps)

    def rescaled(self, kappa):
        """Transformación gamma -> gamma/kappa, delta -> delta*kappa (deja invariante el espectro)."""
        if kappa == 0:
            raise DomainError("kappa no puede ser cero")
        return replace(self, gamma=self.gamma / kappa, delta=self.delta * kappa)

    def with_eps(self, eps):
        return replace(self, eps=eps)

    @property
    def abgd(self):
        """Producto alpha*beta*gamma*delta."""
        return self.alpha * self.beta * self.gamma * self.delta

    @property
    def regime(self):
        """'generic', 'beta0', 'delta0' o 'both' según ceros exactos de beta y delta."""
        if self.beta == 0 and self.delta == 0:
            return 'both'
        if self.beta == 0:
            return 'beta0'
        if self.delta == 0:
            return 'delta0'
        return 'generic'


@dataclass(frozen=True)
class RacahCoeffs:
    """A_n para n=0..N y C_n para n=0..N+1 (C_0 = 0)."""
    A: np.ndarray
    C: np.ndarray


def _snap(values, scale):
    values = np.asarray(values, dtype=float)
    return np.where(np.abs(values) <= SNAP_FACTOR * EPS * np.abs(scale), 0.0, values)


def _check_denominator(den, scale, n, label):
    tiny = config.POLE_FACTOR * EPS * np.maximum(np.abs(scale), 1.0)
    bad = np.nonzero(np.abs(den) <= tiny)[0]
    if len(bad):
        raise SingularParameterError(int(n[bad[0]]), label)


def qpochhammer(a, q, n):
    """
    Símbolo de q-Pochhammer (a; q)_n = prod_{j<n} (1 - a q^j) en forma logarítmica.

    Args:
        a (float): Argumento
        q (float): Base
        n (int): Número de factores (>= 0)

    Returns:
        LogProduct: Producto con signo
    """
    if n < 0:
        raise DomainError(f"n debe ser >= 0 (n={n})")
    if n == 0:
        return LogProduct(0.0, 1)
    j = np.arange(n)
    return log_product(1.0 - a * float(q) ** j)


def racah_coeffs(p):
    """
    Coeficientes de recurrencia A_n, C_n de los polinomios q-Racah.

    Args:
        p (ChainParams): Parámetros del modelo

    Returns:
        RacahCoeffs: A de largo N+1, C de largo N+2 con C[0] = 0

    Raises:
        SingularParameterError: Si algún denominador 1 - alpha*beta*q^m se anula
    """
    q, a, b, g, d, N = p.q, p.alpha, p.beta, p.gamma, p.delta, p.N
    ab = a * b

    n = np.arange(N + 1)
    qn1 = q ** (n + 1.0)
    den1 = 1.0 - ab * q ** (2.0 * n + 1)
    den2 = 1.0 - ab * q ** (2.0 * n + 2)
    _check_denominator(den1, ab * q ** (2.0 * n + 1), n, '1 - alpha*beta*q^(2n+1)')
    _check_denominator(den2, ab * q ** (2.0 * n + 2), n, '1 - alpha*beta*q^(2n+2)')
    num = (
        _snap(a * qn1 - 1.0, a * qn1)
        * _snap(g * qn1 - 1.0, g * qn1)
        * _snap(ab * qn1 - 1.0, ab * qn1)
        * _snap(b * d * qn1 - 1.0, b * d * qn1)
    )
    A = num / (den1 * den2)

    m = np.arange(1, N + 2)
    qm = q ** m.astype(float)
    cden1 = 1.0 - ab * q ** (2.0 * m)
    cden2 = 1.0 - ab * q ** (2.0 * m + 1)
    _check_denominator(cden1, ab * q ** (2.0 * m), m, '1 - alpha*beta*q^(2n)')
    _check_denominator(cden2, ab * q ** (2.0 * m + 1), m, '1 - alpha*beta*q^(2n+1)')
    cnum = (
        _snap(b * qm - 1.0, b * qm)
        * _snap(a * qm - d, np.maximum(np.abs(a * qm), abs(d)))
        * _snap(ab * qm - g, np.maximum(np.abs(ab * qm), abs(g)))
        * (q ** (m + 1.0) - q)
    )
    C = np.zeros(N + 2)
    C[1:] = cnum / (cden1 * cden2)
    return RacahCoeffs(A, C)


def omega(p, k):
    """Autovalor omega_k = q^-k + gamma*delta*q^(k+1) (acepta arrays de k)."""
    k = np.asarray(k, dtype=float)
    return p.q ** (-k) + p.gamma * p.delta * p.q ** (k + 1)


def lambda_pos(p, n):
    """Autovalor lambda_n = q^-n + alpha*beta*q^(n+1) de A* en la base de posiciones."""
    n = np.asarray(n, dtype=float)
    return p.q ** (-n) + p.alpha * p.beta * p.q ** (n + 1)


# Dígitos de guarda sobre la cota de amplificación de la recurrencia
GUARD_DIGITS = 30


def exact_params(p):
    """
    Parámetros como mpf, con la truncación (alpha, gamma, alpha*beta o beta*delta
    igual a q^(-N-1)) impuesta exactamente en la precisión de trabajo.
    """
    q = mpmath.mpf(p.q)
    a, b, g, d = (mpmath.mpf(v) for v in (p.alpha, p.beta, p.gamma, p.delta))
    target = q ** (-(p.N + 1))
    qn = p.q ** (p.N + 1)

    def hits(value):
        return value != 0 and abs(value * qn - 1.0) <= SNAP_FACTOR * EPS * abs(value * qn)

    if hits(p.alpha):
        a = target
    if hits(p.gamma):
        g = target
    if hits(p.alpha * p.beta):
        b = target / a
    if hits(p.beta * p.delta):
        d = target / b
    return q, a, b, g, d


def _exact_coeffs(p):
    """A_n (n < N) y C_n (n <= N) en la precisión de trabajo vigente."""
    q, a, b, g, d = exact_params(p)
    ab = a * b
    A, C = [], [mpmath.mpf(0)]
    for n in range(p.N):
        qn1 = q ** (n + 1)
        num = (1 - a * qn1) * (1 - ab * qn1) * (1 - b * d * qn1) * (1 - g * qn1)
        A.append(num / ((1 - ab * q ** (2 * n + 1)) * (1 - ab * q ** (2 * n + 2))))
    for n in range(1, p.N + 1):
        qn = q ** n
        num = q * (1 - qn) * (1 - b * qn) * (g - ab * qn) * (d - a * qn)
        C.append(num / ((1 - ab * q ** (2 * n)) * (1 - ab * q ** (2 * n + 1))))
    return q, g * d, A, C


def _working_digits(x, A, C, N):
    """Cota (en dígitos) de la amplificación de errores de la recurrencia hacia adelante."""
    A = np.abs(np.asarray(A[:N], dtype=float))
    C = np.abs(np.asarray(C[:N], dtype=float))
    growth = np.log10(1.0 + (abs(x) + A + 2.0 * C) / A)
    return GUARD_DIGITS + 2 * int(math.ceil(growth.sum()))


def racah_row_scaled(p, k, coeffs=None):
    """
    R_n(omega_k), n = 0..N, como (mantisa, log-escala) con R_n = mantisa * exp(log-escala).

    La recurrencia de tres términos se recorre hacia adelante desde R_0 = 1 en
    aritmética mpmath. La precisión de trabajo cubre dos veces la cota de
    amplificación de errores, de modo que la solución dominante que crece en las
    zonas prohibidas no contamina a la buscada.

    Args:
        p (ChainParams): Parámetros del modelo
        k (int): Índice del autovalor (0 <= k <= N)
        coeffs (RacahCoeffs, optional): Coeficientes ya calculados

    Returns:
        tuple: (np.ndarray mantisas, np.ndarray log-escalas)

    Raises:
        DegenerateRecurrenceError: Si A_n = 0 para algún n < N
    """
    if not 0 <= k <= p.N:
        raise DomainError(f"k fuera de rango: {k}")
    c = coeffs if coeffs is not None else racah_coeffs(p)
    N = p.N
    zero = np.nonzero(c.A[:N] == 0.0)[0]
    if len(zero):
        raise DegenerateRecurrenceError(int(zero[0]))
    x_float = float(omega(p, k)) - 1.0 - p.gamma * p.delta * p.q
    dps = _working_digits(x_float, c.A, c.C, N)

    mant = np.zeros(N + 1)
    logs = np.zeros(N + 1)
    with mpmath.workdps(dps):
        q, gd, A, C = _exact_coeffs(p)
        x = q ** (-k) - 1 + gd * (q ** (k + 1) - q)
        R = [mpmath.mpf(1)]
        if N >= 1:
            R.append((x + A[0]) / A[0])
        for n in range(1, N):
            R.append(((x + A[n] + C[n]) * R[n] - C[n] * R[n - 1]) / A[n])
        for n, value in enumerate(R):
            if value != 0:
                mant[n] = float(mpmath.sign(value))
                logs[n] = float(mpmath.log(abs(value)))
    return mant, logs


def racah_poly_row(p, k, coeffs=None):
    """
    Polinomios q-Racah R_n(omega_k) para n = 0..N evaluados por la recurrencia de tres términos.

    Args:
        p (ChainParams): Parámetros del modelo
        k (int): Índice del autovalor
        coeffs (RacahCoeffs, optional): Coeficientes ya calculados

    Returns:
        np.ndarray: Valores R_0..R_N (R_0 = 1)
    """
    mant, logs = racah_row_scaled(p, k, coeffs)
    with np.errstate(over='ignore'):
        return mant * np.exp(logs)


def _beta_regular_factor(p, k):
    """
    (beta^-1 gamma q;q)_N / ((beta^-1;q)_N (beta^-1 gamma q;q)_k (alpha beta q)^k)
    reescrito sin potencias negativas de beta.
    """
    q, N = p.q, p.N
    j_top = np.arange(k, N)
    top = log_product(p.beta - p.gamma * q ** (j_top + 1.0)) if k < N else LogProduct(0.0, 1)
    bottom = log_product(p.beta - q ** np.arange(N, dtype=float))
    alpha_k = log_product(np.full(k, p.alpha * q)) if k > 0 else LogProduct(0.0, 1)
    return top / (bottom * alpha_k)


def weight(p, k):
    """
    Peso de normalización W_k = phi_0(omega_k)^2.

    La fórmula cerrada contiene beta^-1; para beta = 0 se usa la forma reescrita,
    y para delta = 0 se omiten los símbolos cuyo argumento lleva delta (valen 1).

    Args:
        p (ChainParams): Parámetros del modelo
        k (int): Índice del autovalor

    Returns:
        LogProduct: W_k en forma logarítmica
    """
    if not 0 <= k <= p.N:
        raise DomainError(f"k fuera de rango: {k}")
    q, a, b, g, d, N = p.q, p.alpha, p.beta, p.gamma, p.delta, p.N
    regime = p.regime
    one = LogProduct(0.0, 1)

    num = qpochhammer(a * q, q, k) * qpochhammer(g * q, q, k)
    den = qpochhammer(q, q, k)

    if regime in ('generic', 'delta0'):
        num = num * qpochhammer(g * q / b, q, N)
        den = den * qpochhammer(1.0 / b, q, N) * qpochhammer(g * q / b, q, k)
        den = den * (log_product(np.full(k, a * b * q)) if k > 0 else one)
    else:
        num = num * _beta_regular_factor(p, k)

    if regime in ('generic', 'beta0'):
        gd = g * d
        num = num * qpochhammer(d * q, q, N) * qpochhammer(gd * q, q, k)
        num = num * qpochhammer(b * d * q, q, k) * log_product([1.0 - gd * q ** (2 * k + 1)])
        den = den * qpochhammer(gd * q * q, q, N) * qpochhammer(gd * q / a, q, k)
        den = den * qpochhammer(d * q, q, k) * log_product([1.0 - gd * q])

    return num / den


def weights(p):
    """Todos los pesos W_0..W_N como floats."""
    return np.array([weight(p, k).value for k in range(p.N + 1)])


def difference_coeffs(p):
    """
    Coeficientes (Jbar, mubar) de la acción tridiagonal de A* en la base de energía:
    A*|w_k> = Jbar_k |w_(k+1)> - mubar_k |w_k> + Jbar_(k-1) |w_(k-1)>.

    Args:
        p (ChainParams): Parámetros del modelo

    Returns:
        tuple: (np.ndarray Jbar de largo N, np.ndarray mubar de largo N+1)

    Raises:
        ParameterDomainError: Si el argumento de la raíz es negativo en algún k
    """
    q, a, b, g, d, N = p.q, p.alpha, p.beta, p.gamma, p.delta, p.N
    gd = g * d

    k = np.arange(N + 1, dtype=float)
    qk1 = q ** (k + 1)
    upper = ((1 - a * qk1) * (1 - b * d * qk1) * (1 - g * qk1) * (1 - gd * qk1)
             / ((1 - gd * q ** (2 * k + 1)) * (1 - gd * q ** (2 * k + 2))))

    kk = k[:N]
    qkk = q ** (kk + 1)
    lower = ((1 - qkk) * (1 - gd * qkk / a) * a * q * (b - g * qkk) * (1 - d * qkk)
             / ((1 - gd * q ** (2 * kk + 2)) * (1 - gd * q ** (2 * kk + 3))))
    squared = upper[:N] * lower
    negative = np.nonzero(squared < 0)[0]
    if len(negative):
        i = int(negative[0])
        raise ParameterDomainError(i, float(squared[i]))
    jbar = np.sqrt(squared)

    qk = q ** k
    with np.errstate(divide='ignore', invalid='ignore'):
        down = (q * (1 - qk) * (1 - d * qk) * (b - g * qk) * (a - gd * qk)
                / ((1 - gd * q ** (2 * k)) * (1 - gd * q ** (2 * k + 1))))
    down[0] = 0.0
    mubar = upper + down - 1.0 - a * b * q
    return jbar, mubar


if __name__ == "__main__":
    # Demo con los parámetros de la tabla de referencia
    params = ChainParams.truncated(q=0.8, beta=0.0, gamma=0.5, delta=0.0, N=49)
    print("=" * 70)
    print("DEMO DE LA CAPA q-RACAH")
    print("=" * 70)
    print(f"Régimen: {params.regime}")
    coeffs = racah_coeffs(params)
    print(f"A_0 = {coeffs.A[0]:.6g}, A_N = {coeffs.A[-1]:.6g}, C_1 = {coeffs.C[1]:.6g}")
    w = weights(params)
    print(f"Suma de pesos: {w.sum():.15f}")
    print(f"omega_24 = {float(omega(params, 24)):.6g}")
