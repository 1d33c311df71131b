"""
Núcleos numéricos del proyecto.
Solver QL implícito para matrices tridiagonales simétricas, tridiagonalización
de Householder, raíces de polinomios por matriz compañera balanceada,
polinomios simétricos elementales y completos y productos en espacio logarítmico.
"""
from dataclasses import dataclass
import math
import sys
import os

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import matrix_balance

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import ConvergenceError, DomainError, DimensionError

EPS = np.finfo(float).eps
NORM_FLOOR = 1e-300


def _frozen_array(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SymTridiag:
    """Matriz simétrica tridiagonal: diagonal de largo n y subdiagonal de largo n-1."""
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = _frozen_array(np.atleast_1d(np.asarray(self.diag, dtype=float)))
        offdiag = _frozen_array(np.asarray(self.offdiag, dtype=float).ravel())
        if diag.ndim != 1 or len(diag) < 1:
            raise DimensionError("La diagonal debe ser un vector no vacío")
        if len(offdiag) != len(diag) - 1:
            raise DimensionError(
                f"Subdiagonal de largo {len(offdiag)} para diagonal de largo {len(diag)}"
            )
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(offdiag))):
            raise DomainError("Entradas no finitas en la matriz tridiagonal")
        object.__setattr__(self, 'diag', diag)
        object.__setattr__(self, 'offdiag', offdiag)

    @property
    def n(self):
        return len(self.diag)

    def to_dense(self):
        """Devuelve la matriz densa equivalente (np.ndarray n x n)."""
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    @classmethod
    def from_dense(cls, m):
        """Extrae la parte tridiagonal de una matriz cuadrada, simetrizando la subdiagonal."""
        m = as_matrix(m)
        off = 0.5 * (np.diag(m, 1) + np.diag(m, -1))
        return cls(np.diag(m).copy(), off)


@dataclass(frozen=True)
class DenseSym:
    """Matriz simétrica densa; se simetriza al construirla."""
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"Se esperaba una matriz cuadrada, se recibió {m.shape}")
        object.__setattr__(self, 'entries', _frozen_array(0.5 * (m + m.T)))

    @property
    def n(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenDecomp:
    """Autovalores ascendentes y autovectores unitarios por columna."""
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class PolyReal:
    """Polinomio real; coeffs[i] es el coeficiente de grado i. Se recortan los ceros finales."""
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.trim_zeros(np.atleast_1d(np.array(self.coeffs, dtype=float)), 'b')
        if len(c) == 0:
            c = np.zeros(1)
        object.__setattr__(self, 'coeffs', _frozen_array(c))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not np.any(self.coeffs)

    def __call__(self, x):
        return P.polyval(x, self.coeffs)

    def derivative(self):
        return PolyReal(P.polyder(self.coeffs))


@dataclass(frozen=True)
class LogProduct:
    """Producto representado como signo y log de la magnitud."""
    log_magnitude: float
    sign: int

    @property
    def value(self):
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other):
        if self.sign == 0 or other.sign == 0:
            return LogProduct(-math.inf, 0)
        return LogProduct(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    def __truediv__(self, other):
        if other.sign == 0:
            raise DomainError("División de un producto por cero")
        if self.sign == 0:
            return self
        return LogProduct(self.log_magnitude - other.log_magnitude, self.sign * other.sign)

    def sqrt(self):
        """Raíz cuadrada de un producto no negativo."""
        if self.sign < 0:
            raise DomainError("Raíz cuadrada de un producto negativo")
        return LogProduct(0.5 * self.log_magnitude, self.sign)


def as_matrix(m):
    """
    Convierte SymTridiag, DenseSym o un array a np.ndarray cuadrado.

    Args:
        m: Matriz en cualquiera de las representaciones del módulo

    Returns:
        np.ndarray: Matriz densa
    """
    if isinstance(m, SymTridiag):
        return m.to_dense()
    if isinstance(m, DenseSym):
        return np.array(m.entries)
    arr = np.asarray(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"Se esperaba una matriz cuadrada, se recibió {arr.shape}")
    return arr


def _fix_signs(vectors):
    """Componente de mayor magnitud positiva en cada columna."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _check_residuals(m, values, vectors, tol, iterations):
    scale = np.linalg.norm(m, 'fro')
    limit = max(tol, 10 * m.shape[0] * EPS) * max(scale, NORM_FLOOR)
    res = np.linalg.norm(m @ vectors - vectors * values, axis=0)
    bad = np.nonzero(res > limit)[0]
    if len(bad):
        raise ConvergenceError(int(bad[0]), iterations)


def _tqli(d, e, z, max_iter):
    """
    QL implícito con desplazamientos de Wilkinson sobre (d, e), acumulando rotaciones en z.
    e[i] acopla i con i+1 y e[n-1] = 0. Modifica d, e, z en el lugar.

    Returns:
        int: Iteraciones totales
    """
    n = len(d)
    total = 0
    for l in range(n):
        it = 0
        while True:
            mm = l
            while mm < n - 1:
                dd = abs(d[mm]) + abs(d[mm + 1])
                if abs(e[mm]) <= EPS * dd:
                    break
                mm += 1
            if mm == l:
                break
            if it == max_iter:
                raise ConvergenceError(l, it)
            it += 1
            total += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[mm] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = mm - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[mm] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[mm] = 0.0
    return total


def eig_sym_tridiag(m, tol=None, max_iter=None):
    """
    Autodescomposición de una matriz simétrica tridiagonal por QL implícito.

    Args:
        m (SymTridiag): Matriz a diagonalizar
        tol (float, optional): Tolerancia relativa del residuo ||Mv - lv|| / ||M||_F
        max_iter (int, optional): Máximo de iteraciones por autovalor

    Returns:
        EigenDecomp: Autovalores ascendentes y autovectores con signo canónico

    Raises:
        ConvergenceError: Si algún autovalor no converge
    """
    tol = config.EIG_TOL if tol is None else tol
    max_iter = config.MAX_QL_ITER if max_iter is None else max_iter
    if tol <= 0:
        raise DomainError("La tolerancia debe ser positiva")

    n = m.n
    d = np.array(m.diag, dtype=float)
    e = np.zeros(n)
    e[:n - 1] = m.offdiag
    z = np.eye(n)
    iterations = _tqli(d, e, z, max_iter)

    order = np.argsort(d, kind='stable')
    values = d[order]
    vectors = z[:, order]
    vectors /= np.linalg.norm(vectors, axis=0)
    vectors = _fix_signs(vectors)

    _check_residuals(m.to_dense(), values, vectors, tol, iterations)
    return EigenDecomp(_frozen_array(values), _frozen_array(vectors))


def tridiagonalize(m):
    """
    Reducción de Householder M = Q T Q^T.

    Args:
        m (DenseSym): Matriz simétrica

    Returns:
        tuple: (SymTridiag T, np.ndarray Q ortogonal)
    """
    a = as_matrix(m).astype(float).copy()
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0 or np.linalg.norm(x[1:]) == 0.0:
            continue
        alpha = -math.copysign(xnorm, x[0])
        v = x
        v[0] -= alpha
        v /= np.linalg.norm(v)
        a[k + 1:, k:] -= 2.0 * np.outer(v, v @ a[k + 1:, k:])
        a[:, k + 1:] -= 2.0 * np.outer(a[:, k + 1:] @ v, v)
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v)
    return SymTridiag.from_dense(a), q


def eig_dense_sym(m, tol=None, max_iter=None):
    """
    Autodescomposición de una matriz simétrica densa: Householder y luego QL implícito.

    Args:
        m (DenseSym): Matriz simétrica
        tol (float, optional): Tolerancia relativa del residuo
        max_iter (int, optional): Máximo de iteraciones por autovalor

    Returns:
        EigenDecomp: Autovalores ascendentes y autovectores con signo canónico
    """
    tol = config.EIG_TOL if tol is None else tol
    max_iter = config.MAX_QL_ITER if max_iter is None else max_iter
    dense = as_matrix(m)
    t, q = tridiagonalize(m)
    inner = eig_sym_tridiag(t, tol=tol, max_iter=max_iter)
    vectors = q @ inner.vectors
    vectors /= np.linalg.norm(vectors, axis=0)
    vectors = _fix_signs(vectors)
    _check_residuals(dense, inner.values, vectors, tol, max_iter)
    return EigenDecomp(inner.values, _frozen_array(vectors))


def poly_roots(p, polish=True):
    """
    Raíces de un polinomio real vía autovalores de la matriz compañera balanceada,
    con un paso de Newton por raíz que sólo se acepta si reduce |p|.

    Args:
        p (PolyReal): Polinomio de grado >= 1
        polish (bool): Aplicar el paso de Newton

    Returns:
        np.ndarray: `degree` raíces complejas ordenadas por (parte real, parte imaginaria)

    Raises:
        DomainError: Polinomio nulo o constante
    """
    if p.is_zero:
        raise DomainError("El polinomio nulo no tiene raíces aisladas")
    if p.degree < 1:
        raise DomainError("Un polinomio constante no tiene raíces")

    companion = P.polycompanion(p.coeffs)
    balanced, _ = matrix_balance(companion, permute=False)
    roots = np.linalg.eigvals(balanced).astype(complex)

    if polish:
        dp = p.derivative()
        for i, r in enumerate(roots):
            fr = p(r)
            dfr = dp(r)
            if dfr == 0:
                continue
            candidate = r - fr / dfr
            if abs(p(candidate)) < abs(fr):
                roots[i] = candidate

    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def elementary_symmetric(vals):
    """
    Polinomios simétricos elementales [S_0, S_1, ..., S_L] con S_0 = 1,
    actualizando un valor a la vez.

    Args:
        vals (array-like): Valores complejos

    Returns:
        np.ndarray: Coeficientes complejos de largo len(vals) + 1
    """
    vals = np.asarray(vals, dtype=complex).ravel()
    e = np.zeros(len(vals) + 1, dtype=complex)
    e[0] = 1.0
    for v in vals:
        e[1:] = e[1:] + v * e[:-1]
    return e


def complete_homogeneous(vals, k_max):
    """
    Polinomios simétricos completos homogéneos [h_0, h_1, ..., h_kmax] con h_0 = 1.

    Args:
        vals (array-like): Valores complejos
        k_max (int): Grado máximo

    Returns:
        np.ndarray: Coeficientes complejos de largo k_max + 1
    """
    vals = np.asarray(vals, dtype=complex).ravel()
    h = np.zeros(k_max + 1, dtype=complex)
    h[0] = 1.0
    for v in vals:
        # h_k <- h_k + v * h_(k-1), con h_(k-1) ya actualizado
        for k in range(1, k_max + 1):
            h[k] += v * h[k - 1]
    return h


def log_product(factors):
    """
    Producto de factores reales en forma (log|producto|, signo).

    Args:
        factors (array-like): Factores finitos

    Returns:
        LogProduct: Signo 0 si algún factor es cero

    Raises:
        DomainError: Si algún factor no es finito
    """
    f = np.asarray(factors, dtype=float).ravel()
    if not np.all(np.isfinite(f)):
        raise DomainError("Factores no finitos en el producto")
    if np.any(f == 0.0):
        return LogProduct(-math.inf, 0)
    sign = -1 if np.count_nonzero(f < 0) % 2 else 1
    return LogProduct(float(np.sum(np.log(np.abs(f)))), sign)


def commutator_residual(a, b, floor=NORM_FLOOR):
    """
    Residuo normalizado ||ab - ba||_F / (||a||_F ||b||_F + floor).

    Args:
        a: Matriz cuadrada (SymTridiag, DenseSym o array)
        b: Matriz cuadrada del mismo tamaño
        floor (float): Piso del denominador

    Returns:
        float: Residuo relativo

    Raises:
        DimensionError: Si las dimensiones no coinciden
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"Dimensiones incompatibles {a.shape} y {b.shape}")
    num = np.linalg.norm(a @ b - b @ a, 'fro')
    return float(num / (np.linalg.norm(a, 'fro') * np.linalg.norm(b, 'fro') + floor))


if __name__ == "__main__":
    # Demo de los núcleos numéricos
    print("=" * 70)
    print("DEMO DE NÚCLEOS NUMÉRICOS")
    print("=" * 70)

    dec = eig_sym_tridiag(SymTridiag([0.0, 0.0], [1.0]))
    print(f"Autovalores de [[0,1],[1,0]]: {dec.values}")

    roots = poly_roots(PolyReal([-1.0, 0.0, 1.0]))
    print(f"Raíces de U^2 - 1: {roots}")

    print(f"S_r de [2, 3]: {elementary_symmetric([2.0, 3.0]).real}")
    print(f"Producto de [2, 3] en log: {log_product([2.0, 3.0]).value}")
