"""
Ansatz de Bethe algebraico.
Funciones escalares, operadores dinámicos A(u,m) y B(u,m) como matrices,
vectores de Bethe, autovalores Lambda(u) y c(u) y defectos de las ecuaciones de Bethe.
"""
from dataclasses import dataclass
import cmath
import math
import sys
import os

import numpy as np

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import (
    DomainError, PoleError, RegimeError, SingularConfigurationError,
    DegenerateWavefunctionError, ConsistencyError
)
from core.numerics import EPS, NORM_FLOOR, elementary_symmetric, complete_homogeneous, log_product
from core.qkernel import omega, lambda_pos
from bethe.heun import aw_constants, heun_operator
from model.chain import hopping_matrix, astar_matrix

# Punto de prueba por defecto para los defectos E_i(u, ubar) en régimen genérico
DEFAULT_SPECTRAL_POINT = 0.7 + 0.3j


@dataclass(frozen=True)
class BetheState:
    """Raíces u_i, variables U_i = q/u_i^2 + abgd*u_i^2, autovalor Lambda y defectos."""
    u: np.ndarray
    U: np.ndarray
    lam: complex = None
    residuals: np.ndarray = None

    @classmethod
    def from_roots(cls, u, p, lam=None, residuals=None):
        u = np.asarray(u, dtype=complex).ravel()
        U = p.q / u ** 2 + p.abgd * u ** 2
        return cls(u=u, U=U, lam=lam, residuals=residuals)


@dataclass(frozen=True)
class BActionCoeffs:
    """Coeficientes V, X, Y, Z de q^(m+1) B(u,m)|n>, arrays de forma (N+1, len(m))."""
    V: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    m_values: np.ndarray


def _check_distinct(u):
    u2 = np.asarray(u, dtype=complex) ** 2
    for i in range(len(u2)):
        for j in range(i + 1, len(u2)):
            scale = abs(u2[i]) + abs(u2[j])
            if abs(u2[i] - u2[j]) <= config.POLE_FACTOR * EPS * max(scale, NORM_FLOOR):
                raise SingularConfigurationError(i + 1, j + 1)


def _reduced_sides(x, p, region):
    """Lados izquierdo y derecho del sistema reducido en las variables x_i = u_i^2."""
    q, L, K = p.q, region.L, region.K
    a, g, gd = p.alpha, p.gamma, p.gamma * p.delta
    lhs = np.array([np.prod((x[i] - np.delete(x, i) / q) / (x[i] - q * np.delete(x, i)))
                    for i in range(len(x))], dtype=complex)
    rhs = (q ** K * (q - a * x) * (q - g * x) * (q - gd * x)
           / ((q ** (K + L + 2) - x) * (a * g * x - 1.0) * (gd * x * q ** K - q ** L)))
    return lhs, rhs


def reduced_bethe_defects(u, p, region):
    """
    Defectos relativos de las ecuaciones de Bethe reducidas (beta = 0):
    prod_(j != i) (u_i^2 - u_j^2/q) / (u_i^2 - q u_j^2)
        = q^K (q - alpha u_i^2)(q - gamma u_i^2)(q - gamma delta u_i^2)
          / ((q^(K+L+2) - u_i^2)(alpha gamma u_i^2 - 1)(gamma delta u_i^2 q^K - q^L)).

    Args:
        u (array-like): Raíces de Bethe
        p (ChainParams): Parámetros con beta = 0
        region (RegionSpec): Región y modos ocupados

    Returns:
        np.ndarray: (lhs - rhs) / max(|lhs|, |rhs|) por raíz

    Raises:
        SingularConfigurationError: Si u_i^2 = u_j^2 para i != j
    """
    u = np.asarray(u, dtype=complex).ravel()
    _check_distinct(u)
    lhs, rhs = _reduced_sides(u ** 2, p, region)
    return (lhs - rhs) / np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), NORM_FLOOR)


def refine_roots_beta0(u, p, region, max_iter=None):
    """
    Pasos de Newton sobre G_i = log(lhs_i / rhs_i) en x_i = u_i^2, con jacobiano
    analítico. Un paso se acepta sólo si baja el mayor defecto.

    Returns:
        np.ndarray: Raíces refinadas, en la misma rama que las de entrada
    """
    max_iter = config.BETHE_NEWTON_ITER if max_iter is None else max_iter
    u = np.asarray(u, dtype=complex).ravel()
    if len(u) == 0:
        return u
    q, L, K = p.q, region.L, region.K
    a, g, gd = p.alpha, p.gamma, p.gamma * p.delta
    x = u ** 2
    best = float(np.max(np.abs(reduced_bethe_defects(u, p, region))))
    for _ in range(max_iter):
        if best <= EPS:
            break
        lhs, rhs = _reduced_sides(x, p, region)
        G = np.log(lhs / rhs)
        up = 1.0 / (x[:, None] - x[None, :] / q)
        down = 1.0 / (x[:, None] - q * x[None, :])
        np.fill_diagonal(up, 0.0)
        np.fill_diagonal(down, 0.0)
        dlog_rhs = (-a / (q - a * x) - g / (q - g * x) - gd / (q - gd * x)
                    + 1.0 / (q ** (K + L + 2) - x) - a * g / (a * g * x - 1.0)
                    - gd * q ** K / (gd * x * q ** K - q ** L))
        jac = -up / q + q * down
        np.fill_diagonal(jac, np.sum(up - down, axis=1) - dlog_rhs)
        try:
            x_new = x + np.linalg.solve(jac, -G)
        except np.linalg.LinAlgError:
            break
        u_new = np.sqrt(x_new)
        u_new = np.where((u_new * np.conj(u)).real < 0, -u_new, u_new)
        try:
            defect = float(np.max(np.abs(reduced_bethe_defects(u_new, p, region))))
        except SingularConfigurationError:
            break
        if not defect < best:
            break
        x, u, best = x_new, u_new, defect
    return u


class ABAScalars:
    """
    Funciones escalares del ansatz: f1, f2, f, g, w, r, a y la constante tau.

    Cada denominador se controla contra su escala; si cae por debajo de
    POLE_FACTOR * eps se lanza PoleError con el nombre del denominador.
    """

    def __init__(self, p, region, mu0):
        self.p = p
        self.L = region.L
        self.K = region.K
        self.mu0 = float(mu0)
        self.aw = aw_constants(p)
        self.ab = p.alpha * p.beta
        self.gd = p.gamma * p.delta
        self.abgd = p.abgd
        self.lam0 = float(lambda_pos(p, 0))
        self.tau = math.sqrt(p.q / self.abgd) if self.abgd > 0 else None

    def _den(self, name, value, scale):
        if abs(value) <= config.POLE_FACTOR * EPS * max(abs(scale), NORM_FLOOR):
            raise PoleError(name)
        return value

    def _u2(self, u):
        u2 = complex(u) ** 2
        return self._den('u^2', u2, 1.0 if u2 == 0 else abs(u2))

    def f1(self, u, m):
        q, L, ab, abgd, gd = self.p.q, self.L, self.ab, self.abgd, self.gd
        c = self.aw
        u2 = self._u2(u)
        u4 = u2 * u2
        d1 = self._den('alpha*beta*q^(2L+2m+1) - q^(2L)',
                       ab * q ** (2 * L + 2 * m + 1) - q ** (2 * L),
                       abs(ab * q ** (2 * L + 2 * m + 1)) + abs(q ** (2 * L)))
        d2 = self._den('q^2 - abgd*u^4', q * q - abgd * u4, q * q + abs(abgd * u4))
        qq = (q * q - 1.0) ** 2
        t1 = 2.0 * q ** (m + 1) * (q + abgd * u4) / (u2 * d1)
        t2 = -u2 * c.eta * (q + 1.0) * q ** (-2 * L + 2) / (qq * d2)
        t3 = (q + 1.0) / (qq * -d1) * (
            c.eta_star * (gd * u4 * q - q ** (2 * m + 4)) / d2
            - 2.0 * c.xi * q ** (m + 2)
        )
        return t1 + t2 + t3

    def f2(self, u, m):
        q, L, ab, abgd = self.p.q, self.L, self.ab, self.abgd
        c = self.aw
        u2 = self._u2(u)
        t1 = (ab * q ** (2 * L + 2 * m + 3) + q ** (2 * L)) * (q + abgd * u2 * u2) / (u2 * q ** (m + 2 * L + 1))
        t2 = ((c.eta_star * q ** (2 * L + m + 1) + ab * c.xi * q ** (2 * L + 2 * m + 3) + c.xi * q ** (2 * L))
              / (q ** (m + 2 * L) * (q - 1.0) ** 2 * (q + 1.0)))
        return t1 + t2

    def f(self, u, v):
        q, abgd = self.p.q, self.abgd
        u2, v2 = complex(u) ** 2, complex(v) ** 2
        d1 = self._den('u^2 - v^2', u2 - v2, abs(u2) + abs(v2))
        d2 = self._den('abgd*u^2*v^2 - q', abgd * u2 * v2 - q, abs(abgd * u2 * v2) + abs(q))
        return (u2 - q * v2) * (abgd * u2 * v2 - q * q) / (q * d1 * d2)

    def g(self, u, v, m):
        q, L, ab, abgd = self.p.q, self.L, self.ab, self.abgd
        u2, v2 = complex(u) ** 2, complex(v) ** 2
        d1 = self._den('u^2 - v^2', u2 - v2, abs(u2) + abs(v2))
        d2 = self._den('alpha*beta*q^(2L+2m+3) - q^(2L)',
                       ab * q ** (2 * L + 2 * m + 3) - q ** (2 * L),
                       abs(ab * q ** (2 * L + 2 * m + 3)) + abs(q ** (2 * L)))
        d3 = self._den('q - abgd*v^4', q - abgd * v2 * v2, abs(q) + abs(abgd * v2 * v2))
        num = (q - 1.0) * (q * q - abgd * v2 * v2) * (ab * v2 * q ** (2 * L + 2 * m + 3) - u2 * q ** (2 * L))
        return num / (q * d1 * d2 * d3)

    def w(self, u, v, m):
        q, L, ab, abgd, gd = self.p.q, self.L, self.ab, self.abgd, self.gd
        u2, v2 = complex(u) ** 2, complex(v) ** 2
        d1 = self._den('q^(2L) - alpha*beta*q^(2L+2m+3)',
                       q ** (2 * L) - ab * q ** (2 * L + 2 * m + 3),
                       abs(ab * q ** (2 * L + 2 * m + 3)) + abs(q ** (2 * L)))
        d2 = self._den('q - abgd*v^4', q - abgd * v2 * v2, abs(q) + abs(abgd * v2 * v2))
        d3 = self._den('q - abgd*u^2*v^2', q - abgd * u2 * v2, abs(q) + abs(abgd * u2 * v2))
        num = ab * (q - 1.0) * (abgd * v2 * v2 - 1.0) * (gd * u2 * v2 * q ** (2 * L) - q ** (2 * (L + m + 2)))
        return num / (d1 * d2 * d3)

    def r(self, u):
        q, L, K, ab, abgd, gd = self.p.q, self.L, self.K, self.ab, self.abgd, self.gd
        u2 = complex(u) ** 2
        u4 = u2 * u2
        d = self._den('abgd*u^4 - q', abgd * u4 - q, abs(abgd * u4) + abs(q))
        inner = ab * ab * gd * u4 * q ** (2 * L) + 1.0 - (gd * q ** (K + 1) + q ** (-K - 1)) * ab * u2 * q ** L
        return q ** L * (q + 1.0) / d * inner

    def a(self, u):
        q, L, ab, gd = self.p.q, self.L, self.ab, self.gd
        mu0, lam0 = self.mu0, self.lam0
        u2 = self._u2(u)
        d = self._den('1 - alpha*beta*q', 1.0 - ab * q, 1.0 + abs(ab * q))
        inner = (2.0 * mu0 * lam0 * q / (q + 1.0) - mu0 * (ab * q * q + 1.0)
                 + q * q * lam0 / u2 + gd * u2 * lam0)
        return q ** (-2 * L) / d * inner + self.f1(u, 0)

    def scalar(self, kind, *args):
        """
        Evalúa una función escalar por nombre.

        Args:
            kind (str): 'f1', 'f2', 'f', 'g', 'w', 'r' o 'a'
            *args: Argumentos de la función

        Returns:
            complex: Valor de la función
        """
        functions = {
            'f1': self.f1, 'f2': self.f2, 'f': self.f, 'g': self.g,
            'w': self.w, 'r': self.r, 'a': self.a,
        }
        if kind not in functions:
            raise DomainError(f"Función escalar desconocida: {kind}")
        return complex(functions[kind](*args))


class BetheAnsatz:
    """
    Operadores dinámicos y vectores de Bethe para una cadena y una región dadas.

    Args:
        model (ChainModel): Modelo construido
        region (RegionSpec): Región y modos ocupados
    """

    def __init__(self, model, region):
        region.check(model.params.N)
        self.model = model
        self.p = model.params
        self.region = region
        self.L = region.L
        self.K = region.K
        self.scalars = ABAScalars(self.p, region, model.mu[0])
        self.tau = self.scalars.tau

        self.A = hopping_matrix(model).to_dense()
        self.As = astar_matrix(self.p)
        self.anti = self.A @ self.As + self.As @ self.A
        self.comm = self.A @ self.As - self.As @ self.A
        self.eye = np.eye(self.p.N + 1)
        self.heun = heun_operator(self.A, self.As, self.p, region)

    # Operadores dinámicos

    def dyn_A(self, u, m):
        """Matriz del operador dinámico A(u, m)."""
        q, L, ab, gd = self.p.q, self.L, self.scalars.ab, self.scalars.gd
        u2 = self.scalars._u2(u)
        den = self.scalars._den('alpha*beta*q^(2m+1) - 1', ab * q ** (2 * m + 1) - 1.0,
                                1.0 + abs(ab * q ** (2 * m + 1)))
        body = (q ** (m + 1) * self.anti / (q + 1.0)
                - (ab * q ** (2 * m + 2) + 1.0) * self.A
                - (q ** (2 * m + 2) + gd * u2 * u2) / u2 * self.As)
        return q ** (-2 * L) / den * body + self.scalars.f1(u, m) * self.eye

    def dyn_B(self, u, m):
        """Matriz del operador dinámico B(u, m)."""
        q, ab, abgd = self.p.q, self.scalars.ab, self.scalars.abgd
        u2 = self.scalars._u2(u)
        return ((ab * q ** (m + 2) + q ** (-m - 1)) / (2.0 * (q + 1.0)) * self.anti
                - (q ** (-m - 1) - ab * q ** (m + 2)) / (2.0 * (1.0 - q)) * self.comm
                - ab * (q + 1.0) * self.A
                - (q + abgd * u2 * u2) / u2 * self.As
                + self.scalars.f2(u, m) * self.eye)

    def b_action_coeffs(self, m_values):
        """
        Coeficientes de la acción tridiagonal
        q^(m+1) B(u,m)|n> = V|n+1> + (X + Y U)|n> + Z|n-1>.

        Args:
            m_values (array-like): Valores de m

        Returns:
            BActionCoeffs: Arrays de forma (N+1, len(m_values))
        """
        p = self.p
        q, L, N, ab = p.q, self.L, p.N, self.scalars.ab
        c = self.scalars.aw
        m = np.asarray(m_values, dtype=float).reshape(1, -1)
        n = np.arange(N + 1, dtype=float).reshape(-1, 1)
        lam = lambda_pos(p, n)
        mu = self.model.mu.reshape(-1, 1)
        J_up = np.append(self.model.J, 0.0).reshape(-1, 1)
        J_down = np.insert(self.model.J, 0, 0.0).reshape(-1, 1)

        V = J_up * (q ** (-n - 1) - ab * q ** (m + 2) - ab * q ** (m + 1) + ab * ab * q ** (2 * m + n + 4))
        const = ((c.eta_star * q ** (2 * L + m + 1) + ab * c.xi * q ** (2 * L + 2 * m + 3) + c.xi * q ** (2 * L))
                 / ((q - 1.0) ** 2 * (q + 1.0) * q ** (2 * L - 1)))
        X = (-mu * lam * (ab * q ** (2 * m + 3) + 1.0) / (q + 1.0)
             + ab * (q + 1.0) * q ** (m + 1) * mu + const)
        Y = -q ** (m + 1) * lam + (ab * q ** (2 * L + 2 * m + 3) + q ** (2 * L)) / q ** (2 * L)
        Z = J_down * ab * (q ** (2 * m + 3 - n) + q ** n - q ** (m + 2) - q ** (m + 1))
        shape = (N + 1, m.shape[1])
        return BActionCoeffs(
            V=np.broadcast_to(V, shape).copy(), X=np.broadcast_to(X, shape).copy(),
            Y=np.broadcast_to(Y, shape).copy(), Z=np.broadcast_to(Z, shape).copy(),
            m_values=m.ravel(),
        )

    def b_action_residual(self, u, m):
        """Residuo relativo entre q^(m+1) B(u,m) y la tridiagonal armada con V, X, Y, Z."""
        coeffs = self.b_action_coeffs([m])
        U = self.p.q / complex(u) ** 2 + self.scalars.abgd * complex(u) ** 2
        N = self.p.N
        built = np.diag(coeffs.X[:, 0] + coeffs.Y[:, 0] * U).astype(complex)
        built += np.diag(coeffs.V[:N, 0], -1) + np.diag(coeffs.Z[1:, 0], 1)
        direct = self.p.q ** (m + 1) * self.dyn_B(u, m)
        return float(np.linalg.norm(direct - built) / max(np.linalg.norm(direct), NORM_FLOOR))

    # Relaciones de intercambio

    def verify_exchange(self, u, v, m):
        """
        Residuos de B(u,m+1)B(v,m) = B(v,m+1)B(u,m) y de la relación A-B.

        Args:
            u (complex): Parámetro espectral
            v (complex): Parámetro espectral
            m (int): Paso dinámico

        Returns:
            tuple: (res1, res2); res2 es None si tau no está definido
        """
        left = self.dyn_B(u, m + 1) @ self.dyn_B(v, m)
        right = self.dyn_B(v, m + 1) @ self.dyn_B(u, m)
        res1 = np.linalg.norm(left - right) / max(np.linalg.norm(left) + np.linalg.norm(right), NORM_FLOOR)

        if self.tau is None:
            return float(res1), None

        s = self.scalars
        lhs = self.dyn_A(u, m + 1) @ self.dyn_B(v, m)
        terms = [
            s.f(u, v) * self.dyn_B(v, m) @ self.dyn_A(u, m),
            s.g(u, v, m) * self.dyn_B(u, m) @ self.dyn_A(v, m),
            s.w(u, v, m) * self.dyn_B(u, m) @ self.dyn_A(self.tau / v, m),
        ]
        rhs = sum(terms)
        scale = max(np.linalg.norm(lhs), np.linalg.norm(rhs), NORM_FLOOR)
        res2 = np.linalg.norm(lhs - rhs) / scale
        return float(res1), float(res2)

    def heun_from_dynA(self, u):
        """
        Residuo relativo de T = r(u)A(u,L) + r(tau/u)A(tau/u,L) - (r(u)f1(u,L) + r(tau/u)f1(tau/u,L)) I.

        Returns:
            float o None: None si tau no está definido
        """
        if self.tau is None:
            return None
        s = self.scalars
        L = self.L
        v = self.tau / complex(u)
        built = (s.r(u) * self.dyn_A(u, L) + s.r(v) * self.dyn_A(v, L)
                 - (s.r(u) * s.f1(u, L) + s.r(v) * s.f1(v, L)) * self.eye)
        t = self.heun.T.entries
        return float(np.linalg.norm(built - t) / max(np.linalg.norm(t), NORM_FLOOR))

    # Vectores y autovalores

    def make_state(self, u, u_eval=None):
        """Empaqueta raíces en un BetheState con Lambda (forma eigen2) y defectos."""
        state = BetheState.from_roots(u, self.p)
        lam = self.lambda_eval(state, form='eigen2')
        residuals = self.bethe_residuals(state, u_eval) if len(state.u) else np.zeros(0, dtype=complex)
        return BetheState(u=state.u, U=state.U, lam=lam, residuals=residuals)

    def bethe_vector(self, state):
        """
        |u> = B(u_1, L-1) B(u_2, L-2) ... B(u_L, 0) |0>, sin normalizar.

        Returns:
            np.ndarray: Vector complejo de largo N+1
        """
        u = np.asarray(state.u if isinstance(state, BetheState) else state, dtype=complex)
        L = len(u)
        vec = np.zeros(self.p.N + 1, dtype=complex)
        vec[0] = 1.0
        for i in range(L, 0, -1):
            vec = self.dyn_B(u[i - 1], L - i) @ vec
        return vec

    def lambda_eval(self, state, u=None, form='eigen2'):
        """
        Autovalor Lambda(u) de T.

        Args:
            state (BetheState): Estado de Bethe
            u (complex, optional): Parámetro espectral (sólo para 'eigen1')
            form (str): 'eigen1' (dependiente de u, requiere tau) o 'eigen2'

        Returns:
            complex: Lambda
        """
        p = self.p
        q, ab = p.q, self.scalars.ab
        if form == 'eigen2':
            base = -float(omega(p, self.K) + omega(p, self.K + 1)) * float(lambda_pos(p, self.L))
            # Con L = 0 el término constante es <0|T|0>
            base += self.scalars.mu0 * (q - 1.0) * (ab * q * q - 1.0) / q
            return complex(base - (q * q - 1.0) ** 2 / (q * (q + 1.0)) * np.sum(state.U))
        if form != 'eigen1':
            raise DomainError(f"Forma desconocida: {form}")
        if self.tau is None:
            raise RegimeError("La forma eigen1 requiere alpha*beta*gamma*delta > 0")
        s = self.scalars
        u = DEFAULT_SPECTRAL_POINT if u is None else complex(u)
        v = self.tau / u
        prod_u = np.prod([s.f(u, ui) for ui in state.u]) if len(state.u) else 1.0
        prod_v = np.prod([s.f(v, ui) for ui in state.u]) if len(state.u) else 1.0
        return complex(s.r(u) * s.a(u) * prod_u + s.r(v) * s.a(v) * prod_v
                       - (s.r(u) * s.f1(u, self.L) + s.r(v) * s.f1(v, self.L)))

    def bethe_residuals(self, state, u_eval=None):
        """
        Defectos relativos de las ecuaciones de Bethe.

        Con beta = 0 se usa el sistema reducido en forma de productos; en el caso
        genérico se evalúa E_i(u, ubar) en el punto u_eval.

        Args:
            state (BetheState): Estado de Bethe
            u_eval (complex, optional): Punto de evaluación de E_i

        Returns:
            np.ndarray: Defectos complejos (uno por raíz)

        Raises:
            SingularConfigurationError: Si u_i^2 = u_j^2 para i != j
        """
        u = np.asarray(state.u, dtype=complex)
        if self.p.beta == 0:
            return reduced_bethe_defects(u, self.p, self.region)

        _check_distinct(u)
        L = self.L
        out = np.zeros(len(u), dtype=complex)
        if self.tau is None:
            raise RegimeError("Los defectos genéricos requieren alpha*beta*gamma*delta > 0")
        s = self.scalars
        uu = DEFAULT_SPECTRAL_POINT if u_eval is None else complex(u_eval)
        v = self.tau / uu
        for i in range(len(u)):
            others = np.delete(u, i)
            prod_f = np.prod([s.f(u[i], uj) for uj in others]) if len(others) else 1.0
            prod_t = np.prod([s.f(self.tau / u[i], uj) for uj in others]) if len(others) else 1.0
            # E_i = 0 escrito como lhs = rhs
            lhs = (s.r(uu) * s.g(uu, u[i], L - 1) + s.r(v) * s.g(v, u[i], L - 1)) * s.a(u[i]) * prod_f
            rhs = -((s.r(v) * s.w(v, u[i], L - 1) + s.r(uu) * s.w(uu, u[i], L - 1))
                    * s.a(self.tau / u[i]) * prod_t)
            out[i] = (lhs - rhs) / max(abs(lhs), abs(rhs), NORM_FLOOR)
        return out

    # Régimen beta = 0

    def _require_beta0(self):
        if self.p.beta != 0:
            raise RegimeError("Esta operación requiere beta = 0")

    def _wf_prefactor(self, n):
        """q^(-L(L-1)/2) prod_(l=1..L-n)(1-q^l) prod_(i<n) J_i/q^(i+1), en forma logarítmica."""
        q, L = self.p.q, self.L
        ell = np.arange(1, L - n + 1, dtype=float)
        i = np.arange(n, dtype=float)
        shift = log_product(np.full(L * (L - 1) // 2, 1.0 / q)) if L > 1 else log_product([1.0])
        return (shift * log_product(1.0 - q ** ell) * log_product(self.model.J[:n] / q ** (i + 1))).value

    def _wf_series(self, n):
        """h_k(-alpha*gamma*q, ..., -alpha*gamma*q^(n+1)) para k = 0..L-n."""
        q = self.p.q
        c = -self.p.alpha * self.p.gamma * q ** np.arange(1, n + 2, dtype=float)
        return complete_homogeneous(c, self.L - n)

    def _wf_matrix(self):
        """M[n, r] tal que q^L <n|u> = sum_r M[n, r] S_r, n, r = 0..L."""
        L = self.L
        M = np.zeros((L + 1, L + 1), dtype=complex)
        for n in range(L + 1):
            M[n, :L - n + 1] = self._wf_prefactor(n) * self._wf_series(n)[::-1]
        return M

    def bethe_wavefunction_beta0(self, state, n):
        """
        Componente q^L <n|u> en forma cerrada (beta = 0):
        prefactor(n) * sum_(r=0..L-n) h_(L-n-r)(-alpha*gamma*q, ..., -alpha*gamma*q^(n+1)) S_r.

        Args:
            state (BetheState): Estado de Bethe
            n (int): Sitio (0 <= n <= L)

        Returns:
            complex: Componente del vector de Bethe multiplicado por q^L
        """
        self._require_beta0()
        L = self.L
        if not 0 <= n <= L:
            raise DomainError(f"n={n} fuera de 0..{L}")
        S = elementary_symmetric(state.U)
        series = np.sum(self._wf_series(n)[::-1] * S[:L - n + 1])
        return complex(self._wf_prefactor(n) * series)

    def wavefunction_beta0(self, state):
        """Vector completo q^L <n|u>, n = 0..N (cero para n > L)."""
        vec = np.zeros(self.p.N + 1, dtype=complex)
        for n in range(self.L + 1):
            vec[n] = self.bethe_wavefunction_beta0(state, n)
        return vec

    def c_eigenvalue_beta0(self, state, spectral, n=None, tol=None):
        """
        Autovalor c(u) de la matriz de correlación truncada a partir de las raíces de Bethe,
        c = sum_r b_(r,n) S_r / <n|u> con b_(r,n) = sum_k C[n, k] M[k, r].

        Sin n explícito se evalúa en los dos sitios de mayor |<n|u>| y ambos cocientes
        deben coincidir.

        Args:
            state (BetheState): Estado de Bethe aceptado
            spectral (SpectralData): Datos espectrales de la cadena
            n (int, optional): Sitio usado en el cociente
            tol (float, optional): Tolerancia de acuerdo entre sitios y de pertenencia a [0, 1]

        Returns:
            float: c(u)

        Raises:
            DegenerateWavefunctionError: Si todas las componentes son nulas
            ConsistencyError: Parte imaginaria, c fuera de [0, 1] o desacuerdo entre sitios
        """
        self._require_beta0()
        tol = config.C_EIG_TOL if tol is None else tol
        L, K = self.L, self.K
        S = elementary_symmetric(state.U)
        M = self._wf_matrix()
        wf = M @ S
        norm = np.linalg.norm(wf)
        if norm == 0 or not np.isfinite(norm):
            raise DegenerateWavefunctionError("Todas las componentes <n|u> son despreciables")

        phi = spectral.phi
        C = phi[:L + 1, :K + 1] @ phi[:L + 1, :K + 1].T
        b = C @ M
        order = np.argsort(np.abs(wf))[::-1]
        first = int(order[0]) if n is None else int(n)
        c = (b[first] @ S) / wf[first]

        if abs(c.imag) > config.IMAG_TOL * max(abs(c), 1.0):
            raise ConsistencyError('c_parte_imaginaria', abs(c.imag), config.IMAG_TOL)
        outside = max(0.0, -c.real, c.real - 1.0)
        if outside > tol:
            raise ConsistencyError('c_intervalo', outside, tol)
        if n is None and L > 0:
            second = int(order[1])
            other = (b[second] @ S) / wf[second]
            spread = abs(other - c) / max(abs(c), abs(other), 1.0)
            if spread > tol:
                raise ConsistencyError('c_entre_sitios', spread, tol)
        return float(c.real)

    def state_from_eigenvector(self, x):
        """
        Recupera la raíz de Bethe de un estado con L = 1 desde un autovector de T_block,
        usando x_0/x_1 = (X + Y U)/V en n = 0, m = 0.

        Args:
            x (array-like): Autovector de T_block (largo 2)

        Returns:
            BetheState: Estado con Lambda y defectos
        """
        if self.L != 1:
            raise DomainError("Sólo disponible para L = 1")
        x = np.asarray(x, dtype=float)
        coeffs = self.b_action_coeffs([0])
        V, X, Y = coeffs.V[0, 0], coeffs.X[0, 0], coeffs.Y[0, 0]
        U = (x[0] * V / x[1] - X) / Y
        abgd, q = self.scalars.abgd, self.p.q
        if abgd == 0:
            t = q / U
        else:
            t = (U + cmath.sqrt(U * U - 4.0 * abgd * q)) / (2.0 * abgd)
        return self.make_state([cmath.sqrt(t)])


if __name__ == "__main__":
    from core.qkernel import ChainParams
    from model.chain import build_chain
    from model.correlation import RegionSpec

    params = ChainParams.truncated(q=0.8, beta=-0.4, gamma=0.6, delta=-0.3, N=5)
    aba = BetheAnsatz(build_chain(params), RegionSpec(L=2, K=3))
    print(f"tau = {aba.tau:.6f}")
    print(f"Intercambio (u=0.9, v=1.1, m=1): {aba.verify_exchange(0.9, 1.1, 1)}")
    print(f"T desde A(u, L): {aba.heun_from_dynA(0.9):.2e}")
