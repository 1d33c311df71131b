"""
Excepciones del proyecto.
Todas heredan de QRacahError para que la CLI pueda mapearlas a códigos de salida.
"""


class QRacahError(Exception):
    """Error base de la librería."""


class ConfigError(QRacahError):
    """El archivo de configuración no se puede leer o tiene claves desconocidas."""


class DomainError(QRacahError):
    """Argumento fuera del dominio de la operación."""


class DimensionError(QRacahError):
    """Matrices o vectores con dimensiones incompatibles."""


class ConvergenceError(QRacahError):
    """
    El solver de autovalores no convergió.

    Args:
        index (int): Índice del autovalor que no convergió
        iterations (int): Iteraciones realizadas
    """

    def __init__(self, index, iterations):
        self.index = index
        self.iterations = iterations
        super().__init__(
            f"Sin convergencia en el autovalor {index} tras {iterations} iteraciones"
        )


class SingularParameterError(QRacahError):
    """Un denominador de A_n o C_n se anula."""

    def __init__(self, n, denominator):
        self.n = n
        self.denominator = denominator
        super().__init__(f"Denominador singular '{denominator}' en n={n}")


class ParameterDomainError(QRacahError):
    """Argumento negativo bajo una raíz cuadrada de los coeficientes duales."""

    def __init__(self, k, value):
        self.k = k
        self.value = value
        super().__init__(f"Argumento negativo de raíz cuadrada en k={k}: {value:.6g}")


class DegenerateRecurrenceError(QRacahError):
    """A_n = 0 antes de n = N, la recurrencia no se puede resolver hacia adelante."""

    def __init__(self, n):
        self.n = n
        super().__init__(f"A_{n} = 0 con n < N: recurrencia degenerada")


class NumericDegradationError(QRacahError):
    """Las funciones de onda analíticas perdieron ortonormalidad."""

    def __init__(self, kind, pair, deviation):
        self.kind = kind
        self.pair = pair
        self.deviation = deviation
        super().__init__(
            f"Ortonormalidad de {kind} violada en el par {pair}: desviación {deviation:.3e}. "
            f"Prueba con un N más pequeño."
        )


class ValidationError(QRacahError):
    """Los parámetros de la cadena no pasan la validación."""

    def __init__(self, report):
        self.report = report
        super().__init__("Parámetros inválidos: " + "; ".join(report.violations))


class ConsistencyError(QRacahError):
    """Un residuo de construcción excede la tolerancia."""

    def __init__(self, name, residual, tol):
        self.name = name
        self.residual = residual
        self.tol = tol
        super().__init__(f"Residuo {name} = {residual:.3e} excede la tolerancia {tol:.1e}")


class PoleError(QRacahError):
    """Argumento demasiado cerca de un polo de una función escalar."""

    def __init__(self, denominator):
        self.denominator = denominator
        super().__init__(f"Polo: el denominador '{denominator}' se anula")


class SingularConfigurationError(QRacahError):
    """Raíces de Bethe coincidentes u_i^2 = u_j^2."""

    def __init__(self, i, j):
        self.pair = (i, j)
        super().__init__(f"Raíces de Bethe coincidentes: u_{i}^2 = u_{j}^2")


class RegimeError(QRacahError):
    """La operación exige un régimen de parámetros (beta=0 o delta=0) que no se cumple."""


class SingularRecurrenceError(QRacahError):
    """Pivote nulo en el barrido descendente de la recurrencia TQ."""

    def __init__(self, n):
        self.n = n
        super().__init__(f"Pivote eps_rec[{n}] nulo en el barrido de la recurrencia")


class RescalingError(QRacahError):
    """S_0 se anula en una raíz y no se puede normalizar el estado."""

    def __init__(self, lam):
        self.lam = lam
        super().__init__(f"S_0 ~ 0 para Lambda = {lam:.10g}")


class DegenerateWavefunctionError(QRacahError):
    """Todas las componentes <n|u> son despreciables."""
