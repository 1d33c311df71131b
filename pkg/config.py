"""
Configuración global del proyecto.
Lee variables de entorno desde .env
"""
import os
from dotenv import load_dotenv

# Cargar variables de entorno desde .env
load_dotenv()

# Tolerancias numéricas (sobrescribibles por variable de entorno o por RunConfig)
EIG_TOL = float(os.getenv('EIG_TOL', 1e-12))
ORTHO_TOL = float(os.getenv('ORTHO_TOL', 1e-8))
CLAMP_TOL = float(os.getenv('CLAMP_TOL', 1e-9))
PROJECTOR_TOL = float(os.getenv('PROJECTOR_TOL', 1e-10))
PI_COMMUTATOR_TOL = float(os.getenv('PI_COMMUTATOR_TOL', 1e-12))
COMMUTATOR_TOL = float(os.getenv('COMMUTATOR_TOL', 1e-10))
AW_TOL = float(os.getenv('AW_TOL', 1e-9))
EXCHANGE_TOL = float(os.getenv('EXCHANGE_TOL', 1e-9))
BETHE_TOL = float(os.getenv('BETHE_TOL', 1e-8))
IMAG_TOL = float(os.getenv('IMAG_TOL', 1e-8))
TQ_TOL = float(os.getenv('TQ_TOL', 1e-8))
GAP_TOL = float(os.getenv('GAP_TOL', 1e-8))
ROUTE_TOL = float(os.getenv('ROUTE_TOL', 1e-4))
THERMO_TOL = float(os.getenv('THERMO_TOL', 5e-2))
C_EIG_TOL = float(os.getenv('C_EIG_TOL', 1e-7))  # c(u) entre sitios y dentro de [0, 1]

# Nombres aceptados en el bloque "tolerances" de un RunConfig
TOLERANCE_NAMES = (
    'eig_tol', 'ortho_tol', 'clamp_tol', 'projector_tol', 'pi_commutator_tol',
    'commutator_tol', 'aw_tol', 'exchange_tol', 'bethe_tol', 'imag_tol',
    'tq_tol', 'gap_tol', 'route_tol', 'thermo_tol', 'c_eig_tol',
)

# Límites de los algoritmos
MAX_QL_ITER = int(os.getenv('MAX_QL_ITER', 60))  # Iteraciones QL por autovalor
POLE_FACTOR = float(os.getenv('POLE_FACTOR', 1e3))  # Múltiplo de epsilon de máquina para polos
BETHE_NEWTON_ITER = int(os.getenv('BETHE_NEWTON_ITER', 8))  # Pasos de Newton sobre las raíces con beta = 0
TQ_NEWTON_ITER = int(os.getenv('TQ_NEWTON_ITER', 60))  # Pasos de Newton sobre cada Lambda
TQ_MAX_DIGITS = int(os.getenv('TQ_MAX_DIGITS', 2000))  # Precisión máxima del barrido TQ

# Tamaños máximos para las verificaciones costosas o mal condicionadas
COMMUTATOR_CHECK_MAX_N = int(os.getenv('COMMUTATOR_CHECK_MAX_N', 30))  # [T, C_hat]
EXCHANGE_CHECK_MAX_N = int(os.getenv('EXCHANGE_CHECK_MAX_N', 12))  # Relaciones de intercambio
SMALL_SCALE_MAX_N = int(os.getenv('SMALL_SCALE_MAX_N', 15))  # Acuerdo entre rutas con TQ_TOL

# Configuración de la aplicación
DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', 20220718))
DEFAULT_RANDOM_TRIALS = int(os.getenv('DEFAULT_RANDOM_TRIALS', 20))
OUTPUT_DIR = os.getenv('OUTPUT_DIR', 'output')
OUTPUT_FORMAT = os.getenv('OUTPUT_FORMAT', 'csv')
FLOAT_FORMAT = '%.17g'


def default_tolerances():
    """
    Devuelve las tolerancias por defecto como diccionario.

    Returns:
        dict: Nombre en minúsculas -> valor
    """
    return {name: globals()[name.upper()] for name in TOLERANCE_NAMES}
