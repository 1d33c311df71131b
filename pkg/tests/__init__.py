"""
Tests unitarios de la cadena q-Racah.

Un archivo por módulo (test_<módulo>.py) y fábricas de parámetros en fixtures.py.
Ejecutar con:
    python -m unittest discover tests
"""

__version__ = "0.1.0"
