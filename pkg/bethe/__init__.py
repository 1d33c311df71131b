"""
Módulo bethe - Operador de Heun, ansatz de Bethe algebraico y relación TQ
"""
