"""
Módulo core - Núcleos numéricos y funciones q-especiales
"""
