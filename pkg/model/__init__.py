"""
Módulo model - Cadena de fermiones libres y matrices de correlación
"""
