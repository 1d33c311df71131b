"""
Módulo app - Configuración de corridas, pipelines y línea de comandos
"""
