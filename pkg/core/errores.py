"""
Jerarquía de errores del motor de análisis.
La CLI y el servicio HTTP traducen cada clase a un código de salida/estado.
"""


class ErrorModelo(Exception):
    """Error base del paquete"""


class ErrorConfiguracion(ErrorModelo, ValueError):
    """Modelo, archivo o parámetro inválido"""


class ErrorCapacidad(ErrorModelo, RuntimeError):
    """Se superó un límite de capacidad configurable"""

    def __init__(self, mensaje: str, limite: int = None, ajuste: str = None):
        if ajuste:
            mensaje = f"{mensaje} (límite {limite}, ajustable con {ajuste})"
        super().__init__(mensaje)
        self.limite = limite
        self.ajuste = ajuste


class ErrorPrecondicion(ErrorModelo):
    """Las hipótesis de un análisis no se cumplen para el modelo dado"""
