"""
Helpers para las rutas de la API: lectura del cuerpo de la petición y
traducción de errores del motor a respuestas JSON.
"""

import logging
from fractions import Fraction

from flask import Response, current_app, request

from core.ejemplos import ejemplo_integrado
from core.errores import ErrorCapacidad, ErrorConfiguracion, ErrorModelo, ErrorPrecondicion
from utils.cargador_modelo import modelo_desde_dict
from utils.exportador import DataExporter
from utils.reportes import ContextoAnalisis

logger = logging.getLogger(__name__)

ESTADOS_HTTP = {
    ErrorConfiguracion: 400,
    ErrorCapacidad: 413,
    ErrorPrecondicion: 422,
}


def respuesta_json(documento, status: int = 200) -> Response:
    """Serializa con las mismas reglas que la salida --output json de la CLI"""
    return current_app.response_class(DataExporter.serializar(documento), status=status,
                                      mimetype='application/json')


def respuesta_error(error: ErrorModelo) -> Response:
    status = next((s for clase, s in ESTADOS_HTTP.items() if isinstance(error, clase)), 400)
    logger.warning(f"Petición rechazada ({status}): {error}")
    return respuesta_json({'success': False, 'error': type(error).__name__, 'message': str(error)}, status)


def obtener_cuerpo() -> dict:
    cuerpo = request.get_json(silent=True)
    if cuerpo is None:
        cuerpo = {}
    if not isinstance(cuerpo, dict):
        raise ErrorConfiguracion("El cuerpo de la petición debe ser un objeto JSON")
    return cuerpo


def contexto_desde_cuerpo(cuerpo: dict) -> ContextoAnalisis:
    """{"example": NAME} o {"model": {...}}, exactamente uno"""
    if ('example' in cuerpo) == ('model' in cuerpo):
        raise ErrorConfiguracion("Indique exactamente uno de 'example' o 'model'")
    if 'example' in cuerpo:
        return ContextoAnalisis(ejemplo_integrado(str(cuerpo['example'])))
    return ContextoAnalisis(modelo_desde_dict(cuerpo['model']))


def parametro(cuerpo: dict, nombre: str, tipo, defecto=None):
    if nombre not in cuerpo or cuerpo[nombre] is None:
        return defecto
    valor = cuerpo[nombre]
    try:
        if tipo is Fraction:
            return Fraction(str(valor)) if not isinstance(valor, dict) else Fraction(valor['num'], valor['den'])
        if tipo is int and (isinstance(valor, bool) or not isinstance(valor, int)):
            raise TypeError
        return tipo(valor)
    except (TypeError, ValueError, KeyError, ZeroDivisionError):
        raise ErrorConfiguracion(f"Parámetro '{nombre}' inválido: {valor!r}") from None
