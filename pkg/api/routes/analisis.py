from flask import Blueprint
import logging
from fractions import Fraction

from config import MAX_ESTADOS_PREVISOR
from core.errores import ErrorConfiguracion, ErrorModelo
from utils.api_helpers import contexto_desde_cuerpo, obtener_cuerpo, parametro, respuesta_error, respuesta_json
from utils.reportes import (
    reporte_ejemplos, reporte_enumeracion, reporte_estabilidad, reporte_estacionario,
    reporte_estocastico, reporte_simulacion, reporte_verificacion,
)

api_bp = Blueprint('api', __name__, url_prefix='/api')
logger = logging.getLogger(__name__)


# ==================== COMANDOS ====================

def _enumerate(ctx, cuerpo):
    return reporte_enumeracion(ctx, parametro(cuerpo, 'classes', bool, False))


def _stability(ctx, cuerpo):
    nocion = parametro(cuerpo, 'notion', str)
    if nocion is None:
        raise ErrorConfiguracion("Falta el parámetro 'notion'")
    costo = parametro(cuerpo, 'cost', Fraction, Fraction(0))
    if costo < 0:
        raise ErrorConfiguracion("El costo de salida no puede ser negativo")
    modo = parametro(cuerpo, 'mode', str, 'auto')
    if modo == 'auto':
        modo = 'exhaustive' if len(ctx.espacio) <= MAX_ESTADOS_PREVISOR else 'greedy'
    return reporte_estabilidad(ctx, nocion, costo, modo, parametro(cuerpo, 'classes', bool, False))


def _stochastic(ctx, cuerpo):
    return reporte_estocastico(ctx, parametro(cuerpo, 'classes', bool, False))


def _stationary(ctx, cuerpo):
    return reporte_estacionario(ctx, parametro(cuerpo, 'epsilon', float), parametro(cuerpo, 'scheme', str),
                                parametro(cuerpo, 'classes', bool, False))


def _simulate(ctx, cuerpo):
    pasos = parametro(cuerpo, 'steps', int)
    if pasos is None:
        raise ErrorConfiguracion("Falta el parámetro 'steps'")
    # el servicio ejecuta las réplicas en el proceso del worker
    return reporte_simulacion(
        ctx,
        epsilon=parametro(cuerpo, 'epsilon', float),
        pasos=pasos,
        semilla=parametro(cuerpo, 'seed', int, 0),
        esquema=parametro(cuerpo, 'scheme', str),
        burn_in=parametro(cuerpo, 'burn_in', int),
        replicas=parametro(cuerpo, 'replicas', int, 1),
        comparar=parametro(cuerpo, 'compare', bool, False),
    )


def _verify(ctx, cuerpo):
    return reporte_verificacion(ctx)


COMANDOS = {
    'enumerate': _enumerate,
    'stability': _stability,
    'stochastic': _stochastic,
    'stationary': _stationary,
    'simulate': _simulate,
    'verify': _verify,
}


# ==================== RUTAS ====================

@api_bp.route('/ejemplos', methods=['GET'])
def listar():
    """Modelos integrados disponibles."""
    return respuesta_json(reporte_ejemplos())


@api_bp.route('/ejemplos/<nombre>', methods=['GET'])
def emitir(nombre):
    """Archivo de modelo de un ejemplo integrado."""
    try:
        return respuesta_json(reporte_ejemplos(nombre, emitir=True))
    except ErrorModelo as e:
        return respuesta_error(e)


@api_bp.route('/analisis/<comando>', methods=['POST'])
def analizar(comando):
    """Ejecuta un comando de análisis; responde el mismo documento que --output json."""
    manejador = COMANDOS.get(comando)
    if manejador is None:
        return respuesta_json({'success': False, 'message': f"Comando desconocido: {comando}"}, 404)
    try:
        cuerpo = obtener_cuerpo()
        ctx = contexto_desde_cuerpo(cuerpo)
        logger.info(f"Análisis '{comando}' sobre el modelo {ctx.modelo.nombre or '(anónimo)'}")
        return respuesta_json(manejador(ctx, cuerpo))
    except ErrorModelo as e:
        return respuesta_error(e)
    except Exception as e:
        logger.error(f"Error inesperado en '{comando}': {e}")
        return respuesta_json({'success': False, 'message': 'Error interno del servidor'}, 500)
