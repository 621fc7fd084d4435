"""
Lectura y validación de archivos de modelo (JSON UTF-8).

La forma del documento se declara en ESQUEMA_MODELO y se valida con
jsonschema; acá solo quedan los chequeos que dependen de otros campos
(agentes conocidos, tiempos dentro de la dotación, índices de la tabla).
Los errores de sintaxis informan línea y columna; los de esquema, la ruta
de la clave (por ejemplo projects[3].time.z).
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

from jsonschema import Draft202012Validator
from jsonschema.exceptions import relevance

from config import ESQUEMAS_PERTURBACION, TOLERANCIA_NUMERICA
from core.errores import ErrorConfiguracion
from core.models import Modelo, Proyecto, Tecnologia
from core.pagos import PagoLineal, PagoPublicacion, PagoRepartoIgualitario, PagoTabla

logger = logging.getLogger(__name__)


# ==================== ESQUEMA ====================

_REAL_TEXTO = r'^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$'

RACIONAL = {
    'anyOf': [
        {'type': 'number'},
        {'type': 'string', 'pattern': rf'{_REAL_TEXTO}|^[+-]?\d+/\d+$'},
        {
            'type': 'object',
            'properties': {'num': {'type': 'integer'}, 'den': {'type': 'integer', 'minimum': 1}},
            'required': ['num', 'den'],
            'additionalProperties': False,
        },
    ]
}
REAL = {'anyOf': [{'type': 'number'}, {'type': 'string', 'pattern': _REAL_TEXTO}]}
TEXTO = {'type': 'string', 'minLength': 1}
FAMILIAS_PAGO = {
    'linear': {'properties': ['family', 'v'], 'required': ['v']},
    'equal_split': {'properties': ['family'], 'required': []},
    'table': {'properties': ['family', 'entries'], 'required': ['entries']},
    'publishing': {'properties': ['family', 'U', 'V', 'phi', 'pgood'], 'required': ['U', 'V']},
}

ESQUEMA_PAGO = {
    'type': 'object',
    'properties': {
        'family': {'enum': list(FAMILIAS_PAGO)},
        'v': RACIONAL,
        'entries': {
            'type': 'array',
            'items': {
                'type': 'object',
                'properties': {
                    'state': {'type': 'array', 'items': {'type': 'integer', 'minimum': 0}, 'uniqueItems': True},
                    'utilities': {'type': 'array', 'items': RACIONAL},
                },
                'required': ['state', 'utilities'],
                'additionalProperties': False,
            },
        },
        'U': REAL,
        'V': REAL,
        'phi': {'type': 'array', 'items': REAL},
        'pgood': {'type': 'array', 'items': REAL},
    },
    'required': ['family'],
    'allOf': [
        {
            'if': {'properties': {'family': {'const': familia}}, 'required': ['family']},
            'then': {
                'properties': {clave: True for clave in reglas['properties']},
                'required': reglas['required'],
                'additionalProperties': False,
            },
        }
        for familia, reglas in FAMILIAS_PAGO.items()
    ],
}

ESQUEMA_MODELO = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'type': 'object',
    'properties': {
        'name': {'type': 'string'},
        'agents': {
            'type': 'array',
            'minItems': 1,
            'items': {
                'type': 'object',
                'properties': {'name': TEXTO, 'endowment': {'type': 'integer', 'minimum': 1}},
                'required': ['name', 'endowment'],
                'additionalProperties': False,
            },
        },
        'activities': {'type': 'array', 'items': TEXTO, 'uniqueItems': True},
        'projects': {
            'type': 'array',
            'minItems': 1,
            'items': {
                'type': 'object',
                'properties': {
                    'activity': TEXTO,
                    'time': {'type': 'object', 'additionalProperties': {'type': 'integer', 'minimum': 0}},
                },
                'required': ['activity', 'time'],
                'additionalProperties': False,
            },
        },
        'payoff': ESQUEMA_PAGO,
        'flags': {
            'type': 'object',
            'properties': {'unique_activity_per_state': {'type': 'boolean'}},
            'additionalProperties': False,
        },
        'dynamics': {
            'type': 'object',
            'properties': {
                'draw_weights': {'type': 'array', 'items': RACIONAL},
                'epsilon': REAL,
                'scheme': {'enum': list(ESQUEMAS_PERTURBACION)},
            },
            'additionalProperties': False,
        },
        'guards': {
            'type': 'object',
            'properties': {
                'max_states': {'type': 'integer', 'minimum': 1},
                'max_coalition_n': {'type': 'integer', 'minimum': 1},
            },
            'additionalProperties': False,
        },
        'numeric_tolerance': REAL,
    },
    'required': ['agents', 'activities', 'projects', 'payoff'],
    'additionalProperties': False,
}

VALIDADOR = Draft202012Validator(ESQUEMA_MODELO)


def _ruta(error) -> str:
    ruta = ''
    for parte in error.absolute_path:
        ruta += f"[{parte}]" if isinstance(parte, int) else (f".{parte}" if ruta else parte)
    return ruta or 'model'


def errores_de_esquema(datos) -> List[str]:
    """Todos los errores de esquema, el más relevante primero"""
    errores = sorted(VALIDADOR.iter_errors(datos), key=relevance, reverse=True)
    return [f"{_ruta(e)}: {e.message}" for e in errores]


def _error(ruta: str, mensaje: str) -> ErrorConfiguracion:
    return ErrorConfiguracion(f"{ruta}: {mensaje}")


def _racional(valor, ruta: str) -> Fraction:
    """Acepta números, {num, den} o cadenas como '1/2' o '0.5'"""
    try:
        if isinstance(valor, dict):
            return Fraction(int(valor['num']), int(valor['den']))
        if isinstance(valor, float):
            return Fraction(repr(valor))
        return Fraction(valor)
    except (ValueError, ZeroDivisionError):
        raise _error(ruta, f"se esperaba un racional, se recibió {valor!r}") from None


# ==================== SECCIONES ====================

def _pago(datos, nombres, proyectos):
    familia = datos['family']
    if familia == 'linear':
        return PagoLineal(_racional(datos['v'], 'payoff.v'))
    if familia == 'equal_split':
        return PagoRepartoIgualitario()
    if familia == 'table':
        entradas = {}
        for e, entrada in enumerate(datos['entries']):
            ruta = f"payoff.entries[{e}]"
            estado = tuple(sorted(int(k) for k in entrada['state']))
            if any(k >= len(proyectos) for k in estado):
                raise _error(f"{ruta}.state", "índice de proyecto fuera de rango")
            if len(entrada['utilities']) != len(nombres):
                raise _error(f"{ruta}.utilities", f"se esperaban {len(nombres)} utilidades")
            if estado in entradas:
                raise _error(f"{ruta}.state", "estado repetido en la tabla")
            entradas[estado] = tuple(
                _racional(u, f"{ruta}.utilities[{i}]") for i, u in enumerate(entrada['utilities'])
            )
        return PagoTabla(entradas)

    vectores = {clave: tuple(float(v) for v in datos[clave]) for clave in ('phi', 'pgood') if clave in datos}
    return PagoPublicacion(U=float(datos['U']), V=float(datos['V']),
                           phi=vectores.get('phi'), pgood=vectores.get('pgood'))


def modelo_desde_dict(datos: Dict[str, Any], nombre: Optional[str] = None) -> Modelo:
    """Valida un documento ModelFile y construye el Modelo; los proyectos conservan el orden del archivo"""
    errores = errores_de_esquema(datos)
    if errores:
        raise ErrorConfiguracion('; '.join(errores))

    nombres, dotaciones = [], []
    for a, agente in enumerate(datos['agents']):
        if agente['name'] in nombres:
            raise _error(f"agents[{a}].name", f"nombre de agente repetido '{agente['name']}'")
        nombres.append(agente['name'])
        dotaciones.append(int(agente['endowment']))
    actividades = tuple(datos['activities'])

    proyectos = []
    for k, proyecto in enumerate(datos['projects']):
        ruta = f"projects[{k}]"
        actividad = proyecto['activity']
        if actividad not in actividades:
            raise _error(f"{ruta}.activity", f"actividad desconocida '{actividad}'")
        desconocidos = sorted(set(proyecto['time']) - set(nombres))
        if desconocidos:
            raise _error(f"{ruta}.time", f"agentes desconocidos: {', '.join(desconocidos)}")
        tiempos = [0] * len(nombres)
        for agente, t in proyecto['time'].items():
            i = nombres.index(agente)
            tiempos[i] = int(t)
            if tiempos[i] > dotaciones[i]:
                raise _error(f"{ruta}.time.{agente}",
                             f"el proyecto ({actividad}) requiere {tiempos[i]} unidades de '{agente}', "
                             f"cuya dotación es {dotaciones[i]}")
        if not any(tiempos):
            raise _error(f"{ruta}.time", "vector de tiempos nulo")
        proyectos.append(Proyecto(actividad, tuple(tiempos)))

    unica = datos.get('flags', {}).get('unique_activity_per_state', False)
    try:
        tecnologia = Tecnologia(tuple(proyectos), actividad_unica_por_estado=unica)
    except ErrorConfiguracion as e:
        raise _error('projects', str(e)) from None

    dinamica = datos.get('dynamics', {})
    pesos = None
    if 'draw_weights' in dinamica:
        pesos = tuple(_racional(q, f"dynamics.draw_weights[{k}]") for k, q in enumerate(dinamica['draw_weights']))
    epsilon = float(dinamica['epsilon']) if 'epsilon' in dinamica else None

    limites = datos.get('guards', {})
    tolerancia = float(datos['numeric_tolerance']) if 'numeric_tolerance' in datos else TOLERANCIA_NUMERICA

    return Modelo(
        nombres_agentes=tuple(nombres),
        dotaciones=tuple(dotaciones),
        actividades=actividades,
        tecnologia=tecnologia,
        pago=_pago(datos['payoff'], nombres, proyectos),
        pesos_sorteo=pesos,
        tolerancia_numerica=tolerancia,
        epsilon=epsilon,
        esquema=dinamica.get('scheme'),
        max_estados=int(limites['max_states']) if 'max_states' in limites else None,
        max_agentes_coalicion=int(limites['max_coalition_n']) if 'max_coalition_n' in limites else None,
        nombre=datos.get('name', nombre or ''),
    )


def cargar_modelo(ruta: str) -> Modelo:
    archivo = Path(ruta)
    try:
        texto = archivo.read_text(encoding='utf-8')
    except OSError as e:
        raise ErrorConfiguracion(f"No se pudo leer {archivo}: {e.strerror}") from None
    except UnicodeDecodeError:
        raise ErrorConfiguracion(f"{archivo}: el archivo no es UTF-8 válido") from None
    try:
        datos = json.loads(texto)
    except json.JSONDecodeError as e:
        raise ErrorConfiguracion(f"{archivo}:{e.lineno}:{e.colno}: JSON inválido: {e.msg}") from None
    try:
        modelo = modelo_desde_dict(datos, nombre=archivo.stem)
    except ErrorConfiguracion as e:
        raise ErrorConfiguracion(f"{archivo}: {e}") from None
    logger.info(f"Modelo cargado desde {archivo}: {modelo.n} agentes, {len(modelo.proyectos)} proyectos")
    return modelo
