"""
Modelos integrados de referencia.

EX1     cuatro agentes con dotación 2, dos actividades, equipos ij, jk y km
EX1-JK  EX1 con pagos de tabla donde j y k se prefieren entre sí
EX2     cuatro agentes con dotación 3, equipos con tiempos (1,2)/(2,1) y jk (1,1)
EX3     agente ficticio h que vuelve excluyentes a (i,j,h) y (k,m,h)
MAR     problema de matrimonio con tres mujeres y cuatro hombres
PUB     modelo de publicaciones con n=4, w=2 y todos los equipos de tamaño ≥ 2
"""

import itertools
import logging
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from core.errores import ErrorConfiguracion
from core.models import Modelo, Proyecto, Tecnologia
from core.pagos import BonoAfinidad, PagoLineal, PagoPublicacion
from core.reticula import enumerar_estados

logger = logging.getLogger(__name__)

MEDIO = Fraction(1, 2)


def _tecnologia(equipos: List[Tuple[int, ...]], actividades: Tuple[str, ...]) -> Tecnologia:
    """Producto equipo × actividad, con los equipos como bucle externo"""
    return Tecnologia(tuple(Proyecto(a, t) for t in equipos for a in actividades))


def _ex1() -> Modelo:
    actividades = ('a', 'b')
    equipos = [(1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1)]
    return Modelo(
        nombres_agentes=('i', 'j', 'k', 'm'),
        dotaciones=(2, 2, 2, 2),
        actividades=actividades,
        tecnologia=_tecnologia(equipos, actividades),
        pago=PagoLineal(MEDIO),
        nombre='EX1',
    )


def _ex1_jk() -> Modelo:
    base = _ex1()
    espacio = enumerar_estados(base)
    tabla = BonoAfinidad(v=Fraction(1), bono=Fraction(1), pareja=(1, 2)).construir_tabla(base, espacio.estados)
    return Modelo(
        nombres_agentes=base.nombres_agentes,
        dotaciones=base.dotaciones,
        actividades=base.actividades,
        tecnologia=base.tecnologia,
        pago=tabla,
        nombre='EX1-JK',
    )


def _ex2() -> Modelo:
    actividades = ('a', 'b', 'c')
    equipos = [(1, 2, 0, 0), (2, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 2), (0, 0, 2, 1)]
    return Modelo(
        nombres_agentes=('i', 'j', 'k', 'm'),
        dotaciones=(3, 3, 3, 3),
        actividades=actividades,
        tecnologia=_tecnologia(equipos, actividades),
        pago=PagoLineal(MEDIO),
        nombre='EX2',
    )


def _ex3() -> Modelo:
    return Modelo(
        nombres_agentes=('i', 'j', 'k', 'm', 'h'),
        dotaciones=(1, 1, 1, 1, 1),
        actividades=('a',),
        tecnologia=_tecnologia([(1, 1, 0, 0, 1), (0, 0, 1, 1, 1)], ('a',)),
        pago=PagoLineal(MEDIO),
        nombre='EX3',
    )


ARISTAS_MATRIMONIO = [
    ('w1', 'm1'), ('w1', 'm2'),
    ('w2', 'm1'), ('w2', 'm2'),
    ('w3', 'm2'), ('w3', 'm3'), ('w3', 'm4'),
]


def _mar() -> Modelo:
    nombres = ('w1', 'w2', 'w3', 'm1', 'm2', 'm3', 'm4')
    equipos = []
    for mujer, hombre in ARISTAS_MATRIMONIO:
        equipos.append(tuple(1 if nombre in (mujer, hombre) else 0 for nombre in nombres))
    return Modelo(
        nombres_agentes=nombres,
        dotaciones=tuple(1 for _ in nombres),
        actividades=('a',),
        tecnologia=_tecnologia(equipos, ('a',)),
        pago=PagoLineal(MEDIO),
        nombre='MAR',
    )


def _pub() -> Modelo:
    n = 4
    equipos = []
    for tamano in range(2, n + 1):
        for miembros in itertools.combinations(range(n), tamano):
            equipos.append(tuple(1 if i in miembros else 0 for i in range(n)))
    return Modelo(
        nombres_agentes=('i', 'j', 'k', 'm'),
        dotaciones=(2, 2, 2, 2),
        actividades=('a',),
        tecnologia=_tecnologia(equipos, ('a',)),
        pago=PagoPublicacion(U=1.0, V=1.0),
        nombre='PUB',
    )


EJEMPLOS: Dict[str, Tuple[Callable[[], Modelo], str]] = {
    'EX1': (_ex1, "Cuatro agentes, dos actividades, equipos ij/jk/km; tres clases maximales"),
    'EX1-JK': (_ex1_jk, "EX1 donde j y k se prefieren: SS y CS disjuntos"),
    'EX2': (_ex2, "Externalidades indirectas: clases I, II y III"),
    'EX3': (_ex3, "Agente ficticio h que vuelve excluyentes dos equipos"),
    'MAR': (_mar, "Problema de matrimonio con siete parejas admisibles"),
    'PUB': (_pub, "Modelo de publicaciones con n=4, w=2, U=V=1"),
}


def listar_ejemplos() -> List[Dict[str, str]]:
    return [{'name': nombre, 'description': descripcion} for nombre, (_, descripcion) in EJEMPLOS.items()]


def ejemplo_integrado(nombre: str) -> Modelo:
    try:
        constructor, _ = EJEMPLOS[nombre.upper()]
    except KeyError:
        raise ErrorConfiguracion(
            f"Ejemplo desconocido: '{nombre}'. Disponibles: {', '.join(EJEMPLOS)}"
        ) from None
    logger.info(f"Cargando ejemplo integrado {nombre.upper()}")
    return constructor()
