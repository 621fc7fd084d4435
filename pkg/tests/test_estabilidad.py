from fractions import Fraction

import pytest
from hypothesis import given

from core.ejemplos import EJEMPLOS
from core.errores import ErrorCapacidad, ErrorConfiguracion
from core.estabilidad import AnalizadorEstabilidad
from core.models import Modelo, Proyecto, Tecnologia, estado_desde_indices
from core.pagos import PagoLineal
from core.reticula import enumerar_estados
from core.supuestos import verificar_supuestos
from conftest import EX1_L, EX1_SOLO_JK
from estrategias import PROPIEDADES, PROPIEDADES_COSTOSAS, modelos_t1_v2, modelos_v0

# Proyectos de EX2: A=0..2, B=3..5, J=6..8, K=9..11, L=12..14 (actividades a, b, c)
EX2_CLASE_I = estado_desde_indices([0, 3, 9, 12])
EX2_CLASE_II = estado_desde_indices([3, 6, 7, 9])
EX2_CLASE_III = estado_desde_indices([6, 7, 8])


@pytest.mark.parametrize('nombre', list(EJEMPLOS))
def test_mts_igual_maximales(casos, nombre):
    caso = casos(nombre)
    assert caso.analizador.conjunto_mts() == caso.espacio.estados_maximales()


def test_es_mts_estado_no_maximal(ex1):
    assert not ex1.analizador.es_mts(estado_desde_indices([0]))
    assert ex1.analizador.es_mts(EX1_L)


def test_es_mts_estado_infactible(ex1):
    with pytest.raises(ErrorConfiguracion):
        ex1.analizador.es_mts(estado_desde_indices([0, 1, 2]))


def test_ex1_cs_igual_mts(ex1):
    cs = ex1.analizador.conjunto_cs(0)
    assert cs == ex1.analizador.conjunto_mts()
    assert EX1_SOLO_JK in cs


def test_ex2_cs_excluye_clase_i(ex2):
    cs = ex2.analizador.conjunto_cs(0)
    assert EX2_CLASE_II in cs
    assert EX2_CLASE_III in cs
    assert EX2_CLASE_I not in cs
    assert cs < ex2.analizador.conjunto_mts()


def test_ex2_testigo_de_bloqueo(ex2):
    operacion = ex2.analizador.buscar_operacion_bloqueo(EX2_CLASE_I)
    assert operacion is not None
    assert operacion.coalicion == (1, 2)
    assert operacion.eliminados == EX2_CLASE_I
    assert operacion.agregados == EX2_CLASE_III
    assert operacion.destino in ex2.espacio.indice
    assert all(g > 0 for g in operacion.ganancias)
    assert not operacion.agregados & operacion.origen
    assert operacion.eliminados & ~operacion.origen == 0


def test_estado_cs_sin_bloqueo(ex2):
    assert ex2.analizador.buscar_operacion_bloqueo(EX2_CLASE_III) is None


def test_ex2_umbrales(ex2):
    umbrales = ex2.analizador.umbrales_costo()
    assert umbrales.definidos
    assert umbrales.c_bajo == Fraction(1, 2)
    assert umbrales.c_alto == Fraction(3, 2)
    assert umbrales.c_bajo_garantizado <= umbrales.c_bajo
    assert umbrales.c_alto_garantizado >= umbrales.c_alto


def test_ex2_costos_bajos_y_altos(ex2):
    analizador = ex2.analizador
    umbrales = analizador.umbrales_costo()
    cs0 = analizador.conjunto_cs(0)
    cs_bajo = analizador.conjunto_cs(umbrales.c_bajo / 2)
    cs_alto = analizador.conjunto_cs(max(umbrales.c_alto, umbrales.c_alto_garantizado))
    assert cs_bajo == cs0
    assert cs_alto == analizador.conjunto_mts()
    assert cs0 <= cs_bajo <= cs_alto


def test_ex1_umbral_alto(ex1):
    umbrales = ex1.analizador.umbrales_costo()
    assert umbrales.c_alto == 1
    alto = max(umbrales.c_alto, umbrales.c_alto_garantizado)
    assert ex1.analizador.conjunto_cs(alto) == ex1.analizador.conjunto_mts()


def test_umbrales_definidos_desde_vacio(ex3):
    # desde ∅ cualquier equipo se forma: BO(0) no es vacío
    assert ex3.analizador.umbrales_costo().definidos


def test_costo_negativo(ex1):
    with pytest.raises(ErrorConfiguracion):
        ex1.analizador.conjunto_cs(-1)


def test_ex1_jk_cs_solo_jk(ex1_jk):
    assert ex1_jk.analizador.conjunto_cs(0) == frozenset({EX1_SOLO_JK})


def test_limite_de_agentes():
    nombres = tuple(f"a{i}" for i in range(13))
    modelo = Modelo(
        nombres_agentes=nombres,
        dotaciones=tuple(1 for _ in nombres),
        actividades=('a',),
        tecnologia=Tecnologia((Proyecto('a', (1, 1) + (0,) * 11),)),
        pago=PagoLineal(Fraction(1)),
    )
    analizador = AnalizadorEstabilidad(modelo, enumerar_estados(modelo))
    assert analizador.conjunto_mts()
    with pytest.raises(ErrorCapacidad, match='MAX_AGENTES_COALICION'):
        analizador.conjunto_cs(0)


def test_movimientos_desde_vacio(ex1):
    movimientos = ex1.analizador.movimientos_mejora(0)
    assert len(movimientos) == len(ex1.espacio) - 1
    solo = next(m for m in movimientos if m.destino == estado_desde_indices([0]))
    assert solo.coalicion == (0, 1)


def test_sin_movimientos_en_cs(ex1_jk):
    assert ex1_jk.analizador.movimientos_mejora(EX1_SOLO_JK) == []


def test_pareto(ex1):
    dominante = ex1.analizador.es_pareto_eficiente(EX1_SOLO_JK)
    assert dominante is not None
    u = ex1.analizador.utilidades
    origen, otro = u[ex1.espacio.indice[EX1_SOLO_JK]], u[ex1.espacio.indice[dominante]]
    assert all(b >= a for a, b in zip(origen, otro)) and origen != otro
    assert ex1.analizador.es_pareto_eficiente(EX1_L) is None


def test_previsores_ex3_exhaustivo(ex3):
    conjuntos = ex3.analizador.conjuntos_estables_previsores('exhaustive')
    assert [c.miembros for c in conjuntos] == [frozenset({0b01, 0b10})]
    assert conjuntos[0].certificado == (True, True, True)


@pytest.mark.parametrize('nombre', ['EX1', 'EX1-JK', 'MAR', 'EX3'])
def test_previsores_greedy_certificados(casos, nombre):
    caso = casos(nombre)
    conjuntos = caso.analizador.conjuntos_estables_previsores('greedy')
    assert len(conjuntos) == 1
    assert caso.analizador.verificar_previsor(conjuntos[0]) == (True, True)
    assert conjuntos[0].certificado[:2] == (True, True)
    # los estados sin movimientos de mejora pertenecen a todo conjunto previsor
    for x in caso.analizador.conjunto_cs(0):
        assert x in conjuntos[0].miembros


def test_modo_desconocido(ex3):
    with pytest.raises(ErrorConfiguracion):
        ex3.analizador.conjuntos_estables_previsores('otro')


def test_modo_exhaustivo_con_demasiados_estados(ex1):
    with pytest.raises(ErrorCapacidad):
        ex1.analizador.conjuntos_estables_previsores('exhaustive')


@PROPIEDADES
@given(modelos_v0())
def test_mts_igual_maximales_aleatorio(modelo):
    espacio = enumerar_estados(modelo)
    analizador = AnalizadorEstabilidad(modelo, espacio)
    assert analizador.conjunto_mts() == espacio.estados_maximales()


@PROPIEDADES
@given(modelos_t1_v2(max_agentes=4, max_proyectos=6))
def test_cs_cero_igual_mts_con_t1_v2(modelo):
    espacio = enumerar_estados(modelo)
    supuestos = verificar_supuestos(modelo, espacio)
    assert supuestos.t1 and supuestos.v2
    analizador = AnalizadorEstabilidad(modelo, espacio)
    assert analizador.conjunto_cs(0) == analizador.conjunto_mts()


@PROPIEDADES_COSTOSAS
@given(modelos_v0(max_agentes=4, max_proyectos=6))
def test_cs_monotono_en_costo(modelo):
    analizador = AnalizadorEstabilidad(modelo, enumerar_estados(modelo))
    umbrales = analizador.umbrales_costo()
    if not umbrales.definidos:
        return
    cs0 = analizador.conjunto_cs(0)
    assert analizador.conjunto_cs(umbrales.c_bajo_garantizado / 2) == cs0
    alto = max(umbrales.c_alto, umbrales.c_alto_garantizado)
    assert analizador.conjunto_cs(alto) == analizador.conjunto_mts()
    assert cs0 <= analizador.conjunto_cs(umbrales.c_bajo / 2) <= analizador.conjunto_cs(alto)
