from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from core.dinamica import AnalisisCadena, DinamicaEquipos, clasificar_recurrentes, distribucion_estacionaria
from core.errores import ErrorConfiguracion, ErrorPrecondicion
from core.models import Modelo, Proyecto, Tecnologia
from core.pagos import PagoTabla
from core.reticula import enumerar_estados
from conftest import EX1_L, EX1_SOLO_JK, FIXTURES_V0
from estrategias import PROPIEDADES, modelos_v0


def _cadena(filas):
    absorbentes, recurrentes = clasificar_recurrentes(filas)
    return AnalisisCadena(tuple(filas), absorbentes, recurrentes, 'prueba', exacta=False)


# ==================== CADENA NO PERTURBADA ====================

def test_ex1_fila_desde_vacio(ex1):
    cadena = ex1.dinamica.cadena_no_perturbada()
    indice = ex1.espacio.indice
    assert cadena.filas[0] == {indice[1 << k]: Fraction(1, 6) for k in range(6)}
    assert cadena.exacta


def test_maximal_se_queda(ex1):
    cadena = ex1.dinamica.cadena_no_perturbada()
    a = ex1.espacio.indice[EX1_L]
    assert cadena.filas[a] == {a: 1}


def test_filas_suman_uno(casos):
    for nombre in FIXTURES_V0:
        cadena = casos(nombre).dinamica.cadena_no_perturbada()
        assert all(sum(fila.values()) == 1 for fila in cadena.filas)


@pytest.mark.parametrize('nombre', FIXTURES_V0)
def test_absorbentes_son_maximales(casos, nombre):
    caso = casos(nombre)
    absorbentes, recurrentes = caso.dinamica.clasificar_recurrentes()
    assert absorbentes == recurrentes == caso.espacio.maximales


def test_ex1_diez_absorbentes(ex1):
    absorbentes, _ = ex1.dinamica.clasificar_recurrentes()
    assert len(absorbentes) == 10


def test_clasificacion_con_ciclo():
    absorbentes, recurrentes = clasificar_recurrentes([{1: 1}, {0: 1}])
    assert absorbentes == frozenset()
    assert recurrentes == frozenset({0, 1})


def test_clasificacion_con_transitorio():
    absorbentes, recurrentes = clasificar_recurrentes([{0: 1}, {0: Fraction(1, 2), 1: Fraction(1, 2)}])
    assert absorbentes == recurrentes == frozenset({0})


# ==================== RESISTENCIAS Y POTENCIALES ====================

def test_ex1_resistencias(ex1):
    grafo = ex1.dinamica.grafo_resistencias()
    l, jk = ex1.espacio.indice[EX1_L], ex1.espacio.indice[EX1_SOLO_JK]
    assert grafo.resistencia(l, jk) == 4
    assert grafo.resistencia(jk, l) == 2
    assert grafo.resistencia(l, l) == 0


@pytest.mark.parametrize('nombre', ['EX1', 'EX1-JK', 'MAR', 'EX3', 'PUB'])
def test_resistencias_coinciden_con_caminos(casos, nombre):
    dinamica = casos(nombre).dinamica
    grafo = dinamica.grafo_resistencias()
    assert np.array_equal(grafo.pesos, dinamica.resistencias_por_caminos(grafo.nodos))


@pytest.mark.parametrize('nombre', FIXTURES_V0)
def test_potencial_afin_en_tamano(casos, nombre):
    caso = casos(nombre)
    potenciales = caso.dinamica.potenciales_estocasticos(caso.dinamica.grafo_resistencias())
    assert len({g + caso.espacio.tamano(a) for a, g in potenciales.gamma.items()}) == 1


@pytest.mark.parametrize('nombre', FIXTURES_V0)
def test_ss_igual_max_proyectos(casos, nombre):
    resultado = casos(nombre).dinamica.conjunto_ss()
    assert resultado.coinciden
    assert resultado.to_dict()['equal'] is True


def test_ex1_ss_es_l(ex1):
    assert ex1.dinamica.conjunto_ss().por_arborescencias == frozenset({EX1_L})


def test_ss_exige_v0():
    modelo = Modelo(
        nombres_agentes=('i', 'j'),
        dotaciones=(1, 1),
        actividades=('a',),
        tecnologia=Tecnologia((Proyecto('a', (1, 1)),)),
        pago=PagoTabla({(0,): (Fraction(0), Fraction(0))}),
    )
    dinamica = DinamicaEquipos(modelo, enumerar_estados(modelo))
    with pytest.raises(ErrorPrecondicion, match='v0'):
        dinamica.conjunto_ss()


def test_potenciales_sin_absorbentes(ex1):
    from core.dinamica import GrafoResistencias
    with pytest.raises(ErrorPrecondicion):
        ex1.dinamica.potenciales_estocasticos(GrafoResistencias((), np.zeros((0, 0), dtype=np.int64)))


@PROPIEDADES
@given(modelos_v0())
def test_absorbentes_recurrentes_maximales_aleatorio(modelo):
    espacio = enumerar_estados(modelo)
    absorbentes, recurrentes = DinamicaEquipos(modelo, espacio).clasificar_recurrentes()
    assert absorbentes == recurrentes == espacio.maximales


@PROPIEDADES
@given(modelos_v0(max_agentes=4, max_proyectos=6))
def test_ss_igual_max_proyectos_aleatorio(modelo):
    dinamica = DinamicaEquipos(modelo, enumerar_estados(modelo))
    resultado = dinamica.conjunto_ss()
    assert resultado.coinciden


# ==================== CADENA PERTURBADA ====================

def test_filas_perturbadas_estocasticas(ex1):
    cadena = ex1.dinamica.matriz_perturbada(0.1)
    assert all(abs(sum(fila.values()) - 1) < 1e-12 for fila in cadena.filas)
    assert not cadena.exacta
    # con errores solo ∅ es transitorio: nunca se vuelve a él
    assert cadena.recurrentes == frozenset(range(len(ex1.espacio))) - {ex1.espacio.indice[0]}


def test_perturbada_tiende_a_no_perturbada(ex1):
    no_perturbada = ex1.dinamica.cadena_no_perturbada().a_csr().toarray()
    perturbada = ex1.dinamica.matriz_perturbada(1e-9).a_csr().toarray()
    assert np.abs(perturbada - no_perturbada).max() < 1e-6


def test_esquema_uniforme_solo_en_simulacion(ex1):
    with pytest.raises(ErrorPrecondicion, match='uniform-destructive'):
        ex1.dinamica.matriz_perturbada(0.1, 'uniform')


@pytest.mark.parametrize('epsilon, esquema', [(0.0, 'uniform-destructive'), (1.0, 'uniform-destructive'),
                                              (0.1, 'otro')])
def test_parametros_perturbacion_invalidos(ex1, epsilon, esquema):
    with pytest.raises(ErrorConfiguracion):
        ex1.dinamica.matriz_perturbada(epsilon, esquema)


# ==================== DISTRIBUCIÓN ESTACIONARIA ====================

def test_estacionaria_un_estado():
    assert distribucion_estacionaria(_cadena([{0: 1.0}])).tolist() == [1.0]


def test_estacionaria_dos_estados():
    pi = distribucion_estacionaria(_cadena([{0: 0.7, 1: 0.3}, {0: 0.1, 1: 0.9}]))
    assert pi == pytest.approx([0.25, 0.75])


def test_estacionaria_con_transitorio():
    pi = distribucion_estacionaria(_cadena([{0: 1.0}, {0: 0.5, 1: 0.5}]))
    assert pi.tolist() == [1.0, 0.0]


def test_estacionaria_exige_una_clase_cerrada():
    with pytest.raises(ErrorPrecondicion, match='clases cerradas'):
        distribucion_estacionaria(_cadena([{0: 1.0}, {1: 1.0}]))


@pytest.mark.parametrize('nombre', ['EX1', 'EX1-JK', 'EX3', 'MAR', 'PUB'])
def test_estacionaria_perturbada_sin_masa_en_vacio(casos, nombre):
    caso = casos(nombre)
    cadena = caso.dinamica.matriz_perturbada(1e-2)
    pi = distribucion_estacionaria(cadena)
    matriz = cadena.a_csr()
    assert pi[caso.espacio.indice[0]] == 0
    assert pi.sum() == pytest.approx(1.0)
    assert np.abs(matriz.T @ pi - pi).max() < 1e-10
    assert (pi[list(cadena.recurrentes)] > 0).all()


def test_ex1_masa_concentrada_en_l(ex1):
    dinamica = ex1.dinamica
    objetivo = frozenset({EX1_L})
    masa_fina = dinamica.masa_en(distribucion_estacionaria(dinamica.matriz_perturbada(1e-3)), objetivo)
    masa_gruesa = dinamica.masa_en(distribucion_estacionaria(dinamica.matriz_perturbada(1e-2)), objetivo)
    masa_minima = dinamica.masa_en(distribucion_estacionaria(dinamica.matriz_perturbada(1e-4)), objetivo)
    assert masa_fina >= 0.90
    assert masa_minima >= 0.95
    assert masa_gruesa < masa_fina < masa_minima


# ==================== COSTOS DE SALIDA ====================

def test_cadena_coaliciones_rechaza_costo_bajo(ex1):
    with pytest.raises(ErrorPrecondicion, match='c_high'):
        ex1.dinamica.cadena_coaliciones(0)


def test_cadena_coaliciones_costo_negativo(ex1):
    with pytest.raises(ErrorConfiguracion):
        ex1.dinamica.cadena_coaliciones(-1)


def test_cadena_coaliciones_filas(ex1):
    umbrales = ex1.analizador.umbrales_costo()
    cadena = ex1.dinamica.cadena_coaliciones(max(umbrales.c_alto, umbrales.c_alto_garantizado))
    assert all(sum(fila.values()) == 1 for fila in cadena.filas)
    assert all(p == Fraction(1, 64) for a, fila in enumerate(cadena.filas) for b, p in fila.items() if b != a)


@pytest.mark.lento
def test_ex2_ss_con_costos_altos(ex2):
    umbrales = ex2.analizador.umbrales_costo()
    costo = max(umbrales.c_alto, umbrales.c_alto_garantizado)
    cadena = ex2.dinamica.cadena_coaliciones(costo)
    assert {ex2.espacio.estados[a] for a in cadena.absorbentes} == ex2.analizador.conjunto_mts()
    resultado = ex2.dinamica.ss_con_costos(costo)
    assert resultado.por_arborescencias == ex2.espacio.estados_max_proyectos()


def test_elimina_proyectos(ex1):
    l, jk = ex1.espacio.indice[EX1_L], ex1.espacio.indice[EX1_SOLO_JK]
    filas = [{} for _ in range(len(ex1.espacio))]
    for a, fila in enumerate(filas):
        fila[a] = 1
    filas[l] = {jk: 1}
    assert _cadena(filas).elimina_proyectos(ex1.espacio)
    filas[l] = {l: 1}
    assert not _cadena(filas).elimina_proyectos(ex1.espacio)
