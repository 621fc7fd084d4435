import numpy as np
import pytest

from core.dinamica import distribucion_estacionaria
from core.errores import ErrorConfiguracion
from core.models import estado_desde_indices
from core.simulacion import ConfiguracionSimulacion, SimuladorMonteCarlo, comparar_ocupacion
from utils.exportador import DataExporter
from conftest import EX1_L


@pytest.fixture(scope='module')
def simulador(ex1):
    return SimuladorMonteCarlo(ex1.modelo, ex1.espacio, ex1.analizador.utilidades)


def test_misma_semilla_mismo_resultado(simulador):
    config = ConfiguracionSimulacion(epsilon=0.05, pasos=20000, semilla=7, replicas=2)
    primero = simulador.ejecutar(config)
    segundo = simulador.ejecutar(config)
    assert np.array_equal(primero.frecuencias, segundo.frecuencias)
    assert DataExporter.serializar(primero) == DataExporter.serializar(segundo)


def test_otra_semilla_otro_resultado(simulador):
    a = simulador.ejecutar(ConfiguracionSimulacion(epsilon=0.05, pasos=20000, semilla=1))
    b = simulador.ejecutar(ConfiguracionSimulacion(epsilon=0.05, pasos=20000, semilla=2))
    assert not np.array_equal(a.frecuencias, b.frecuencias)


def test_sin_errores_queda_en_el_maximal(simulador, ex1):
    config = ConfiguracionSimulacion(epsilon=1e-12, pasos=5000, burn_in=0, inicial=EX1_L)
    reporte = simulador.ejecutar(config)
    assert reporte.frecuencias[ex1.espacio.indice[EX1_L]] == 1.0
    assert reporte.estado_modal() == EX1_L


def test_frecuencias_normalizadas(simulador):
    for esquema in ('uniform', 'uniform-destructive'):
        reporte = simulador.ejecutar(ConfiguracionSimulacion(epsilon=0.1, pasos=10000, esquema=esquema, replicas=2))
        assert reporte.frecuencias.sum() == pytest.approx(1.0)
        assert sum(reporte.por_clase.values()) == pytest.approx(1.0)


def test_clase_modal_es_la_de_l(simulador, ex1):
    reporte = simulador.ejecutar(ConfiguracionSimulacion(epsilon=1e-2, pasos=200000, semilla=3))
    espacio = ex1.espacio
    assert reporte.clase_modal() == espacio.etiqueta_clase(espacio.clase(espacio.indice[EX1_L]))
    datos = reporte.to_dict()
    assert datos['modal_class'] == reporte.clase_modal()
    assert 'tv_distance' not in datos


def test_estado_inicial_infactible(simulador):
    config = ConfiguracionSimulacion(epsilon=0.1, pasos=10, inicial=estado_desde_indices([0, 1, 2]))
    with pytest.raises(ErrorConfiguracion, match='inicial'):
        simulador.ejecutar(config)


@pytest.mark.lento
def test_ocupacion_cercana_a_la_estacionaria(simulador, ex1):
    pi = distribucion_estacionaria(ex1.dinamica.matriz_perturbada(1e-2))
    corta = simulador.ejecutar(ConfiguracionSimulacion(epsilon=1e-2, pasos=100_000, semilla=0), referencia=pi)
    larga = simulador.ejecutar(ConfiguracionSimulacion(epsilon=1e-2, pasos=1_000_000, semilla=0), referencia=pi)
    assert larga.distancia_tv <= 0.02
    assert larga.distancia_tv < corta.distancia_tv


def test_comparar_ocupacion():
    assert comparar_ocupacion([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert comparar_ocupacion([1.0, 0.0], [0.0, 1.0]) == 1.0
    assert comparar_ocupacion([0.75, 0.25], [0.5, 0.5]) == pytest.approx(0.25)


def test_comparar_ocupacion_dimensiones():
    with pytest.raises(ErrorConfiguracion):
        comparar_ocupacion([1.0], [0.5, 0.5])


def test_burn_in_por_defecto():
    assert ConfiguracionSimulacion(epsilon=0.1, pasos=1000).burn_in == 10


@pytest.mark.parametrize('extra', [
    {'epsilon': 0.0, 'pasos': 10},
    {'epsilon': 0.1, 'pasos': 0},
    {'epsilon': 0.1, 'pasos': 10, 'burn_in': 10},
    {'epsilon': 0.1, 'pasos': 10, 'replicas': 0},
    {'epsilon': 0.1, 'pasos': 10, 'esquema': 'otro'},
])
def test_configuracion_invalida(extra):
    with pytest.raises(ErrorConfiguracion):
        ConfiguracionSimulacion(**extra)
