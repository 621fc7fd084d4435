import pytest
from hypothesis import given

from core.reticula import enumerar_estados
from core.verificacion import APROBADA, FALLIDA, NO_APLICA, verificar_proposiciones
from estrategias import PROPIEDADES_COSTOSAS, modelos_v0

IDS_GENERALES = [
    'mts_igual_maximales', 'absorbentes_recurrentes_maximales', 'resistencias_forma_cerrada',
    'potencial_afin', 'ss_igual_max_proyectos', 'ss_pareto_eficiente', 'cs_igual_mts',
    'costos_bajos_cs', 'costos_altos_cs_mts', 'costos_monotonia', 'cadena_coaliciones_absorbentes',
    'ss_con_costos', 'existencia_previsores',
]


@pytest.mark.parametrize('nombre', ['EX1', 'EX1-JK', 'EX3', 'MAR', 'PUB'])
def test_sin_fallas_en_ejemplos(casos, nombre):
    caso = casos(nombre)
    reporte = verificar_proposiciones(caso.modelo, caso.espacio)
    assert [e.id for e in reporte.fallas] == []
    assert reporte.to_dict()['failed'] == 0


@pytest.mark.lento
def test_sin_fallas_en_ex2(ex2):
    reporte = verificar_proposiciones(ex2.modelo, ex2.espacio)
    assert [e.id for e in reporte.fallas] == []


def test_ex1_todas_aprobadas(ex1):
    reporte = verificar_proposiciones(ex1.modelo, ex1.espacio)
    assert [e.id for e in reporte.entradas] == IDS_GENERALES
    assert all(e.estado == APROBADA for e in reporte.entradas)


@pytest.mark.lento
def test_ex2_cs_igual_mts_no_aplica_con_testigo(ex2):
    entrada = verificar_proposiciones(ex2.modelo, ex2.espacio).entrada('cs_igual_mts')
    assert entrada.estado == NO_APLICA
    assert entrada.hipotesis['t1'] is False
    assert entrada.testigo['blocking']['coalition']
    assert entrada.to_dict()['witness'] == entrada.testigo


def test_ex1_jk_cs_igual_mts_no_aplica(ex1_jk):
    entrada = verificar_proposiciones(ex1_jk.modelo, ex1_jk.espacio).entrada('cs_igual_mts')
    assert entrada.estado == NO_APLICA
    assert entrada.hipotesis['v2'] is False
    assert entrada.testigo is not None


def test_marginal_solo_con_pago_de_publicacion(ex1, pub):
    ids_ex1 = {e.id for e in verificar_proposiciones(ex1.modelo, ex1.espacio).entradas}
    assert 'marginal_publicacion' not in ids_ex1
    entrada = verificar_proposiciones(pub.modelo, pub.espacio).entrada('marginal_publicacion')
    assert entrada.estado == APROBADA


def test_previsores_exhaustivos_en_espacios_chicos(ex3):
    entrada = verificar_proposiciones(ex3.modelo, ex3.espacio).entrada('existencia_previsores')
    assert entrada.estado == APROBADA
    assert 'exhaustive' in entrada.detalle
    assert entrada.testigo['certified'] == {'i': True, 'ii': True, 'iii': True}


@PROPIEDADES_COSTOSAS
@given(modelos_v0(max_agentes=4, max_proyectos=5))
def test_modelos_aleatorios_sin_fallas(modelo):
    reporte = verificar_proposiciones(modelo, enumerar_estados(modelo))
    estados = {e.id: e.estado for e in reporte.entradas}
    for id in ('mts_igual_maximales', 'absorbentes_recurrentes_maximales', 'resistencias_forma_cerrada',
               'potencial_afin', 'ss_igual_max_proyectos', 'costos_monotonia'):
        assert estados[id] == APROBADA, id
    for id in ('costos_bajos_cs', 'costos_altos_cs_mts'):
        assert estados[id] != FALLIDA, id
