import pytest

from core.ejemplos import EJEMPLOS, ejemplo_integrado
from core.estabilidad import AnalizadorEstabilidad
from core.dinamica import DinamicaEquipos
from core.models import estado_desde_indices
from core.reticula import enumerar_estados

# Proyectos de EX1 (equipos como bucle externo):
# 0=(a,ij) 1=(b,ij) 2=(a,jk) 3=(b,jk) 4=(a,km) 5=(b,km)
EX1_L = estado_desde_indices([0, 1, 4, 5])
EX1_SOLO_JK = estado_desde_indices([2, 3])


class Caso:
    """Modelo integrado con sus estructuras derivadas"""

    def __init__(self, nombre):
        self.modelo = ejemplo_integrado(nombre)
        self.espacio = enumerar_estados(self.modelo)
        self.analizador = AnalizadorEstabilidad(self.modelo, self.espacio)
        self.dinamica = DinamicaEquipos(self.modelo, self.espacio, self.analizador.utilidades, self.analizador)


@pytest.fixture(scope='session')
def casos():
    cache = {}

    def obtener(nombre):
        if nombre not in cache:
            cache[nombre] = Caso(nombre)
        return cache[nombre]
    return obtener


@pytest.fixture(scope='session')
def ex1(casos):
    return casos('EX1')


@pytest.fixture(scope='session')
def ex2(casos):
    return casos('EX2')


@pytest.fixture(scope='session')
def ex1_jk(casos):
    return casos('EX1-JK')


@pytest.fixture(scope='session')
def mar(casos):
    return casos('MAR')


@pytest.fixture(scope='session')
def pub(casos):
    return casos('PUB')


@pytest.fixture(scope='session')
def ex3(casos):
    return casos('EX3')


FIXTURES_V0 = list(EJEMPLOS)
