"""Estrategias de hypothesis para modelos aleatorios con no saciedad (v0)"""

from fractions import Fraction

from hypothesis import settings, strategies as st

from core.models import Modelo, Proyecto, Tecnologia
from core.pagos import PagoLineal, PagoRepartoIgualitario

PROPIEDADES = settings(max_examples=200, deadline=None, derandomize=True)
PROPIEDADES_COSTOSAS = settings(max_examples=40, deadline=None, derandomize=True)

NOMBRES = ('i', 'j', 'k', 'm', 'h')
ACTIVIDADES = ('a', 'b')


@st.composite
def modelos_v0(draw, max_agentes=5, max_proyectos=8):
    """
    Modelos con n ≤ 5 y |P| ≤ 8. Pago lineal o de reparto igualitario:
    ambos cumplen v0 porque todo proyecto aporta un valor positivo a sus miembros.
    """
    n = draw(st.integers(min_value=2, max_value=max_agentes))
    dotaciones = tuple(draw(st.lists(st.integers(1, 3), min_size=n, max_size=n)))
    vectores = st.tuples(*[st.integers(0, w) for w in dotaciones]).filter(any)
    proyectos = draw(st.lists(
        st.tuples(st.sampled_from(ACTIVIDADES), vectores),
        min_size=1, max_size=max_proyectos, unique=True,
    ))
    if draw(st.booleans()):
        pago = PagoLineal(Fraction(draw(st.integers(1, 4)), draw(st.integers(1, 4))))
    else:
        pago = PagoRepartoIgualitario()
    pesos = None
    if draw(st.booleans()):
        pesos = tuple(Fraction(q) for q in draw(st.lists(st.integers(1, 5), min_size=len(proyectos),
                                                         max_size=len(proyectos))))
    return Modelo(
        nombres_agentes=NOMBRES[:n],
        dotaciones=dotaciones,
        actividades=ACTIVIDADES,
        tecnologia=Tecnologia(tuple(Proyecto(a, t) for a, t in proyectos)),
        pago=pago,
        pesos_sorteo=pesos,
        nombre='aleatorio',
    )


@st.composite
def matrices_costos(draw, max_nodos=6):
    n = draw(st.integers(min_value=1, max_value=max_nodos))
    filas = draw(st.lists(st.lists(st.integers(0, 9), min_size=n, max_size=n), min_size=n, max_size=n))
    raiz = draw(st.integers(0, n - 1))
    return filas, raiz


@st.composite
def modelos_t1_v2(draw, max_agentes=5, max_proyectos=8):
    """Tiempos en {0, 1} y pago lineal: cumplen t1 y v2"""
    n = draw(st.integers(min_value=2, max_value=max_agentes))
    dotaciones = tuple(draw(st.lists(st.integers(1, 3), min_size=n, max_size=n)))
    vectores = st.tuples(*[st.integers(0, 1)] * n).filter(any)
    proyectos = draw(st.lists(
        st.tuples(st.sampled_from(ACTIVIDADES), vectores),
        min_size=1, max_size=max_proyectos, unique=True,
    ))
    return Modelo(
        nombres_agentes=NOMBRES[:n],
        dotaciones=dotaciones,
        actividades=ACTIVIDADES,
        tecnologia=Tecnologia(tuple(Proyecto(a, t) for a, t in proyectos)),
        pago=PagoLineal(Fraction(draw(st.integers(1, 4)), draw(st.integers(1, 4)))),
        nombre='aleatorio_t1_v2',
    )
