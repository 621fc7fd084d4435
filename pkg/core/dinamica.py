"""
Dinámica miope por equipos: cadena no perturbada, cadena perturbada con
errores destructivos, resistencias, potenciales estocásticos y variantes con
costos de salida (dinámica por coaliciones).

Las filas de las cadenas se guardan como diccionarios {destino: probabilidad};
las de la cadena no perturbada y las de la cadena por coaliciones son
racionales exactos.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy import sparse

from config import (
    LIMITE_SOLVER_DIRECTO, MAX_ITERACIONES_POTENCIA, TOLERANCIA_FILAS,
    TOLERANCIA_POTENCIA, TOLERANCIA_RESIDUO,
)
from core.arborescencia import costo_arborescencia_minima
from core.errores import ErrorCapacidad, ErrorConfiguracion, ErrorPrecondicion
from core.estabilidad import AnalizadorEstabilidad
from core.models import Estado, Modelo, miembros
from core.pagos import supera, tabla_utilidades
from core.reticula import EspacioEstados
from core.supuestos import verificar_supuestos

logger = logging.getLogger(__name__)

Fila = Dict[int, object]


# ==================== ESTRUCTURAS ====================

@dataclass(frozen=True)
class AnalisisCadena:
    """Cadena de Markov sobre X con su clasificación de estados"""
    filas: Tuple[Fila, ...]
    absorbentes: FrozenSet[int]
    recurrentes: FrozenSet[int]
    esquema: str
    exacta: bool = True

    def __len__(self):
        return len(self.filas)

    def a_csr(self) -> sparse.csr_matrix:
        n = len(self.filas)
        origen, destino, valores = [], [], []
        for a, fila in enumerate(self.filas):
            for b, p in fila.items():
                origen.append(a)
                destino.append(b)
                valores.append(float(p))
        return sparse.csr_matrix((valores, (origen, destino)), shape=(n, n))

    def grafo(self) -> nx.DiGraph:
        grafo = nx.DiGraph()
        grafo.add_nodes_from(range(len(self.filas)))
        grafo.add_edges_from((a, b) for a, fila in enumerate(self.filas) for b, p in fila.items() if p > 0)
        return grafo

    def elimina_proyectos(self, espacio: EspacioEstados) -> bool:
        """True si alguna transición con probabilidad positiva quita un proyecto"""
        return any(
            p > 0 and espacio.estados[a] & ~espacio.estados[b]
            for a, fila in enumerate(self.filas) for b, p in fila.items()
        )


@dataclass(frozen=True)
class GrafoResistencias:
    """r*(x, x') sobre los estados absorbentes (índices de X)"""
    nodos: Tuple[int, ...]
    pesos: np.ndarray

    def resistencia(self, origen: int, destino: int) -> int:
        return int(self.pesos[self.nodos.index(origen), self.nodos.index(destino)])


@dataclass(frozen=True)
class TablaPotenciales:
    gamma: Dict[int, int]
    ss: FrozenSet[int]


@dataclass(frozen=True)
class ResultadoSS:
    """SS por arborescencias junto con L, para contrastarlos"""
    por_arborescencias: FrozenSet[Estado]
    max_proyectos: FrozenSet[Estado]
    potenciales: TablaPotenciales
    espacio: EspacioEstados

    @property
    def coinciden(self) -> bool:
        return self.por_arborescencias == self.max_proyectos

    def to_dict(self):
        orden = lambda estados: sorted((miembros(x) for x in estados), key=lambda m: (len(m), m))
        return {
            'ss': orden(self.por_arborescencias),
            'max_project_states': orden(self.max_proyectos),
            'equal': self.coinciden,
            'potentials': [
                {'state': miembros(self.espacio.estados[a]), 'gamma': g}
                for a, g in sorted(self.potenciales.gamma.items())
            ],
        }


# ==================== FUNCIONES SOBRE CADENAS ====================

def clasificar_recurrentes(filas: Sequence[Fila]) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """(absorbentes, recurrentes) por condensación en componentes fuertemente conexas"""
    grafo = nx.DiGraph()
    grafo.add_nodes_from(range(len(filas)))
    grafo.add_edges_from((a, b) for a, fila in enumerate(filas) for b, p in fila.items() if p > 0)
    cerradas = clases_cerradas(grafo)
    recurrentes = frozenset().union(*cerradas)
    absorbentes = frozenset(a for clase in cerradas if len(clase) == 1 for a in clase)
    return absorbentes, recurrentes


def _metodo_potencia(matriz: sparse.csr_matrix) -> np.ndarray:
    n = matriz.shape[0]
    transpuesta = matriz.T.tocsr()
    pi = np.full(n, 1.0 / n)
    for iteracion in range(MAX_ITERACIONES_POTENCIA):
        siguiente = transpuesta @ pi
        siguiente /= siguiente.sum()
        if np.abs(siguiente - pi).sum() < TOLERANCIA_POTENCIA:
            logger.info(f"Iteración de potencia convergió en {iteracion + 1} pasos")
            return siguiente
        pi = siguiente
    raise ErrorCapacidad("La iteración de potencia no convergió", MAX_ITERACIONES_POTENCIA,
                         'MAX_ITERACIONES_POTENCIA')


def _eliminacion_gth(matriz: np.ndarray) -> np.ndarray:
    """Grassmann-Taksar-Heyman: eliminación sin restas, estable para cadenas casi desacopladas"""
    a = np.array(matriz, dtype=float)
    n = a.shape[0]
    for k in range(n - 1, 0, -1):
        s = a[k, :k].sum()
        a[:k, k] /= s
        a[:k, :k] += np.outer(a[:k, k], a[k, :k])
    pi = np.zeros(n)
    pi[0] = 1.0
    for k in range(1, n):
        pi[k] = pi[:k] @ a[:k, k]
    return pi / pi.sum()


def clases_cerradas(grafo: nx.DiGraph) -> List[FrozenSet[int]]:
    """Componentes fuertemente conexas sin arcos de salida (sumideros de la condensación)"""
    condensado = nx.condensation(grafo)
    return [
        frozenset(condensado.nodes[c]['members'])
        for c in condensado.nodes if condensado.out_degree(c) == 0
    ]


def distribucion_estacionaria(cadena: AnalisisCadena) -> np.ndarray:
    """
    π con πD = π y Σπ = 1. Exige una única clase cerrada; los estados
    transitorios (∅ en la cadena perturbada, que no se vuelve a visitar)
    reciben masa 0.
    """
    n = len(cadena)
    if n == 1:
        return np.ones(1)
    cerradas = clases_cerradas(cadena.grafo())
    if len(cerradas) > 1:
        raise ErrorPrecondicion(
            f"La cadena tiene {len(cerradas)} clases cerradas: la distribución estacionaria no es única"
        )
    recurrentes = np.array(sorted(cerradas[0]))
    matriz = cadena.a_csr()
    restringida = matriz[recurrentes][:, recurrentes]
    if len(recurrentes) == 1:
        parcial = np.ones(1)
    elif len(recurrentes) <= LIMITE_SOLVER_DIRECTO:
        parcial = _eliminacion_gth(restringida.toarray())
    else:
        parcial = _metodo_potencia(restringida.tocsr())
    pi = np.zeros(n)
    pi[recurrentes] = parcial
    residuo = float(np.abs(matriz.T @ pi - pi).max())
    if residuo > TOLERANCIA_RESIDUO:
        raise ErrorPrecondicion(f"Residuo estacionario {residuo:.3e} por encima de {TOLERANCIA_RESIDUO}")
    logger.info(f"Distribución estacionaria sobre {len(recurrentes)} de {n} estados (residuo {residuo:.2e})")
    return pi


def tabla_adiciones(modelo: Modelo, espacio: EspacioEstados, utilidades=None) -> List[List[int]]:
    """
    tabla[a][k]: índice de llegada al sortear el proyecto k desde x_a.
    Queda en a si k ya está, si el agregado es infactible o si algún miembro no gana.
    """
    if utilidades is None:
        utilidades = tabla_utilidades(modelo, espacio.estados)
    tolerancia = modelo.tolerancia_numerica
    proyectos = modelo.proyectos
    tabla = []
    for a, x in enumerate(espacio.estados):
        fila = [a] * len(proyectos)
        for b in espacio.sucesores[a]:
            k = (espacio.estados[b] & ~x).bit_length() - 1
            if all(supera(utilidades[b][i], utilidades[a][i], tolerancia) for i in proyectos[k].participantes):
                fila[k] = b
        tabla.append(fila)
    return tabla


# ==================== DINÁMICA ====================

class DinamicaEquipos:
    """Cadenas de Markov del modelo sobre la retícula enumerada"""

    def __init__(self, modelo: Modelo, espacio: EspacioEstados, utilidades=None,
                 analizador: Optional[AnalizadorEstabilidad] = None):
        self.modelo = modelo
        self.espacio = espacio
        self.utilidades = utilidades if utilidades is not None else tabla_utilidades(modelo, espacio.estados)
        self._analizador = analizador
        self._adiciones: Optional[List[List[int]]] = None
        self._no_perturbada: Optional[AnalisisCadena] = None

    @property
    def analizador(self) -> AnalizadorEstabilidad:
        if self._analizador is None:
            self._analizador = AnalizadorEstabilidad(self.modelo, self.espacio, self.utilidades)
        return self._analizador

    @property
    def adiciones(self) -> List[List[int]]:
        if self._adiciones is None:
            self._adiciones = tabla_adiciones(self.modelo, self.espacio, self.utilidades)
        return self._adiciones

    def _exigir_v0(self, operacion: str):
        if not verificar_supuestos(self.modelo, self.espacio, self.utilidades).v0:
            raise ErrorPrecondicion(
                f"{operacion} requiere no saciedad (v0): la forma cerrada de la resistencia no vale sin ella"
            )

    # ── Cadena no perturbada ───────────────────────────────────────────────────

    def _filas_no_perturbadas(self) -> List[Fila]:
        probabilidades = self.modelo.probabilidades_sorteo
        filas = []
        for destinos in self.adiciones:
            fila: Fila = {}
            for k, b in enumerate(destinos):
                fila[b] = fila.get(b, Fraction(0)) + probabilidades[k]
            filas.append(fila)
        return filas

    def cadena_no_perturbada(self) -> AnalisisCadena:
        if self._no_perturbada is None:
            filas = self._filas_no_perturbadas()
            absorbentes, recurrentes = clasificar_recurrentes(filas)
            assert absorbentes <= recurrentes
            logger.info(f"Cadena no perturbada: {len(absorbentes)} absorbentes, {len(recurrentes)} recurrentes")
            self._no_perturbada = AnalisisCadena(tuple(filas), absorbentes, recurrentes, 'unperturbed')
        return self._no_perturbada

    def clasificar_recurrentes(self) -> Tuple[FrozenSet[int], FrozenSet[int]]:
        cadena = self.cadena_no_perturbada()
        return cadena.absorbentes, cadena.recurrentes

    # ── Resistencias y potenciales ─────────────────────────────────────────────

    def resistencia(self, origen: Estado, destino: Estado) -> int:
        """r*(x, x') = ℓ(x) − ℓ(x ∩ x')"""
        return (origen & ~destino).bit_count()

    def grafo_resistencias(self, absorbentes: Optional[FrozenSet[int]] = None) -> GrafoResistencias:
        if absorbentes is None:
            absorbentes = self.cadena_no_perturbada().absorbentes
        nodos = tuple(sorted(absorbentes))
        estados = [self.espacio.estados[a] for a in nodos]
        pesos = np.array([[self.resistencia(x, y) for y in estados] for x in estados], dtype=np.int64)
        return GrafoResistencias(nodos, pesos.reshape(len(nodos), len(nodos)))

    def resistencias_por_caminos(self, nodos: Sequence[int]) -> np.ndarray:
        """
        Resistencias por caminos mínimos: un tick de y a y' cuesta |y ∖ y'|
        cuando y' es factible y agrega a lo sumo un proyecto. Cada tick se
        descompone en eliminaciones unitarias (costo 1) y un agregado (costo 0),
        así que basta el grafo de movimientos unitarios.
        """
        estados = self.espacio.estados
        indice = self.espacio.indice
        grafo = nx.DiGraph()
        grafo.add_nodes_from(range(len(estados)))
        for a, y in enumerate(estados):
            for b in self.espacio.sucesores[a]:
                grafo.add_edge(a, b, weight=0)
            for k in miembros(y):
                grafo.add_edge(a, indice[y & ~(1 << k)], weight=1)
        distancias = np.zeros((len(nodos), len(nodos)), dtype=np.int64)
        for fila, origen in enumerate(nodos):
            largos = nx.single_source_dijkstra_path_length(grafo, origen)
            for columna, destino in enumerate(nodos):
                distancias[fila, columna] = largos[destino]
        return distancias

    def potenciales_estocasticos(self, grafo: GrafoResistencias) -> TablaPotenciales:
        """γ(x): arborescencia mínima orientada hacia x sobre el digrafo completo r*"""
        if not grafo.nodos:
            raise ErrorPrecondicion("No hay estados absorbentes")
        hacia_raiz = grafo.pesos.T
        gamma = {a: costo_arborescencia_minima(hacia_raiz, fila) for fila, a in enumerate(grafo.nodos)}
        minimo = min(gamma.values())
        ss = frozenset(a for a, g in gamma.items() if g == minimo)
        return TablaPotenciales(gamma, ss)

    def _resultado_ss(self, absorbentes: FrozenSet[int]) -> ResultadoSS:
        potenciales = self.potenciales_estocasticos(self.grafo_resistencias(absorbentes))
        resultado = ResultadoSS(
            por_arborescencias=frozenset(self.espacio.estados[a] for a in potenciales.ss),
            max_proyectos=self.espacio.estados_max_proyectos(),
            potenciales=potenciales,
            espacio=self.espacio,
        )
        if not resultado.coinciden:
            logger.warning("SS por arborescencias difiere de L")
        return resultado

    def conjunto_ss(self) -> ResultadoSS:
        self._exigir_v0("El conjunto estocásticamente estable")
        return self._resultado_ss(self.cadena_no_perturbada().absorbentes)

    # ── Cadena perturbada ──────────────────────────────────────────────────────

    def matriz_perturbada(self, epsilon: float, esquema: str = 'uniform-destructive') -> AnalisisCadena:
        """
        Un tick: cada proyecto existente se destruye con probabilidad ε y luego
        se ejecuta un paso no perturbado. Suma exacta sobre los 2^ℓ(x) subconjuntos destruidos.
        """
        if not 0 < epsilon < 1:
            raise ErrorConfiguracion(f"epsilon debe estar en (0, 1), se recibió {epsilon}")
        if esquema == 'uniform':
            raise ErrorPrecondicion(
                "El análisis exacto solo admite el esquema 'uniform-destructive'; "
                "el esquema 'uniform' está disponible en la simulación"
            )
        if esquema != 'uniform-destructive':
            raise ErrorConfiguracion(f"Esquema de perturbación desconocido: {esquema}")

        no_perturbadas = [{b: float(p) for b, p in fila.items()} for fila in self.cadena_no_perturbada().filas]
        indice = self.espacio.indice
        filas = []
        for x in self.espacio.estados:
            largo = x.bit_count()
            fila: Dict[int, float] = {}
            d = x
            while True:
                destruidos = d.bit_count()
                peso = epsilon ** destruidos * (1 - epsilon) ** (largo - destruidos)
                for b, p in no_perturbadas[indice[x & ~d]].items():
                    fila[b] = fila.get(b, 0.0) + peso * p
                if d == 0:
                    break
                d = (d - 1) & x
            if abs(sum(fila.values()) - 1.0) > TOLERANCIA_FILAS:
                raise ErrorPrecondicion("Fila perturbada no estocástica")
            filas.append(fila)
        absorbentes, recurrentes = clasificar_recurrentes(filas)
        logger.info(f"Cadena perturbada (ε={epsilon}): {len(filas)} estados")
        return AnalisisCadena(tuple(filas), absorbentes, recurrentes, esquema, exacta=False)

    def masa_en(self, pi: np.ndarray, estados: FrozenSet[Estado]) -> float:
        return float(sum(pi[self.espacio.indice[x]] for x in estados))

    # ── Costos de salida ───────────────────────────────────────────────────────

    def cadena_coaliciones(self, costo) -> AnalisisCadena:
        """
        Cada tick sortea y y z incluyendo cada proyecto con probabilidad ½; todo
        destino x' ⊆ P resulta equiprobable (2^-|P|). El movimiento ocurre si
        x' ∈ X y alguna coalición gana al costo c.
        """
        if costo < 0:
            raise ErrorConfiguracion("El costo de salida no puede ser negativo")
        umbrales = self.analizador.umbrales_costo()
        if umbrales.definidos and costo < umbrales.c_alto:
            raise ErrorPrecondicion(
                f"La dinámica por coaliciones requiere c ≥ c_high = {umbrales.c_alto} (se recibió {costo})"
            )
        paso = Fraction(1, 2 ** len(self.modelo.proyectos))
        filas = []
        for a in range(len(self.espacio)):
            fila: Fila = {}
            for b in range(len(self.espacio)):
                if b != a and self.analizador.hay_coalicion(a, b, costo):
                    fila[b] = paso
            fila[a] = 1 - paso * len(fila)
            filas.append(fila)
        absorbentes, recurrentes = clasificar_recurrentes(filas)
        logger.info(f"Cadena por coaliciones (c={costo}): {len(absorbentes)} absorbentes")
        return AnalisisCadena(tuple(filas), absorbentes, recurrentes, f'coalition-wise({costo})')

    def ss_con_costos(self, costo) -> ResultadoSS:
        self._exigir_v0("SS(c)")
        cadena = self.cadena_coaliciones(costo)
        if cadena.elimina_proyectos(self.espacio):
            raise ErrorPrecondicion(f"Con c = {costo} la dinámica por coaliciones todavía abandona proyectos")
        return self._resultado_ss(cadena.absorbentes)
