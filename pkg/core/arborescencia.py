"""
Arborescencias de costo mínimo sobre digrafos completos densos.

Convención: pesos[u, v] es el costo del arco u -> v; una arborescencia con
raíz r asigna a cada nodo v != r exactamente un arco entrante (su padre).
"""

import itertools
import logging

import numpy as np

logger = logging.getLogger(__name__)


def _ciclos(padre: np.ndarray, raiz: int) -> np.ndarray:
    """Componente de ciclo de cada nodo según los punteros padre (-1 fuera de ciclos)"""
    n = len(padre)
    componente = np.full(n, -1, dtype=np.int64)
    marca = np.full(n, -1, dtype=np.int64)
    cantidad = 0
    for inicio in range(n):
        v = inicio
        while v != raiz and marca[v] == -1:
            marca[v] = inicio
            v = padre[v]
        if v != raiz and marca[v] == inicio and componente[v] == -1:
            u = v
            while True:
                componente[u] = cantidad
                u = padre[u]
                if u == v:
                    break
            cantidad += 1
    return componente


def costo_arborescencia_minima(pesos, raiz: int) -> int:
    """
    Chu-Liu/Edmonds con costos reducidos: cada nodo elige su arco entrante
    más barato, se acumula ese costo y los ciclos resultantes se contraen.
    Los empates se resuelven por el menor índice de origen.
    """
    costos = np.array(pesos, dtype=float)
    n = costos.shape[0]
    total = 0.0
    while n > 1:
        np.fill_diagonal(costos, np.inf)
        costos[:, raiz] = np.inf
        padre = np.argmin(costos, axis=0)
        entrada = costos[padre, np.arange(n)]
        entrada[raiz] = 0.0
        if np.isinf(entrada).any():
            raise ValueError("El digrafo no admite una arborescencia con esa raíz")
        total += float(entrada.sum())

        componente = _ciclos(padre, raiz)
        ciclos = int(componente.max()) + 1
        if ciclos == 0:
            break

        # nodos fuera de ciclos conservan su propio índice contraído
        libres = np.flatnonzero(componente == -1)
        componente[libres] = np.arange(ciclos, ciclos + len(libres))
        nuevos = ciclos + len(libres)

        reducidos = costos - entrada[np.newaxis, :]
        origen, destino = np.nonzero(np.isfinite(reducidos))
        contraida = np.full((nuevos, nuevos), np.inf)
        np.minimum.at(contraida, (componente[origen], componente[destino]), reducidos[origen, destino])

        costos = contraida
        raiz = int(componente[raiz])
        n = nuevos
    return int(round(total))


def costo_por_fuerza_bruta(pesos, raiz: int) -> int:
    """Enumera todas las asignaciones de padre y se queda con los árboles válidos"""
    pesos = np.asarray(pesos)
    n = pesos.shape[0]
    otros = [v for v in range(n) if v != raiz]
    mejor = None
    for padres in itertools.product(range(n), repeat=len(otros)):
        asignacion = dict(zip(otros, padres))
        if any(v == p for v, p in asignacion.items()):
            continue
        valido = True
        for v in otros:
            vistos = set()
            while v != raiz:
                if v in vistos:
                    valido = False
                    break
                vistos.add(v)
                v = asignacion[v]
            if not valido:
                break
        if not valido:
            continue
        costo = int(sum(pesos[p, v] for v, p in asignacion.items()))
        if mejor is None or costo < mejor:
            mejor = costo
    return 0 if mejor is None else mejor
