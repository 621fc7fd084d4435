"""
Simulación Monte Carlo de la dinámica perturbada.

Cada réplica usa su propio generador PCG64 con semilla (semilla + réplica),
de modo que el resultado combinado no depende del orden de ejecución.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from config import BURN_IN_FRACCION, ESQUEMAS_PERTURBACION, TAMANO_BLOQUE_SIMULACION
from core.dinamica import tabla_adiciones
from core.errores import ErrorConfiguracion
from core.models import Estado, Modelo, miembros
from core.reticula import EspacioEstados

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConfiguracionSimulacion:
    epsilon: float
    pasos: int
    semilla: int = 0
    esquema: str = 'uniform-destructive'
    burn_in: Optional[int] = None
    replicas: int = 1
    max_workers: Optional[int] = None
    inicial: Estado = 0

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ErrorConfiguracion(f"epsilon debe estar en (0, 1), se recibió {self.epsilon}")
        if self.esquema not in ESQUEMAS_PERTURBACION:
            raise ErrorConfiguracion(f"Esquema de perturbación desconocido: {self.esquema}")
        if self.pasos < 1:
            raise ErrorConfiguracion("La cantidad de pasos debe ser positiva")
        if self.replicas < 1:
            raise ErrorConfiguracion("La cantidad de réplicas debe ser positiva")
        if self.burn_in is None:
            object.__setattr__(self, 'burn_in', int(self.pasos * BURN_IN_FRACCION))
        if not 0 <= self.burn_in < self.pasos:
            raise ErrorConfiguracion(f"burn_in debe estar en [0, {self.pasos}), se recibió {self.burn_in}")

    def to_dict(self):
        return {
            'epsilon': repr(self.epsilon),
            'scheme': self.esquema,
            'steps': self.pasos,
            'burn_in': self.burn_in,
            'seed': self.semilla,
            'replicas': self.replicas,
        }


@dataclass(frozen=True)
class ReporteOcupacion:
    """Frecuencias de visita posteriores al burn-in, por estado y por clase"""
    frecuencias: np.ndarray
    por_clase: Dict[str, float]
    configuracion: ConfiguracionSimulacion
    espacio: EspacioEstados
    distancia_tv: Optional[float] = None

    def estado_modal(self) -> Estado:
        return self.espacio.estados[int(np.argmax(self.frecuencias))]

    def clase_modal(self) -> str:
        return max(self.por_clase.items(), key=lambda par: par[1])[0]

    def to_dict(self):
        visitados = np.flatnonzero(self.frecuencias)
        datos = {
            'config': self.configuracion.to_dict(),
            'frequencies': [
                {'state': miembros(self.espacio.estados[a]), 'frequency': repr(float(self.frecuencias[a]))}
                for a in visitados
            ],
            'class_frequencies': {clase: repr(f) for clase, f in self.por_clase.items()},
            'modal_class': self.clase_modal(),
        }
        if self.distancia_tv is not None:
            datos['tv_distance'] = repr(self.distancia_tv)
        return datos


# ── Réplicas ───────────────────────────────────────────────────────────────────

def _simular_replica(estados: Sequence[Estado], indice: Dict[Estado, int], adiciones: List[List[int]],
                     acumulada: np.ndarray, config: ConfiguracionSimulacion, replica: int) -> np.ndarray:
    """Conteo de visitas de una réplica; función de módulo para poder enviarla a otro proceso"""
    rng = np.random.Generator(np.random.PCG64(config.semilla + replica))
    cantidad_proyectos = len(adiciones[0])
    uniforme = config.esquema == 'uniform'
    try:
        a = indice[config.inicial]
    except KeyError:
        raise ErrorConfiguracion(f"El estado inicial {miembros(config.inicial)} no es factible") from None

    conteos = np.zeros(len(estados), dtype=np.int64)
    hecho = 0
    while hecho < config.pasos:
        m = min(TAMANO_BLOQUE_SIMULACION, config.pasos - hecho)
        filas, columnas = np.nonzero(rng.random((m, cantidad_proyectos)) < config.epsilon)
        errores: Dict[int, int] = {}
        for f, c in zip(filas.tolist(), columnas.tolist()):
            errores[f] = errores.get(f, 0) | (1 << c)
        sorteos = np.searchsorted(acumulada, rng.random(m), side='right').tolist()
        visitas = np.empty(m, dtype=np.int64)
        for t in range(m):
            golpeados = errores.get(t)
            if golpeados:
                x = estados[a]
                actual = x & ~golpeados
                if uniforme:
                    creados = golpeados & ~x
                    if creados:
                        for k in rng.permutation(miembros(creados)).tolist():
                            candidato = actual | (1 << k)
                            if candidato in indice:
                                actual = candidato
                a = indice[actual]
            a = adiciones[a][sorteos[t]]
            visitas[t] = a
        inicio = max(config.burn_in - hecho, 0)
        if inicio < m:
            conteos += np.bincount(visitas[inicio:], minlength=len(estados))
        hecho += m
    logger.info(f"Réplica {replica} terminada ({config.pasos} pasos)")
    return conteos


class SimuladorMonteCarlo:
    def __init__(self, modelo: Modelo, espacio: EspacioEstados, utilidades=None):
        self.modelo = modelo
        self.espacio = espacio
        self.adiciones = tabla_adiciones(modelo, espacio, utilidades)
        acumulada = np.cumsum([float(q) for q in modelo.probabilidades_sorteo])
        acumulada[-1] = 1.0
        self.acumulada = acumulada

    def _frecuencias_por_clase(self, frecuencias: np.ndarray) -> Dict[str, float]:
        tabla = pd.DataFrame({
            'clase': [self.espacio.etiqueta_clase(self.espacio.clase(a)) for a in range(len(self.espacio))],
            'frecuencia': frecuencias,
        })
        agrupado = tabla.groupby('clase', sort=False)['frecuencia'].sum()
        return {clase: float(f) for clase, f in agrupado.items() if f > 0}

    def ejecutar(self, config: ConfiguracionSimulacion, referencia: Optional[np.ndarray] = None) -> ReporteOcupacion:
        argumentos = (list(self.espacio.estados), dict(self.espacio.indice), self.adiciones, self.acumulada, config)
        if config.max_workers and config.max_workers > 1 and config.replicas > 1:
            with ProcessPoolExecutor(max_workers=config.max_workers) as pool:
                futuros = [pool.submit(_simular_replica, *argumentos, r) for r in range(config.replicas)]
                conteos = [f.result() for f in futuros]
        else:
            conteos = [_simular_replica(*argumentos, r) for r in range(config.replicas)]

        # réplicas con igual cantidad de pasos medidos: el promedio ponderado es la media
        frecuencias = np.mean([c / c.sum() for c in conteos], axis=0)
        distancia = comparar_ocupacion(frecuencias, referencia) if referencia is not None else None
        return ReporteOcupacion(
            frecuencias=frecuencias,
            por_clase=self._frecuencias_por_clase(frecuencias),
            configuracion=config,
            espacio=self.espacio,
            distancia_tv=distancia,
        )


def comparar_ocupacion(reporte, referencia) -> float:
    """Distancia de variación total ½Σ|π̂ − π|"""
    empirica = reporte.frecuencias if isinstance(reporte, ReporteOcupacion) else np.asarray(reporte, dtype=float)
    referencia = np.asarray(referencia, dtype=float)
    if empirica.shape != referencia.shape:
        raise ErrorConfiguracion(
            f"Distribuciones de distinta dimensión: {empirica.shape[0]} y {referencia.shape[0]}"
        )
    return float(0.5 * np.abs(empirica - referencia).sum())
