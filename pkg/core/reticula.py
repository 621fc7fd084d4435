"""
Enumeración de la retícula X de estados factibles.

La clausura se construye por niveles desde el estado vacío agregando un
proyecto por vez; cada estado guarda sus sucesores de Hasse (estados que se
obtienen agregando un único proyecto factible).
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from config import MAX_ESTADOS
from core.errores import ErrorCapacidad
from core.models import Estado, Modelo, Tecnologia, etiqueta_equipo, miembros

logger = logging.getLogger(__name__)

Clase = Tuple[Tuple[int, ...], ...]


def _clave_orden(estado: Estado):
    return (estado.bit_count(), miembros(estado))


@dataclass(frozen=True)
class EspacioEstados:
    """X enumerado, con estructura de Hasse y los conjuntos M y L (como índices)"""
    estados: Tuple[Estado, ...]
    indice: Dict[Estado, int]
    sucesores: Tuple[Tuple[int, ...], ...]
    maximales: FrozenSet[int]
    max_proyectos: FrozenSet[int]
    por_tamano: Dict[int, Tuple[int, ...]]
    usos: Tuple[Tuple[int, ...], ...]
    tecnologia: Tecnologia
    nombres_agentes: Tuple[str, ...]

    def __len__(self):
        return len(self.estados)

    def tamano(self, idx: int) -> int:
        return self.estados[idx].bit_count()

    def estados_maximales(self) -> FrozenSet[Estado]:
        """M"""
        return frozenset(self.estados[i] for i in self.maximales)

    def estados_max_proyectos(self) -> FrozenSet[Estado]:
        """L"""
        return frozenset(self.estados[i] for i in self.max_proyectos)

    def clase(self, idx: int) -> Clase:
        """
        Clase de equivalencia por reetiquetado de actividades: el multiconjunto
        de vectores de equipo del estado, sin las etiquetas de actividad.
        """
        proyectos = self.tecnologia.proyectos
        return tuple(sorted(proyectos[k].tiempos for k in miembros(self.estados[idx])))

    def etiqueta_clase(self, clase: Clase) -> str:
        return '{' + ','.join(etiqueta_equipo(t, self.nombres_agentes) for t in clase) + '}'

    def clases(self, indices) -> Dict[Clase, List[int]]:
        """Agrupa índices de estados por clase, en orden de aparición"""
        grupos: Dict[Clase, List[int]] = {}
        for idx in sorted(indices):
            grupos.setdefault(self.clase(idx), []).append(idx)
        return grupos


def enumerar_estados(modelo: Modelo, max_estados: Optional[int] = None) -> EspacioEstados:
    """Clausura en anchura desde ∅ bajo agregados de un proyecto, sin duplicados"""
    limite = max_estados or modelo.max_estados or MAX_ESTADOS
    tecnologia = modelo.tecnologia
    proyectos = tecnologia.proyectos
    dotaciones = modelo.dotaciones
    unica = tecnologia.actividad_unica_por_estado

    usos: Dict[Estado, Tuple[int, ...]] = {0: tuple(0 for _ in dotaciones)}
    hasse: Dict[Estado, List[Estado]] = {0: []}
    nivel = [0]
    while nivel:
        siguiente = []
        for x in nivel:
            uso = usos[x]
            actividades = {proyectos[k].actividad for k in miembros(x)} if unica else ()
            for k, proyecto in enumerate(proyectos):
                bit = 1 << k
                if x & bit:
                    continue
                if unica and proyecto.actividad in actividades:
                    continue
                nuevo = tuple(e + t for e, t in zip(uso, proyecto.tiempos))
                if any(e > w for e, w in zip(nuevo, dotaciones)):
                    continue
                y = x | bit
                hasse[x].append(y)
                if y not in usos:
                    usos[y] = nuevo
                    hasse[y] = []
                    siguiente.append(y)
                    if len(usos) > limite:
                        raise ErrorCapacidad(
                            f"La enumeración superó {limite} estados factibles",
                            limite, 'MAX_ESTADOS / guards.max_states'
                        )
        nivel = siguiente

    estados = tuple(sorted(usos, key=_clave_orden))
    indice = {x: i for i, x in enumerate(estados)}
    sucesores = tuple(tuple(sorted(indice[y] for y in hasse[x])) for x in estados)
    maximales = frozenset(i for i, s in enumerate(sucesores) if not s)
    tope = max(x.bit_count() for x in estados)
    max_proyectos = frozenset(i for i, x in enumerate(estados) if x.bit_count() == tope)
    assert max_proyectos <= maximales

    por_tamano = defaultdict(list)
    for i, x in enumerate(estados):
        por_tamano[x.bit_count()].append(i)

    logger.info(f"Retícula enumerada: {len(estados)} estados, {len(maximales)} maximales, "
                f"máximo de {tope} proyectos")

    return EspacioEstados(
        estados=estados,
        indice=indice,
        sucesores=sucesores,
        maximales=maximales,
        max_proyectos=max_proyectos,
        por_tamano={t: tuple(v) for t, v in por_tamano.items()},
        usos=tuple(usos[x] for x in estados),
        tecnologia=tecnologia,
        nombres_agentes=modelo.nombres_agentes,
    )
