"""
Primitivas del modelo de formación de equipos: agentes, dotaciones,
proyectos, tecnología y estados.

Un estado es un subconjunto de proyectos de la tecnología y se representa
como un entero usado como bitset: el bit k está encendido si el proyecto k
forma parte del estado.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Tuple, TYPE_CHECKING

from config import TOLERANCIA_NUMERICA
from core.errores import ErrorConfiguracion

if TYPE_CHECKING:
    from core.pagos import FuncionPago

Estado = int


def miembros(estado: Estado) -> List[int]:
    """Índices de los proyectos del estado, en orden creciente"""
    indices = []
    k = 0
    while estado:
        if estado & 1:
            indices.append(k)
        estado >>= 1
        k += 1
    return indices


def estado_desde_indices(indices) -> Estado:
    estado = 0
    for k in indices:
        estado |= 1 << k
    return estado


def racional_a_dict(valor: Fraction) -> Dict[str, int]:
    valor = Fraction(valor)
    return {'num': valor.numerator, 'den': valor.denominator}


@dataclass(frozen=True)
class Proyecto:
    """Una actividad ejecutada por un equipo: (a, t)"""
    actividad: str
    tiempos: Tuple[int, ...]

    def __post_init__(self):
        if any(t < 0 for t in self.tiempos):
            raise ErrorConfiguracion(f"Tiempos negativos en el proyecto {self.etiqueta()}")
        if not any(self.tiempos):
            raise ErrorConfiguracion(f"El proyecto de la actividad '{self.actividad}' tiene vector de tiempos nulo")

    @property
    def participantes(self) -> FrozenSet[int]:
        return frozenset(i for i, t in enumerate(self.tiempos) if t > 0)

    @property
    def mascara_participantes(self) -> int:
        mascara = 0
        for i, t in enumerate(self.tiempos):
            if t > 0:
                mascara |= 1 << i
        return mascara

    @property
    def horas_totales(self) -> int:
        return sum(self.tiempos)

    def etiqueta(self, nombres: Optional[Tuple[str, ...]] = None) -> str:
        return f"({self.actividad},{etiqueta_equipo(self.tiempos, nombres)})"

    def to_dict(self, nombres: Tuple[str, ...]) -> dict:
        return {
            'activity': self.actividad,
            'time': {nombres[i]: t for i, t in enumerate(self.tiempos) if t > 0}
        }


def etiqueta_equipo(tiempos: Tuple[int, ...], nombres: Optional[Tuple[str, ...]] = None) -> str:
    """Etiqueta compacta de un equipo: 'ij' con tiempos unitarios, 'i1j2' en otro caso"""
    if nombres is None:
        nombres = tuple(str(i) for i in range(len(tiempos)))
    unitario = all(t <= 1 for t in tiempos)
    separador = '' if all(len(n) == 1 for n in nombres) else '-'
    partes = []
    for nombre, t in zip(nombres, tiempos):
        if t > 0:
            partes.append(nombre if unitario else f"{nombre}{t}")
    return separador.join(partes)


def participantes(proyecto: Proyecto) -> FrozenSet[int]:
    """n(p): agentes con tiempo positivo en el proyecto"""
    return proyecto.participantes


def horas_totales(proyecto: Proyecto) -> int:
    """h(p)"""
    return proyecto.horas_totales


@dataclass(frozen=True)
class Tecnologia:
    """Conjunto P de proyectos admitidos, en orden fijo"""
    proyectos: Tuple[Proyecto, ...]
    actividad_unica_por_estado: bool = False

    def __post_init__(self):
        vistos = set()
        for k, proyecto in enumerate(self.proyectos):
            clave = (proyecto.actividad, proyecto.tiempos)
            if clave in vistos:
                raise ErrorConfiguracion(f"Proyecto duplicado en la posición {k}: {proyecto.etiqueta()}")
            vistos.add(clave)
        largos = {len(p.tiempos) for p in self.proyectos}
        if len(largos) > 1:
            raise ErrorConfiguracion("Los vectores de tiempos no tienen todos la misma longitud")

    def __len__(self):
        return len(self.proyectos)


def uso_recursos(estado: Estado, tecnologia: Tecnologia, n: Optional[int] = None) -> Tuple[int, ...]:
    """e(x): suma componente a componente de los tiempos de los proyectos del estado"""
    if n is None:
        n = len(tecnologia.proyectos[0].tiempos) if tecnologia.proyectos else 0
    uso = [0] * n
    for k in miembros(estado):
        for i, t in enumerate(tecnologia.proyectos[k].tiempos):
            uso[i] += t
    return tuple(uso)


def cantidad_proyectos(estado: Estado) -> int:
    """ℓ(x)"""
    return estado.bit_count()


@dataclass(frozen=True)
class Modelo:
    """
    Modelo de formación de equipos (N, w, P, u) junto con la configuración
    de la dinámica y los límites de capacidad propios del modelo.

    pesos_sorteo en None significa sorteo uniforme sobre los proyectos.
    """
    nombres_agentes: Tuple[str, ...]
    dotaciones: Tuple[int, ...]
    actividades: Tuple[str, ...]
    tecnologia: Tecnologia
    pago: 'FuncionPago'
    pesos_sorteo: Optional[Tuple[Fraction, ...]] = None
    tolerancia_numerica: float = TOLERANCIA_NUMERICA
    epsilon: Optional[float] = None
    esquema: Optional[str] = None
    max_estados: Optional[int] = None
    max_agentes_coalicion: Optional[int] = None
    nombre: str = ''

    def __post_init__(self):
        n = len(self.nombres_agentes)
        if len(set(self.nombres_agentes)) != n:
            raise ErrorConfiguracion("Nombres de agentes repetidos")
        if len(self.dotaciones) != n:
            raise ErrorConfiguracion("La cantidad de dotaciones no coincide con la de agentes")
        for nombre, w in zip(self.nombres_agentes, self.dotaciones):
            if int(w) != w or w < 1:
                raise ErrorConfiguracion(f"La dotación del agente '{nombre}' debe ser un entero positivo")
        for k, proyecto in enumerate(self.tecnologia.proyectos):
            if len(proyecto.tiempos) != n:
                raise ErrorConfiguracion(f"El proyecto {k} no define tiempos para los {n} agentes")
            if proyecto.actividad not in self.actividades:
                raise ErrorConfiguracion(f"El proyecto {k} usa la actividad desconocida '{proyecto.actividad}'")
            for i, (t, w) in enumerate(zip(proyecto.tiempos, self.dotaciones)):
                if t > w:
                    raise ErrorConfiguracion(
                        f"El proyecto {k} {proyecto.etiqueta(self.nombres_agentes)} requiere {t} "
                        f"unidades de '{self.nombres_agentes[i]}', cuya dotación es {w}"
                    )
        if self.pesos_sorteo is not None:
            if len(self.pesos_sorteo) != len(self.tecnologia.proyectos):
                raise ErrorConfiguracion("draw_weights debe tener un peso por proyecto")
            if any(q <= 0 for q in self.pesos_sorteo):
                raise ErrorConfiguracion("Todos los pesos de sorteo deben ser positivos")
        if self.tolerancia_numerica < 0:
            raise ErrorConfiguracion("La tolerancia numérica no puede ser negativa")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise ErrorConfiguracion(f"epsilon debe estar en (0, 1), se recibió {self.epsilon}")
        self.pago.validar(self)

    @property
    def n(self) -> int:
        return len(self.nombres_agentes)

    @property
    def proyectos(self) -> Tuple[Proyecto, ...]:
        return self.tecnologia.proyectos

    @cached_property
    def probabilidades_sorteo(self) -> Tuple[Fraction, ...]:
        """Distribución de sorteo normalizada (exacta)"""
        cantidad = len(self.proyectos)
        if self.pesos_sorteo is None:
            return tuple(Fraction(1, cantidad) for _ in range(cantidad))
        total = sum(self.pesos_sorteo)
        return tuple(Fraction(q) / total for q in self.pesos_sorteo)

    @cached_property
    def mascaras_participantes(self) -> Tuple[int, ...]:
        return tuple(p.mascara_participantes for p in self.proyectos)

    def etiqueta_estado(self, estado: Estado) -> str:
        return '{' + ','.join(self.proyectos[k].etiqueta(self.nombres_agentes) for k in miembros(estado)) + '}'

    def to_dict(self) -> dict:
        """Documento ModelFile equivalente (ver utils.cargador_modelo)"""
        datos = {}
        if self.nombre:
            datos['name'] = self.nombre
        datos['agents'] = [
            {'name': nombre, 'endowment': w}
            for nombre, w in zip(self.nombres_agentes, self.dotaciones)
        ]
        datos['activities'] = list(self.actividades)
        datos['projects'] = [p.to_dict(self.nombres_agentes) for p in self.proyectos]
        datos['payoff'] = self.pago.to_dict(self)
        datos['flags'] = {'unique_activity_per_state': self.tecnologia.actividad_unica_por_estado}
        dinamica = {}
        if self.pesos_sorteo is not None:
            dinamica['draw_weights'] = [racional_a_dict(q) for q in self.pesos_sorteo]
        if self.epsilon is not None:
            dinamica['epsilon'] = repr(self.epsilon)
        if self.esquema is not None:
            dinamica['scheme'] = self.esquema
        if dinamica:
            datos['dynamics'] = dinamica
        limites = {}
        if self.max_estados is not None:
            limites['max_states'] = self.max_estados
        if self.max_agentes_coalicion is not None:
            limites['max_coalition_n'] = self.max_agentes_coalicion
        if limites:
            datos['guards'] = limites
        if self.tolerancia_numerica != TOLERANCIA_NUMERICA:
            datos['numeric_tolerance'] = repr(self.tolerancia_numerica)
        return datos


def es_factible(estado: Estado, modelo: Modelo) -> bool:
    """e(x) ≤ w y, si la bandera está activa, actividades distintas dentro del estado"""
    uso = uso_recursos(estado, modelo.tecnologia, modelo.n)
    if any(e > w for e, w in zip(uso, modelo.dotaciones)):
        return False
    if modelo.tecnologia.actividad_unica_por_estado:
        actividades = [modelo.proyectos[k].actividad for k in miembros(estado)]
        if len(actividades) != len(set(actividades)):
            return False
    return True
