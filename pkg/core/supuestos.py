"""
Chequeo de los supuestos estructurales (t1, s1, s2) y de pagos (v0, v1, v2).
Los supuestos de pagos cuantifican sobre X, por eso requieren la retícula.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from core.models import Modelo, miembros
from core.pagos import supera, tabla_utilidades
from core.reticula import EspacioEstados


@dataclass(frozen=True)
class ReporteSupuestos:
    t1: bool
    s1: bool
    k: Optional[int]
    s2: bool
    v0: bool
    v1: bool
    v2: bool
    v: Optional[object]
    actividad_unica_por_estado: bool = False

    def cumple(self, *nombres: str) -> bool:
        return all(getattr(self, nombre) for nombre in nombres)

    def to_dict(self):
        return {
            't1': self.t1, 's1': self.s1, 'k': self.k, 's2': self.s2,
            'v0': self.v0, 'v1': self.v1, 'v2': self.v2, 'v': self.v,
            'unique_activity_per_state': self.actividad_unica_por_estado,
        }


def _iguales(a, b, exacta: bool, tolerancia: float) -> bool:
    return a == b if exacta else abs(a - b) <= tolerancia


def verificar_supuestos(modelo: Modelo, espacio: EspacioEstados, utilidades=None) -> ReporteSupuestos:
    proyectos = modelo.proyectos
    exacta = modelo.pago.exacta
    tol = modelo.tolerancia_numerica

    t1 = all(t in (0, 1) for p in proyectos for t in p.tiempos)
    tamanos = {len(p.participantes) for p in proyectos}
    s1 = len(tamanos) <= 1
    k = next(iter(tamanos)) if len(tamanos) == 1 else None
    s2 = s1 and k in (2, None)

    if utilidades is None:
        utilidades = tabla_utilidades(modelo, espacio.estados)

    # v0: todo agregado factible mejora estrictamente a cada miembro del nuevo proyecto
    v0 = True
    for a, sucesores in enumerate(espacio.sucesores):
        x = espacio.estados[a]
        for b in sucesores:
            nuevo = (espacio.estados[b] & ~x).bit_length() - 1
            if not all(supera(utilidades[b][i], utilidades[a][i], tol)
                       for i in proyectos[nuevo].participantes):
                v0 = False
                break
        if not v0:
            break

    v1 = all(_iguales(sum(u), x.bit_count(), exacta, tol)
             for x, u in zip(espacio.estados, utilidades))

    # v2: se ajusta v con el primer estado no vacío y se verifica globalmente
    v = None
    v2 = True
    for x, u in zip(espacio.estados, utilidades):
        if not x:
            continue
        i = next(iter(proyectos[miembros(x)[0]].participantes))
        cuenta = sum(1 for q in miembros(x) if i in proyectos[q].participantes)
        v = u[i] / cuenta if not exacta else Fraction(u[i]) / cuenta
        break
    if v is not None:
        if not supera(v, 0, tol):
            v2 = False
        else:
            for x, u in zip(espacio.estados, utilidades):
                cuentas = [0] * modelo.n
                for q in miembros(x):
                    for i in proyectos[q].participantes:
                        cuentas[i] += 1
                if not all(_iguales(u[i], v * cuentas[i], exacta, tol) for i in range(modelo.n)):
                    v2 = False
                    break
    if not v2:
        v = None

    return ReporteSupuestos(
        t1=t1, s1=s1, k=k, s2=s2, v0=v0, v1=v1, v2=v2, v=v,
        actividad_unica_por_estado=modelo.tecnologia.actividad_unica_por_estado,
    )
