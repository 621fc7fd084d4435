"""
Familias de funciones de pago u_i(x).

Lineal, reparto igualitario y tabla trabajan con racionales exactos
(fractions.Fraction); la familia publicación trabaja con float y sus
comparaciones estrictas usan la tolerancia numérica del modelo.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import ClassVar, Dict, List, Optional, Sequence, Tuple

from core.errores import ErrorConfiguracion, ErrorPrecondicion
from core.models import Estado, Modelo, es_factible, miembros, racional_a_dict

logger = logging.getLogger(__name__)


def supera(a, b, tolerancia: float = 0.0) -> bool:
    """a > b estricto; con valores reales exige superar la tolerancia"""
    if isinstance(a, Rational) and isinstance(b, Rational):
        return a > b
    return a - b > tolerancia


class FuncionPago:
    """Interfaz común de las familias de pago"""
    familia: ClassVar[str] = ''
    exacta: ClassVar[bool] = True

    def validar(self, modelo: Modelo) -> None:
        pass

    def utilidades(self, modelo: Modelo, estado: Estado) -> Tuple:
        raise NotImplementedError

    def utilidad(self, modelo: Modelo, estado: Estado, agente: int):
        return self.utilidades(modelo, estado)[agente]

    def to_dict(self, modelo: Modelo) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PagoLineal(FuncionPago):
    """u_i(x) = v · (proyectos de x en los que participa i)"""
    v: Fraction
    familia: ClassVar[str] = 'linear'

    def __post_init__(self):
        if self.v <= 0:
            raise ErrorConfiguracion(f"El pago lineal requiere v > 0, se recibió {self.v}")

    def utilidades(self, modelo, estado):
        cuentas = [0] * modelo.n
        for k in miembros(estado):
            for i in modelo.proyectos[k].participantes:
                cuentas[i] += 1
        return tuple(self.v * c for c in cuentas)

    def to_dict(self, modelo):
        return {'family': self.familia, 'v': racional_a_dict(self.v)}


@dataclass(frozen=True)
class PagoRepartoIgualitario(FuncionPago):
    """Cada proyecto reparte una unidad en partes iguales entre sus miembros"""
    familia: ClassVar[str] = 'equal_split'

    def utilidades(self, modelo, estado):
        valores = [Fraction(0)] * modelo.n
        for k in miembros(estado):
            equipo = modelo.proyectos[k].participantes
            parte = Fraction(1, len(equipo))
            for i in equipo:
                valores[i] += parte
        return tuple(valores)

    def to_dict(self, modelo):
        return {'family': self.familia}


@dataclass(frozen=True)
class PagoTabla(FuncionPago):
    """Utilidades explícitas por estado, indexadas por los índices ordenados de sus proyectos"""
    entradas: Dict[Tuple[int, ...], Tuple[Fraction, ...]]
    familia: ClassVar[str] = 'table'

    def validar(self, modelo):
        for clave, valores in self.entradas.items():
            if len(valores) != modelo.n:
                raise ErrorConfiguracion(f"La entrada de tabla {list(clave)} no tiene {modelo.n} utilidades")

    def utilidades(self, modelo, estado):
        if not estado:
            return self.entradas.get((), tuple(Fraction(0) for _ in range(modelo.n)))
        clave = tuple(miembros(estado))
        try:
            return self.entradas[clave]
        except KeyError:
            raise ErrorConfiguracion(
                f"La tabla de pagos no cubre el estado {list(clave)} {modelo.etiqueta_estado(estado)}"
            ) from None

    def to_dict(self, modelo):
        return {
            'family': self.familia,
            'entries': [
                {'state': list(clave), 'utilities': [racional_a_dict(u) for u in valores]}
                for clave, valores in sorted(self.entradas.items())
            ]
        }


@dataclass(frozen=True)
class PagoPublicacion(FuncionPago):
    """
    Modelo de publicaciones: cada proyecto de i aporta
    U·φ(p)/Σ_{q∈x}φ(q) + V/|n(p)|·pgood(p).
    phi y pgood en None valen 1 para todos los proyectos.
    """
    U: float
    V: float
    phi: Optional[Tuple[float, ...]] = None
    pgood: Optional[Tuple[float, ...]] = None
    familia: ClassVar[str] = 'publishing'
    exacta: ClassVar[bool] = False

    def __post_init__(self):
        if self.U <= 0 or self.V <= 0:
            raise ErrorConfiguracion("El modelo de publicaciones requiere U > 0 y V > 0")
        if self.phi is not None and any(f <= 0 for f in self.phi):
            raise ErrorConfiguracion("phi debe ser positivo en todos los proyectos")
        if self.pgood is not None and any(not 0 < g <= 1 for g in self.pgood):
            raise ErrorConfiguracion("pgood debe estar en (0, 1] en todos los proyectos")

    def validar(self, modelo):
        cantidad = len(modelo.proyectos)
        for nombre, valores in (('phi', self.phi), ('pgood', self.pgood)):
            if valores is not None and len(valores) != cantidad:
                raise ErrorConfiguracion(f"{nombre} debe tener un valor por proyecto ({cantidad})")

    def fi(self, k: int) -> float:
        return 1.0 if self.phi is None else self.phi[k]

    def bueno(self, k: int) -> float:
        return 1.0 if self.pgood is None else self.pgood[k]

    def utilidades(self, modelo, estado):
        valores = [0.0] * modelo.n
        proyectos = miembros(estado)
        if not proyectos:
            return tuple(valores)
        total_fi = sum(self.fi(k) for k in proyectos)
        for k in proyectos:
            equipo = modelo.proyectos[k].participantes
            aporte = self.U * self.fi(k) / total_fi + self.V / len(equipo) * self.bueno(k)
            for i in equipo:
                valores[i] += aporte
        return tuple(valores)

    def to_dict(self, modelo):
        datos = {'family': self.familia, 'U': repr(self.U), 'V': repr(self.V)}
        if self.phi is not None:
            datos['phi'] = [repr(f) for f in self.phi]
        if self.pgood is not None:
            datos['pgood'] = [repr(g) for g in self.pgood]
        return datos


@dataclass(frozen=True)
class BonoAfinidad:
    """
    Constructor de tablas: cada proyecto vale v para sus miembros, más un
    bono b cuando el equipo es exactamente la pareja designada.
    """
    v: Fraction
    bono: Fraction
    pareja: Tuple[int, int]

    def __post_init__(self):
        if self.v <= 0 or self.bono < 0:
            raise ErrorConfiguracion("BonoAfinidad requiere v > 0 y b ≥ 0")

    def valor(self, modelo: Modelo, k: int) -> Fraction:
        if modelo.proyectos[k].participantes == frozenset(self.pareja):
            return self.v + self.bono
        return self.v

    def construir_tabla(self, modelo: Modelo, estados: Sequence[Estado]) -> PagoTabla:
        entradas = {}
        for estado in estados:
            valores = [Fraction(0)] * modelo.n
            for k in miembros(estado):
                for i in modelo.proyectos[k].participantes:
                    valores[i] += self.valor(modelo, k)
            entradas[tuple(miembros(estado))] = tuple(valores)
        return PagoTabla(entradas)


def evaluar(pago: FuncionPago, modelo: Modelo, estado: Estado, agente: int):
    """u_i(x)"""
    return pago.utilidad(modelo, estado, agente)


def tabla_utilidades(modelo: Modelo, estados: Sequence[Estado]) -> List[Tuple]:
    """Vector de utilidades de cada estado, en el orden recibido"""
    return [modelo.pago.utilidades(modelo, x) for x in estados]


@dataclass(frozen=True)
class MarginalPublicacion:
    directa: float
    forma_cerrada: Optional[float]

    @property
    def aplicable(self) -> bool:
        return self.forma_cerrada is not None

    def coincide(self, tolerancia: float) -> bool:
        return not self.aplicable or abs(self.directa - self.forma_cerrada) <= tolerancia


def verificar_marginal_publicacion(modelo: Modelo, estado: Estado, k: int, agente: int,
                                   factible: Optional[bool] = None) -> MarginalPublicacion:
    """
    Compara u_i(x ∪ {p'}) − u_i(x) calculada por definición con la forma cerrada
    U·φ(p')·Σ_{q∈x, i∉n(q)}φ(q) / ((T + φ(p'))·T) + V·pgood(p')/|n(p')|,
    con T = Σ_{q∈x}φ(q). La forma cerrada no aplica si T = 0 o si i ∉ n(p').
    """
    pago = modelo.pago
    if not isinstance(pago, PagoPublicacion):
        raise ErrorPrecondicion("El chequeo marginal solo aplica a la familia publicación")
    if estado >> k & 1:
        raise ErrorPrecondicion(f"El proyecto {k} ya forma parte del estado")
    nuevo = estado | (1 << k)
    if factible is None:
        factible = es_factible(nuevo, modelo)
    if not factible:
        raise ErrorPrecondicion(f"Agregar el proyecto {k} produce un estado infactible")

    directa = pago.utilidad(modelo, nuevo, agente) - pago.utilidad(modelo, estado, agente)

    proyecto = modelo.proyectos[k]
    total_fi = sum(pago.fi(q) for q in miembros(estado))
    if total_fi == 0 or agente not in proyecto.participantes:
        return MarginalPublicacion(directa, None)
    ajeno = sum(pago.fi(q) for q in miembros(estado) if agente not in modelo.proyectos[q].participantes)
    fi_nuevo = pago.fi(k)
    cerrada = (pago.U * fi_nuevo * ajeno / ((total_fi + fi_nuevo) * total_fi)
               + pago.V * pago.bueno(k) / len(proyecto.participantes))
    return MarginalPublicacion(directa, cerrada)
