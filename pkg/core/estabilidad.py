"""
Nociones de estabilidad sobre la retícula enumerada:
estabilidad miope por equipos (MTS), estabilidad coalicional con costos de
salida CS(c), umbrales de costo, movimientos de mejora F(x) y conjuntos
estables previsores.

Toda desviación coalicional desde x queda determinada por el estado de
llegada x' ∈ X: y = x ∖ x', z = x' ∖ x. Por eso las búsquedas recorren pares
(x, x') y deducen qué coaliciones pueden ejecutar el cambio.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List, Optional, Tuple

from config import MAX_AGENTES_COALICION, MAX_ESTADOS_PREVISOR, MAX_LIBRES_MINIMALIDAD, MAX_PROYECTOS_BLOQUEO
from core.errores import ErrorCapacidad, ErrorConfiguracion
from core.models import Estado, Modelo, miembros
from core.pagos import supera, tabla_utilidades
from core.reticula import EspacioEstados

logger = logging.getLogger(__name__)


def _agentes(mascara: int) -> Tuple[int, ...]:
    return tuple(i for i in range(mascara.bit_length()) if mascara >> i & 1)


@dataclass(frozen=True)
class OperacionBloqueo:
    """Quíntupla (x, C, y, z, c) que bloquea el estado de origen"""
    origen: Estado
    coalicion: Tuple[int, ...]
    eliminados: Estado
    agregados: Estado
    costo: Fraction
    ganancias: Tuple = ()

    @property
    def destino(self) -> Estado:
        return (self.origen & ~self.eliminados) | self.agregados

    def to_dict(self):
        return {
            'origin': miembros(self.origen),
            'coalition': list(self.coalicion),
            'removed': miembros(self.eliminados),
            'added': miembros(self.agregados),
            'cost': self.costo,
            'gains': list(self.ganancias),
        }


@dataclass(frozen=True)
class UmbralesCosto:
    """
    c_bajo/c_alto: mínimo y máximo sobre BO(0) de la menor ganancia de la
    coalición. Los valores garantizados acotan los regímenes en que
    CS(c) = CS(0) y CS(c) = MTS valen por construcción.
    """
    c_bajo: Optional[object]
    c_alto: Optional[object]
    pares_bloqueo: int
    c_bajo_garantizado: Optional[object] = None
    c_alto_garantizado: Optional[object] = None

    @property
    def definidos(self) -> bool:
        return self.pares_bloqueo > 0

    def to_dict(self):
        return {
            'c_low': self.c_bajo,
            'c_high': self.c_alto,
            'defined': self.definidos,
            'defined_over': self.pares_bloqueo,
            'c_low_guaranteed': self.c_bajo_garantizado,
            'c_high_guaranteed': self.c_alto_garantizado,
        }


@dataclass(frozen=True)
class MovimientoMejora:
    destino: Estado
    coalicion: Tuple[int, ...]


@dataclass(frozen=True)
class ConjuntoPrevisor:
    """S junto con la certificación de las condiciones (i), (ii) y (iii); None = no verificada"""
    miembros: FrozenSet[Estado]
    certificado: Tuple[Optional[bool], Optional[bool], Optional[bool]] = field(default=(None, None, None))

    def to_dict(self):
        return {
            'members': sorted((miembros(x) for x in self.miembros), key=lambda m: (len(m), m)),
            'certified': {'i': self.certificado[0], 'ii': self.certificado[1], 'iii': self.certificado[2]},
        }


class AnalizadorEstabilidad:
    """Análisis de estabilidad de un modelo sobre su retícula"""

    def __init__(self, modelo: Modelo, espacio: EspacioEstados, utilidades=None):
        self.modelo = modelo
        self.espacio = espacio
        self.tolerancia = modelo.tolerancia_numerica
        self.utilidades = utilidades if utilidades is not None else tabla_utilidades(modelo, espacio.estados)
        self._mascaras = modelo.mascaras_participantes
        self._agentes_en = []
        self._cuentas = []
        for x in espacio.estados:
            union = 0
            cuentas = [0] * modelo.n
            for k in miembros(x):
                union |= self._mascaras[k]
                for i in modelo.proyectos[k].participantes:
                    cuentas[i] += 1
            self._agentes_en.append(union)
            self._cuentas.append(tuple(cuentas))
        self._movimientos: Optional[List[List[Tuple[int, Tuple[int, ...]]]]] = None

    # ==================== HELPERS ====================

    def _indice(self, estado: Estado) -> int:
        try:
            return self.espacio.indice[estado]
        except KeyError:
            raise ErrorConfiguracion(f"El estado {miembros(estado)} no es factible") from None

    def _positivo(self, valor) -> bool:
        return supera(valor, 0, self.tolerancia)

    def _verificar_limites(self):
        limite_n = self.modelo.max_agentes_coalicion or MAX_AGENTES_COALICION
        if self.modelo.n > limite_n:
            raise ErrorCapacidad(f"La búsqueda de bloqueos admite hasta {limite_n} agentes (n = {self.modelo.n})",
                                 limite_n, 'MAX_AGENTES_COALICION / guards.max_coalition_n')
        if len(self.modelo.proyectos) > MAX_PROYECTOS_BLOQUEO:
            raise ErrorCapacidad(f"La búsqueda de bloqueos admite hasta {MAX_PROYECTOS_BLOQUEO} proyectos",
                                 MAX_PROYECTOS_BLOQUEO, 'MAX_PROYECTOS_BLOQUEO')

    def _ganancias(self, a: int, b: int, costo) -> Tuple[int, int, List, Tuple[int, ...]]:
        """(y, z, ganancias netas, cuentas de y) del paso x_a -> x_b"""
        x, destino = self.espacio.estados[a], self.espacio.estados[b]
        y = x & ~destino
        z = destino & ~x
        cuentas_y = self._cuentas[self.espacio.indice[y]]
        origen_u, destino_u = self.utilidades[a], self.utilidades[b]
        if costo:
            ganancias = [destino_u[i] - origen_u[i] - costo * cuentas_y[i] for i in range(self.modelo.n)]
        else:
            ganancias = [destino_u[i] - origen_u[i] for i in range(self.modelo.n)]
        return y, z, ganancias, cuentas_y

    def _requisitos(self, y: int, z: int, ganadores: int) -> Optional[Tuple[int, List[int]]]:
        """
        Agentes obligatorios (miembros de z) y proyectos de y que la coalición
        todavía debe tocar; None si ninguna coalición de ganadores sirve.
        """
        necesarios = self._agentes_en[self.espacio.indice[z]]
        if necesarios & ~ganadores:
            return None
        pendientes = [self._mascaras[k] for k in miembros(y) if not self._mascaras[k] & necesarios]
        if any(not m & ganadores for m in pendientes):
            return None
        return necesarios, pendientes

    def _ganadores(self, ganancias) -> int:
        mascara = 0
        for i, g in enumerate(ganancias):
            if self._positivo(g):
                mascara |= 1 << i
        return mascara

    def hay_coalicion(self, a: int, b: int, costo=0) -> bool:
        y, z, ganancias, _ = self._ganancias(a, b, costo)
        return self._requisitos(y, z, self._ganadores(ganancias)) is not None

    def _coalicion_minima(self, a: int, b: int, costo=0) -> Optional[Tuple[int, ...]]:
        """Coalición más chica (y luego lexicográficamente menor) que ejecuta x_a -> x_b"""
        y, z, ganancias, _ = self._ganancias(a, b, costo)
        ganadores = self._ganadores(ganancias)
        requisitos = self._requisitos(y, z, ganadores)
        if requisitos is None:
            return None
        necesarios, pendientes = requisitos
        base = _agentes(necesarios)
        if not pendientes:
            return base
        candidatos = _agentes(ganadores & ~necesarios)
        for tamano in range(1, len(candidatos) + 1):
            for combinacion in itertools.combinations(candidatos, tamano):
                mascara = sum(1 << i for i in combinacion)
                if all(m & mascara for m in pendientes):
                    return tuple(sorted(base + combinacion))
        return None

    # ==================== MTS ====================

    def es_mts(self, estado: Estado) -> bool:
        a = self._indice(estado)
        u = self.utilidades[a]
        proyectos = self.modelo.proyectos
        # (i) ningún miembro prefiere estrictamente x ∖ {p}
        for k in miembros(estado):
            sin_p = self.utilidades[self.espacio.indice[estado & ~(1 << k)]]
            if any(self._positivo(sin_p[i] - u[i]) for i in proyectos[k].participantes):
                return False
        # (ii) ningún proyecto agregable mejora estrictamente a todos sus miembros
        for b in self.espacio.sucesores[a]:
            k = (self.espacio.estados[b] & ~estado).bit_length() - 1
            if all(self._positivo(self.utilidades[b][i] - u[i]) for i in proyectos[k].participantes):
                return False
        return True

    def conjunto_mts(self) -> FrozenSet[Estado]:
        return frozenset(x for x in self.espacio.estados if self.es_mts(x))

    # ==================== ESTABILIDAD COALICIONAL ====================

    def buscar_operacion_bloqueo(self, estado: Estado, costo=0) -> Optional[OperacionBloqueo]:
        """
        Testigo de bloqueo con orden determinístico: coalición más chica,
        luego lexicográfica, luego y, luego z.
        """
        self._verificar_limites()
        if costo < 0:
            raise ErrorConfiguracion("El costo de salida no puede ser negativo")
        a = self._indice(estado)
        mejor = None
        for b, destino in enumerate(self.espacio.estados):
            if b == a:
                continue
            coalicion = self._coalicion_minima(a, b, costo)
            if coalicion is None:
                continue
            clave = (len(coalicion), coalicion, miembros(estado & ~destino), miembros(destino & ~estado))
            if mejor is None or clave < mejor[0]:
                mejor = (clave, b, coalicion)
        if mejor is None:
            return None
        _, b, coalicion = mejor
        y, z, ganancias, _ = self._ganancias(a, b, costo)
        return OperacionBloqueo(
            origen=estado, coalicion=coalicion, eliminados=y, agregados=z,
            costo=costo, ganancias=tuple(ganancias[i] for i in coalicion),
        )

    def esta_bloqueado(self, estado: Estado, costo=0) -> bool:
        a = self._indice(estado)
        return any(self.hay_coalicion(a, b, costo) for b in range(len(self.espacio)) if b != a)

    def conjunto_cs(self, costo=0) -> FrozenSet[Estado]:
        """CS(c): estados sin operación de bloqueo al costo c"""
        self._verificar_limites()
        if costo < 0:
            raise ErrorConfiguracion("El costo de salida no puede ser negativo")
        estables = frozenset(x for x in self.espacio.estados if not self.esta_bloqueado(x, costo))
        assert estables <= self.conjunto_mts(), "CS(c) debe estar contenido en MTS"
        logger.info(f"CS({costo}): {len(estables)} estados")
        return estables

    def umbrales_costo(self) -> UmbralesCosto:
        """Recorre exhaustivamente BO(0) a través de los pares (x, x')"""
        self._verificar_limites()
        c_bajo = c_alto = None
        pares = 0
        kappa = 1
        alto_garantizado = None
        n = len(self.espacio)
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                y, z, ganancias, cuentas_y = self._ganancias(a, b, 0)
                ganadores = self._ganadores(ganancias)
                requisitos = self._requisitos(y, z, ganadores)
                if requisitos is None:
                    continue
                necesarios, pendientes = requisitos
                pares += 1
                agentes = _agentes(ganadores)
                # el mínimo sobre coaliciones válidas se alcanza sumando al peor ganador
                peor = min(ganancias[i] for i in agentes)
                c_bajo = peor if c_bajo is None or peor < c_bajo else c_bajo
                # el máximo se alcanza con el mayor umbral τ que deja una coalición válida
                for tau in sorted({ganancias[i] for i in agentes}, reverse=True):
                    seleccion = 0
                    for i in agentes:
                        if ganancias[i] >= tau:
                            seleccion |= 1 << i
                    if not necesarios & ~seleccion and all(m & seleccion for m in pendientes):
                        c_alto = tau if c_alto is None or tau > c_alto else c_alto
                        break
                if y:
                    kappa = max(kappa, max(cuentas_y[i] for i in agentes))
                    for i in agentes:
                        if cuentas_y[i] and (alto_garantizado is None or ganancias[i] > alto_garantizado):
                            alto_garantizado = ganancias[i]

        if pares == 0:
            logger.warning("BO(0) vacío: los umbrales de costo quedan indefinidos")
            return UmbralesCosto(None, None, 0)
        bajo_garantizado = c_bajo / kappa
        alto_garantizado = c_alto if alto_garantizado is None else max(c_alto, alto_garantizado)
        logger.info(f"Umbrales de costo: c_bajo={c_bajo}, c_alto={c_alto} ({pares} pares en BO(0))")
        return UmbralesCosto(c_bajo, c_alto, pares, bajo_garantizado, alto_garantizado)

    # ==================== MOVIMIENTOS DE MEJORA ====================

    def _todos_los_movimientos(self) -> List[List[Tuple[int, Tuple[int, ...]]]]:
        if self._movimientos is None:
            self._verificar_limites()
            n = len(self.espacio)
            movimientos = []
            for a in range(n):
                fila = []
                for b in range(n):
                    if b == a:
                        continue
                    coalicion = self._coalicion_minima(a, b)
                    if coalicion is not None:
                        fila.append((b, coalicion))
                movimientos.append(fila)
            self._movimientos = movimientos
        return self._movimientos

    def movimientos_mejora(self, estado: Estado) -> List[MovimientoMejora]:
        """F(x) de un paso, cada destino con su coalición testigo C_{x→x'}"""
        a = self._indice(estado)
        if self._movimientos is not None:
            fila = self._movimientos[a]
        else:
            self._verificar_limites()
            fila = []
            for b in range(len(self.espacio)):
                if b != a:
                    coalicion = self._coalicion_minima(a, b)
                    if coalicion is not None:
                        fila.append((b, coalicion))
        return [MovimientoMejora(self.espacio.estados[b], c) for b, c in fila]

    def es_pareto_eficiente(self, estado: Estado) -> Optional[Estado]:
        """None si ningún estado de X domina a x en sentido de Pareto; si no, un testigo"""
        u = self.utilidades[self._indice(estado)]
        for b, otro in enumerate(self.utilidades):
            mejora = False
            domina = True
            for i in range(self.modelo.n):
                if self._positivo(u[i] - otro[i]):
                    domina = False
                    break
                if self._positivo(otro[i] - u[i]):
                    mejora = True
            if domina and mejora:
                return self.espacio.estados[b]
        return None

    # ==================== CONJUNTOS ESTABLES PREVISORES ====================

    def _estructura_previsora(self):
        """Máscaras de F(x) y de los movimientos no disuadidos, indexadas por estado"""
        movimientos = self._todos_los_movimientos()
        n = len(self.espacio)
        f_mascara = [0] * n
        for a, fila in enumerate(movimientos):
            for b, _ in fila:
                f_mascara[a] |= 1 << b
        no_disuadidos = [0] * n
        for a, fila in enumerate(movimientos):
            u = self.utilidades[a]
            for b, coalicion in fila:
                disuadido = any(
                    self._positivo(u[i] - self.utilidades[c][i])
                    for c, _ in movimientos[b] for i in coalicion
                )
                if not disuadido:
                    no_disuadidos[a] |= 1 << b
        return f_mascara, no_disuadidos

    @staticmethod
    def _condiciones(s: int, f_mascara, no_disuadidos) -> Tuple[bool, bool]:
        cond_i = all(not (no_disuadidos[a] & ~s) for a in range(len(f_mascara)) if s >> a & 1)
        cond_ii = all(f_mascara[b] & s for b in range(len(f_mascara)) if not s >> b & 1)
        return cond_i, cond_ii

    def _minimales_dentro(self, universo: int, forzados: int, f_mascara, no_disuadidos,
                          primero: bool = False) -> List[int]:
        """Subconjuntos minimales S (forzados ⊆ S ⊆ universo) que cumplen (i) y (ii)"""
        libres = _agentes(universo & ~forzados)
        encontrados: List[int] = []
        for tamano in range(len(libres) + 1):
            for combinacion in itertools.combinations(libres, tamano):
                s = forzados | sum(1 << a for a in combinacion)
                if any(not m & ~s for m in encontrados):
                    continue
                if all(self._condiciones(s, f_mascara, no_disuadidos)):
                    encontrados.append(s)
                    if primero:
                        return encontrados
        return encontrados

    def conjuntos_estables_previsores(self, modo: str = 'greedy') -> List[ConjuntoPrevisor]:
        f_mascara, no_disuadidos = self._estructura_previsora()
        n = len(self.espacio)
        # sin movimientos de mejora el estado pertenece a todo S por la condición (ii)
        forzados = sum(1 << a for a in range(n) if not f_mascara[a])
        todos = (1 << n) - 1

        def _a_conjunto(s: int, certificado) -> ConjuntoPrevisor:
            return ConjuntoPrevisor(frozenset(self.espacio.estados[a] for a in _agentes(s)), certificado)

        if modo == 'exhaustive':
            if n > MAX_ESTADOS_PREVISOR:
                raise ErrorCapacidad(f"El modo exhaustivo admite hasta {MAX_ESTADOS_PREVISOR} estados (|X| = {n})",
                                     MAX_ESTADOS_PREVISOR, 'MAX_ESTADOS_PREVISOR')
            minimales = self._minimales_dentro(todos, forzados, f_mascara, no_disuadidos)
            return [_a_conjunto(s, (True, True, True)) for s in minimales]

        if modo != 'greedy':
            raise ErrorConfiguracion(f"Modo desconocido: {modo}")

        s = todos
        cambio = True
        while cambio:
            cambio = False
            for a in range(n):
                bit = 1 << a
                if not s & bit or forzados & bit:
                    continue
                candidato = s & ~bit
                if all(self._condiciones(candidato, f_mascara, no_disuadidos)):
                    s = candidato
                    cambio = True

        cond_i, cond_ii = self._condiciones(s, f_mascara, no_disuadidos)
        minimalidad = None
        if (s & ~forzados).bit_count() <= MAX_LIBRES_MINIMALIDAD:
            menor = self._minimales_dentro(s, forzados, f_mascara, no_disuadidos, primero=True)
            s = menor[0]
            minimalidad = True
        else:
            logger.warning("Conjunto previsor demasiado grande para certificar la minimalidad")
        return [_a_conjunto(s, (cond_i, cond_ii, minimalidad))]

    def verificar_previsor(self, conjunto: ConjuntoPrevisor) -> Tuple[bool, bool]:
        """Re-chequeo independiente de (i) y (ii) para un conjunto dado"""
        f_mascara, no_disuadidos = self._estructura_previsora()
        s = sum(1 << self._indice(x) for x in conjunto.miembros)
        return self._condiciones(s, f_mascara, no_disuadidos)
