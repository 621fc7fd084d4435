"""
Verificación de las proposiciones del modelo sobre un caso concreto.

Cada entrada registra qué supuestos se cumplen, si la conclusión se verificó
y un testigo o contraejemplo. Si las hipótesis no valen la entrada queda como
'not_applicable', nunca como 'fail'.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from config import MAX_ABSORBENTES_FUERZA_BRUTA, MAX_ESTADOS_PREVISOR
from core.arborescencia import costo_por_fuerza_bruta
from core.dinamica import DinamicaEquipos
from core.estabilidad import AnalizadorEstabilidad
from core.models import Modelo, miembros
from core.pagos import PagoPublicacion, tabla_utilidades, verificar_marginal_publicacion
from core.reticula import EspacioEstados, enumerar_estados
from core.supuestos import ReporteSupuestos, verificar_supuestos

logger = logging.getLogger(__name__)

APROBADA = 'pass'
NO_APLICA = 'not_applicable'
FALLIDA = 'fail'


@dataclass
class EntradaVerificacion:
    id: str
    hipotesis: Dict[str, bool]
    estado: str
    detalle: str = ''
    testigo: Optional[dict] = None

    def to_dict(self):
        datos = {'id': self.id, 'hypotheses': self.hipotesis, 'status': self.estado, 'detail': self.detalle}
        if self.testigo is not None:
            datos['witness'] = self.testigo
        return datos


@dataclass
class ReporteVerificacion:
    modelo: str
    supuestos: ReporteSupuestos
    entradas: List[EntradaVerificacion] = field(default_factory=list)

    @property
    def fallas(self) -> List[EntradaVerificacion]:
        return [e for e in self.entradas if e.estado == FALLIDA]

    def entrada(self, id: str) -> EntradaVerificacion:
        return next(e for e in self.entradas if e.id == id)

    def to_dict(self):
        return {
            'model': self.modelo,
            'assumptions': self.supuestos.to_dict(),
            'entries': [e.to_dict() for e in self.entradas],
            'failed': len(self.fallas),
        }


def _estados(conjunto) -> List[List[int]]:
    return sorted((miembros(x) for x in conjunto), key=lambda m: (len(m), m))


def _diferencia(a, b) -> dict:
    return {'only_left': _estados(a - b), 'only_right': _estados(b - a)}


class VerificadorProposiciones:
    def __init__(self, modelo: Modelo, espacio: Optional[EspacioEstados] = None):
        self.modelo = modelo
        self.espacio = espacio if espacio is not None else enumerar_estados(modelo)
        self.utilidades = tabla_utilidades(modelo, self.espacio.estados)
        self.supuestos = verificar_supuestos(modelo, self.espacio, self.utilidades)
        self.analizador = AnalizadorEstabilidad(modelo, self.espacio, self.utilidades)
        self.dinamica = DinamicaEquipos(modelo, self.espacio, self.utilidades, self.analizador)
        self.reporte = ReporteVerificacion(modelo.nombre or 'model', self.supuestos)
        self._cache = {}

    # ── Auxiliares ─────────────────────────────────────────────────────────────

    def _hipotesis(self, *nombres) -> Dict[str, bool]:
        return {nombre: bool(getattr(self.supuestos, nombre)) for nombre in nombres}

    def _registrar(self, id: str, hipotesis: Dict[str, bool], exito: Optional[bool], detalle: str = '',
                   testigo: Optional[dict] = None):
        if exito is None:
            estado = NO_APLICA
            logger.warning(f"{id}: hipótesis no satisfechas ({detalle or hipotesis})")
        else:
            estado = APROBADA if exito else FALLIDA
        self.reporte.entradas.append(EntradaVerificacion(id, hipotesis, estado, detalle, testigo))

    def _memo(self, clave, calculo):
        if clave not in self._cache:
            self._cache[clave] = calculo()
        return self._cache[clave]

    def mts(self):
        return self._memo('mts', self.analizador.conjunto_mts)

    def cs(self, costo=0):
        return self._memo(('cs', costo), lambda: self.analizador.conjunto_cs(costo))

    def umbrales(self):
        return self._memo('umbrales', self.analizador.umbrales_costo)

    def costo_alto(self):
        umbrales = self.umbrales()
        return max(umbrales.c_alto, umbrales.c_alto_garantizado)

    # ── Proposiciones ──────────────────────────────────────────────────────────

    def _mts_igual_maximales(self):
        hipotesis = self._hipotesis('v0')
        if not self.supuestos.v0:
            return self._registrar('mts_igual_maximales', hipotesis, None)
        maximales = self.espacio.estados_maximales()
        mts = self.mts()
        self._registrar('mts_igual_maximales', hipotesis, mts == maximales,
                        f"|MTS| = {len(mts)}, |M| = {len(maximales)}", _diferencia(mts, maximales))

    def _absorbentes_recurrentes(self):
        hipotesis = self._hipotesis('v0')
        if not self.supuestos.v0:
            return self._registrar('absorbentes_recurrentes_maximales', hipotesis, None)
        absorbentes, recurrentes = self.dinamica.clasificar_recurrentes()
        exito = absorbentes == recurrentes == self.espacio.maximales
        self._registrar('absorbentes_recurrentes_maximales', hipotesis, exito,
                        f"|A| = {len(absorbentes)}, |R| = {len(recurrentes)}, |M| = {len(self.espacio.maximales)}")

    def _resistencias(self):
        hipotesis = self._hipotesis('v0')
        if not self.supuestos.v0:
            self._registrar('resistencias_forma_cerrada', hipotesis, None)
            self._registrar('potencial_afin', hipotesis, None)
            return
        grafo = self.dinamica.grafo_resistencias()
        caminos = self.dinamica.resistencias_por_caminos(grafo.nodos)
        distintas = [(a, b) for a in range(len(grafo.nodos)) for b in range(len(grafo.nodos))
                     if grafo.pesos[a, b] != caminos[a, b]]
        testigo = None
        if distintas:
            a, b = distintas[0]
            testigo = {
                'from': miembros(self.espacio.estados[grafo.nodos[a]]),
                'to': miembros(self.espacio.estados[grafo.nodos[b]]),
                'closed_form': int(grafo.pesos[a, b]),
                'path_oracle': int(caminos[a, b]),
            }
        self._registrar('resistencias_forma_cerrada', hipotesis, not distintas,
                        f"{len(grafo.nodos) ** 2} pares de absorbentes", testigo)

        potenciales = self.dinamica.potenciales_estocasticos(grafo)
        sumas = {g + self.espacio.tamano(a) for a, g in potenciales.gamma.items()}
        exito = len(sumas) == 1
        detalle = f"γ(x) + ℓ(x) ∈ {sorted(sumas)}"
        if len(grafo.nodos) <= MAX_ABSORBENTES_FUERZA_BRUTA:
            hacia_raiz = grafo.pesos.T
            por_arboles = {a: costo_por_fuerza_bruta(hacia_raiz, fila) for fila, a in enumerate(grafo.nodos)}
            exito = exito and por_arboles == potenciales.gamma
            detalle += "; contrastado con enumeración de árboles"
        self._registrar('potencial_afin', hipotesis, exito, detalle)

    def _ss(self):
        hipotesis = self._hipotesis('v0')
        if not self.supuestos.v0:
            self._registrar('ss_igual_max_proyectos', hipotesis, None)
            self._registrar('ss_pareto_eficiente', self._hipotesis('v0', 'v1'), None)
            return
        resultado = self._memo('ss', self.dinamica.conjunto_ss)
        self._registrar('ss_igual_max_proyectos', hipotesis, resultado.coinciden,
                        f"|SS| = {len(resultado.por_arborescencias)}, |L| = {len(resultado.max_proyectos)}",
                        _diferencia(resultado.por_arborescencias, resultado.max_proyectos))

        hipotesis = self._hipotesis('v0', 'v1')
        if not self.supuestos.v1:
            return self._registrar('ss_pareto_eficiente', hipotesis, None)
        for x in sorted(resultado.por_arborescencias):
            dominante = self.analizador.es_pareto_eficiente(x)
            if dominante is not None:
                return self._registrar('ss_pareto_eficiente', hipotesis, False, "estado SS dominado",
                                       {'state': miembros(x), 'dominated_by': miembros(dominante)})
        self._registrar('ss_pareto_eficiente', hipotesis, True)

    def _cs_igual_mts(self):
        hipotesis = self._hipotesis('t1', 'v2')
        hipotesis['unique_activity_per_state_off'] = not self.supuestos.actividad_unica_por_estado
        cs, mts = self.cs(0), self.mts()
        if not all(hipotesis.values()):
            testigo = None
            diferencia = sorted(mts - cs, key=lambda x: (x.bit_count(), miembros(x)))
            if diferencia:
                operacion = self.analizador.buscar_operacion_bloqueo(diferencia[0])
                testigo = {'state': miembros(diferencia[0]), 'blocking': operacion.to_dict()}
            self.reporte.entradas.append(EntradaVerificacion(
                'cs_igual_mts', hipotesis, NO_APLICA, f"|CS| = {len(cs)}, |MTS| = {len(mts)}", testigo
            ))
            return
        self._registrar('cs_igual_mts', hipotesis, cs == mts, f"|CS| = {len(cs)}, |MTS| = {len(mts)}",
                        _diferencia(cs, mts))

    def _costos(self):
        umbrales = self.umbrales()
        definidos = {'thresholds_defined': umbrales.definidos}
        if not umbrales.definidos:
            for id in ('costos_bajos_cs', 'costos_altos_cs_mts', 'costos_monotonia',
                       'cadena_coaliciones_absorbentes', 'ss_con_costos'):
                self._registrar(id, definidos, None, "BO(0) vacío")
            return

        bajo = umbrales.c_bajo_garantizado / 2
        self._registrar('costos_bajos_cs', definidos, self.cs(bajo) == self.cs(0),
                        f"CS({bajo}) contra CS(0)", _diferencia(self.cs(bajo), self.cs(0)))

        alto = self.costo_alto()
        hipotesis = {**self._hipotesis('v0'), **definidos}
        if self.supuestos.v0:
            self._registrar('costos_altos_cs_mts', hipotesis, self.cs(alto) == self.mts(),
                            f"CS({alto}) contra MTS", _diferencia(self.cs(alto), self.mts()))
        else:
            self._registrar('costos_altos_cs_mts', hipotesis, None)

        costos = sorted({0, umbrales.c_bajo / 2, bajo, umbrales.c_alto, alto})
        conjuntos = [self.cs(c) for c in costos]
        monotona = all(a <= b for a, b in zip(conjuntos, conjuntos[1:]))
        self._registrar('costos_monotonia', definidos, monotona,
                        "CS(c) para c en " + ', '.join(str(c) for c in costos))

        if not self.supuestos.v0:
            self._registrar('cadena_coaliciones_absorbentes', hipotesis, None)
            self._registrar('ss_con_costos', hipotesis, None)
            return
        cadena = self.dinamica.cadena_coaliciones(alto)
        exito = cadena.absorbentes == cadena.recurrentes == self.espacio.maximales
        self._registrar('cadena_coaliciones_absorbentes', hipotesis, exito,
                        f"c = {alto}: |A(c)| = {len(cadena.absorbentes)}, |M| = {len(self.espacio.maximales)}")
        resultado = self.dinamica.ss_con_costos(alto)
        self._registrar('ss_con_costos', hipotesis, resultado.coinciden, f"c = {alto}",
                        _diferencia(resultado.por_arborescencias, resultado.max_proyectos))

    def _previsores(self):
        modo = 'exhaustive' if len(self.espacio) <= MAX_ESTADOS_PREVISOR else 'greedy'
        conjuntos = self.analizador.conjuntos_estables_previsores(modo)
        exito = bool(conjuntos)
        for conjunto in conjuntos:
            cond_i, cond_ii = self.analizador.verificar_previsor(conjunto)
            exito = exito and cond_i and cond_ii and conjunto.certificado[2] is not False
        testigo = conjuntos[0].to_dict() if conjuntos else None
        self._registrar('existencia_previsores', {}, exito, f"modo {modo}, {len(conjuntos)} conjunto(s)", testigo)

    def _marginal_publicacion(self):
        aplica = isinstance(self.modelo.pago, PagoPublicacion)
        hipotesis = {'publishing_payoff': aplica}
        if not aplica:
            return
        tolerancia = self.modelo.tolerancia_numerica
        comparados = 0
        for a, x in enumerate(self.espacio.estados):
            for b in self.espacio.sucesores[a]:
                k = (self.espacio.estados[b] & ~x).bit_length() - 1
                for i in range(self.modelo.n):
                    marginal = verificar_marginal_publicacion(self.modelo, x, k, i, factible=True)
                    if not marginal.aplicable:
                        continue
                    comparados += 1
                    if not marginal.coincide(tolerancia):
                        return self._registrar(
                            'marginal_publicacion', hipotesis, False, "forma cerrada distinta",
                            {'state': miembros(x), 'project': k, 'agent': i,
                             'direct': repr(marginal.directa), 'closed_form': repr(marginal.forma_cerrada)},
                        )
        self._registrar('marginal_publicacion', hipotesis, True, f"{comparados} casos comparados")

    def ejecutar(self) -> ReporteVerificacion:
        self._mts_igual_maximales()
        self._absorbentes_recurrentes()
        self._resistencias()
        self._ss()
        self._cs_igual_mts()
        self._costos()
        self._previsores()
        self._marginal_publicacion()
        logger.info(f"Verificación de {self.reporte.modelo}: {len(self.reporte.fallas)} fallas")
        return self.reporte


def verificar_proposiciones(modelo: Modelo, espacio: Optional[EspacioEstados] = None) -> ReporteVerificacion:
    return VerificadorProposiciones(modelo, espacio).ejecutar()
