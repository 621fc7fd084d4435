"""
Construcción de los documentos de resultado que comparten la CLI y el
servicio HTTP, y su versión en texto legible.
"""

import logging
from functools import cached_property
from typing import Dict, Iterable, List, Optional

from core.dinamica import DinamicaEquipos, distribucion_estacionaria
from core.ejemplos import ejemplo_integrado, listar_ejemplos
from core.errores import ErrorConfiguracion
from core.estabilidad import AnalizadorEstabilidad
from core.models import Estado, Modelo, estado_desde_indices, miembros
from core.pagos import tabla_utilidades
from core.reticula import EspacioEstados, enumerar_estados
from core.simulacion import ConfiguracionSimulacion, SimuladorMonteCarlo
from core.supuestos import verificar_supuestos
from core.verificacion import verificar_proposiciones

logger = logging.getLogger(__name__)


class ContextoAnalisis:
    """Modelo con sus estructuras derivadas, calculadas a demanda y reutilizadas"""

    def __init__(self, modelo: Modelo, max_estados: Optional[int] = None):
        self.modelo = modelo
        self.max_estados = max_estados

    @cached_property
    def espacio(self) -> EspacioEstados:
        return enumerar_estados(self.modelo, self.max_estados)

    @cached_property
    def utilidades(self):
        return tabla_utilidades(self.modelo, self.espacio.estados)

    @cached_property
    def analizador(self) -> AnalizadorEstabilidad:
        return AnalizadorEstabilidad(self.modelo, self.espacio, self.utilidades)

    @cached_property
    def dinamica(self) -> DinamicaEquipos:
        return DinamicaEquipos(self.modelo, self.espacio, self.utilidades, self.analizador)

    def etiqueta(self, indices: Iterable[int]) -> str:
        return self.modelo.etiqueta_estado(estado_desde_indices(indices))


def _ordenar(estados: Iterable[Estado]) -> List[List[int]]:
    return sorted((miembros(x) for x in estados), key=lambda m: (len(m), m))


def _resumen_clases(ctx: ContextoAnalisis, indices: Iterable[int]) -> List[Dict]:
    espacio = ctx.espacio
    return [
        {'class': espacio.etiqueta_clase(clase), 'size': len(clase), 'count': len(grupo)}
        for clase, grupo in espacio.clases(indices).items()
    ]


def _indices(ctx: ContextoAnalisis, estados: Iterable[Estado]) -> List[int]:
    return [ctx.espacio.indice[x] for x in estados]


# ==================== DOCUMENTOS ====================

def reporte_enumeracion(ctx: ContextoAnalisis, clases: bool = False) -> Dict:
    espacio = ctx.espacio
    documento = {
        'num_states': len(espacio),
        'num_maximal': len(espacio.maximales),
        'num_maximal_classes': len(espacio.clases(espacio.maximales)),
        'max_projects': max(x.bit_count() for x in espacio.estados),
    }
    if clases:
        documento['maximal_classes'] = _resumen_clases(ctx, espacio.maximales)
    return documento


def reporte_estabilidad(ctx: ContextoAnalisis, nocion: str, costo=0, modo: str = 'greedy',
                        clases: bool = False) -> Dict:
    analizador = ctx.analizador
    if nocion == 'mts':
        estados = analizador.conjunto_mts()
        documento = {'notion': 'mts', 'count': len(estados), 'states': _ordenar(estados)}
    elif nocion == 'cs':
        estados = analizador.conjunto_cs(costo)
        mts = analizador.conjunto_mts()
        bloqueados = []
        for x in sorted(mts - estados, key=lambda x: (x.bit_count(), miembros(x))):
            bloqueados.append(analizador.buscar_operacion_bloqueo(x, costo).to_dict())
        documento = {
            'notion': 'cs',
            'cost': costo,
            'count': len(estados),
            'states': _ordenar(estados),
            'blocked_mts_states': bloqueados,
            'thresholds': analizador.umbrales_costo().to_dict(),
        }
    elif nocion == 'farsighted':
        conjuntos = analizador.conjuntos_estables_previsores(modo)
        documento = {'notion': 'farsighted', 'mode': modo, 'sets': [c.to_dict() for c in conjuntos]}
        if clases:
            documento['classes'] = [_resumen_clases(ctx, _indices(ctx, c.miembros)) for c in conjuntos]
        return documento
    else:
        raise ErrorConfiguracion(f"Noción de estabilidad desconocida: {nocion}")
    if clases:
        documento['classes'] = _resumen_clases(ctx, _indices(ctx, estados))
    return documento


def reporte_estocastico(ctx: ContextoAnalisis, clases: bool = False) -> Dict:
    dinamica = ctx.dinamica
    absorbentes, recurrentes = dinamica.clasificar_recurrentes()
    resultado = dinamica.conjunto_ss()
    documento = {
        'num_absorbing': len(absorbentes),
        'num_recurrent': len(recurrentes),
        **resultado.to_dict(),
    }
    if clases:
        documento['ss_classes'] = _resumen_clases(ctx, _indices(ctx, resultado.por_arborescencias))
    return documento


def _epsilon(ctx: ContextoAnalisis, epsilon: Optional[float]) -> float:
    valor = epsilon if epsilon is not None else ctx.modelo.epsilon
    if valor is None:
        raise ErrorConfiguracion("Falta epsilon: indíquelo con --epsilon o en dynamics.epsilon")
    return valor


def reporte_estacionario(ctx: ContextoAnalisis, epsilon: Optional[float] = None,
                         esquema: Optional[str] = None, clases: bool = False) -> Dict:
    epsilon = _epsilon(ctx, epsilon)
    esquema = esquema or ctx.modelo.esquema or 'uniform-destructive'
    cadena = ctx.dinamica.matriz_perturbada(epsilon, esquema)
    pi = distribucion_estacionaria(cadena)
    espacio = ctx.espacio
    documento = {
        'epsilon': epsilon,
        'scheme': esquema,
        'mass_on_max_project_states': ctx.dinamica.masa_en(pi, espacio.estados_max_proyectos()),
        'distribution': [
            {'state': miembros(x), 'probability': float(pi[a])} for a, x in enumerate(espacio.estados)
        ],
    }
    if clases:
        masa = {}
        for clase, grupo in espacio.clases(range(len(espacio))).items():
            masa[espacio.etiqueta_clase(clase)] = float(sum(pi[a] for a in grupo))
        documento['class_mass'] = masa
    return documento


def reporte_simulacion(ctx: ContextoAnalisis, epsilon: Optional[float], pasos: int, semilla: int,
                       esquema: Optional[str] = None, burn_in: Optional[int] = None, replicas: int = 1,
                       max_workers: Optional[int] = None, comparar: bool = False) -> Dict:
    config = ConfiguracionSimulacion(
        epsilon=_epsilon(ctx, epsilon),
        pasos=pasos,
        semilla=semilla,
        esquema=esquema or ctx.modelo.esquema or 'uniform-destructive',
        burn_in=burn_in,
        replicas=replicas,
        max_workers=max_workers,
    )
    referencia = None
    if comparar:
        if config.esquema != 'uniform-destructive':
            raise ErrorConfiguracion("La comparación exacta solo está disponible para 'uniform-destructive'")
        referencia = distribucion_estacionaria(ctx.dinamica.matriz_perturbada(config.epsilon, config.esquema))
    reporte = SimuladorMonteCarlo(ctx.modelo, ctx.espacio, ctx.utilidades).ejecutar(config, referencia)
    return reporte.to_dict()


def reporte_verificacion(ctx: ContextoAnalisis) -> Dict:
    return verificar_proposiciones(ctx.modelo, ctx.espacio).to_dict()


def reporte_supuestos(ctx: ContextoAnalisis) -> Dict:
    return verificar_supuestos(ctx.modelo, ctx.espacio, ctx.utilidades).to_dict()


def reporte_ejemplos(nombre: Optional[str] = None, emitir: bool = False) -> Dict:
    if nombre is None:
        return {'examples': listar_ejemplos()}
    modelo = ejemplo_integrado(nombre)
    if emitir:
        return modelo.to_dict()
    ctx = ContextoAnalisis(modelo)
    return {
        'name': modelo.nombre,
        'agents': list(modelo.nombres_agentes),
        'endowments': list(modelo.dotaciones),
        'num_projects': len(modelo.proyectos),
        'payoff': modelo.pago.familia,
        **reporte_enumeracion(ctx),
    }


# ==================== TEXTO ====================

def _lineas_estados(ctx: Optional[ContextoAnalisis], estados: List[List[int]], sangria: str = '  ') -> List[str]:
    if ctx is None:
        return [f"{sangria}{m}" for m in estados]
    return [f"{sangria}{ctx.etiqueta(m)}" for m in estados]


def formatear_texto(comando: str, documento: Dict, ctx: Optional[ContextoAnalisis] = None) -> str:
    lineas: List[str] = []
    if comando == 'enumerate':
        lineas.append(f"Estados factibles:      {documento['num_states']}")
        lineas.append(f"Estados maximales:      {documento['num_maximal']}")
        lineas.append(f"Clases maximales:       {documento['num_maximal_classes']}")
        lineas.append(f"Máximo de proyectos:    {documento['max_projects']}")
        for clase in documento.get('maximal_classes', []):
            lineas.append(f"  {clase['class']}  ({clase['size']} proyectos, {clase['count']} estados)")
    elif comando == 'stability':
        nocion = documento['notion']
        if nocion == 'farsighted':
            lineas.append(f"Conjuntos estables previsores (modo {documento['mode']}): {len(documento['sets'])}")
            for conjunto in documento['sets']:
                lineas.append(f"- certificado: {conjunto['certified']}")
                lineas.extend(_lineas_estados(ctx, conjunto['members']))
        else:
            titulo = 'MTS' if nocion == 'mts' else f"CS({documento['cost']})"
            lineas.append(f"{titulo}: {documento['count']} estados")
            lineas.extend(_lineas_estados(ctx, documento['states']))
            for bloqueo in documento.get('blocked_mts_states', []):
                lineas.append(f"Bloqueado {bloqueo['origin']} por la coalición {bloqueo['coalition']}: "
                              f"quita {bloqueo['removed']}, agrega {bloqueo['added']}")
            if 'thresholds' in documento:
                umbrales = documento['thresholds']
                lineas.append(f"Umbrales: c_low = {umbrales['c_low']}, c_high = {umbrales['c_high']}")
        for clase in documento.get('classes', []):
            if isinstance(clase, dict):
                lineas.append(f"  clase {clase['class']}: {clase['count']} estados")
    elif comando == 'stochastic':
        lineas.append(f"Absorbentes: {documento['num_absorbing']}, recurrentes: {documento['num_recurrent']}")
        lineas.append(f"SS (arborescencias) = L: {documento['equal']}")
        lineas.extend(_lineas_estados(ctx, documento['ss']))
        for clase in documento.get('ss_classes', []):
            lineas.append(f"  clase {clase['class']}: {clase['count']} estados")
    elif comando == 'stationary':
        lineas.append(f"ε = {documento['epsilon']} ({documento['scheme']})")
        lineas.append(f"Masa sobre L: {documento['mass_on_max_project_states']:.6f}")
        principales = sorted(documento['distribution'], key=lambda d: -d['probability'])[:10]
        for d in principales:
            etiqueta = ctx.etiqueta(d['state']) if ctx else d['state']
            lineas.append(f"  {d['probability']:.6f}  {etiqueta}")
        for clase, masa in documento.get('class_mass', {}).items():
            lineas.append(f"  clase {clase}: {masa:.6f}")
    elif comando == 'simulate':
        lineas.append(f"Clase modal: {documento['modal_class']}")
        for clase, frecuencia in documento['class_frequencies'].items():
            lineas.append(f"  {clase}: {frecuencia}")
        if 'tv_distance' in documento:
            lineas.append(f"Distancia de variación total: {documento['tv_distance']}")
    elif comando == 'verify':
        lineas.append(f"Modelo {documento['model']}")
        lineas.append("Supuestos: " + ', '.join(f"{k}={v}" for k, v in documento['assumptions'].items()))
        for entrada in documento['entries']:
            lineas.append(f"[{entrada['status']:>14}] {entrada['id']}  {entrada['detail']}")
        lineas.append(f"Fallas: {documento['failed']}")
    elif comando == 'examples' and 'examples' in documento:
        for ejemplo in documento['examples']:
            lineas.append(f"{ejemplo['name']:<8} {ejemplo['description']}")
    else:
        lineas.extend(f"{clave}: {valor}" for clave, valor in documento.items())
    return '\n'.join(lineas)
