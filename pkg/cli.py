"""
Línea de comandos del motor de análisis de formación de equipos.

Códigos de salida: 0 éxito, 1 alguna proposición falló (solo verify),
2 error de uso, de esquema o de precondición, 3 límite de capacidad.
"""

import functools
import logging
import sys
from fractions import Fraction

import click

from config import LOG_FORMAT, LOG_LEVEL, NOCIONES_ESTABILIDAD, ESQUEMAS_PERTURBACION, MAX_ESTADOS_PREVISOR
from core.ejemplos import EJEMPLOS, ejemplo_integrado
from core.errores import ErrorCapacidad, ErrorConfiguracion, ErrorPrecondicion
from utils.cargador_modelo import cargar_modelo
from utils.exportador import DataExporter
from utils.reportes import (
    ContextoAnalisis, formatear_texto, reporte_ejemplos, reporte_enumeracion, reporte_estabilidad,
    reporte_estacionario, reporte_estocastico, reporte_simulacion, reporte_verificacion,
)

logger = logging.getLogger(__name__)

SALIDA_FALLA = 1
SALIDA_USO = 2
SALIDA_CAPACIDAD = 3


def _configurar_logging(verbose: bool):
    logging.basicConfig(
        level=logging.INFO if verbose else getattr(logging, LOG_LEVEL.upper(), logging.WARNING),
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def _racional(valor: str) -> Fraction:
    try:
        return Fraction(valor)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"'{valor}' no es un número racional (use por ejemplo 1/4 o 0.25)")


def _emitir(comando: str, documento, formato: str, ctx=None):
    if formato == 'json':
        click.echo(DataExporter.serializar(documento))
    else:
        click.echo(formatear_texto(comando, documento, ctx))


def _contexto(modelo_ruta, ejemplo) -> ContextoAnalisis:
    if bool(modelo_ruta) == bool(ejemplo):
        raise click.UsageError("Indique exactamente una fuente de modelo: --model PATH o --example NAME")
    modelo = cargar_modelo(modelo_ruta) if modelo_ruta else ejemplo_integrado(ejemplo)
    return ContextoAnalisis(modelo)


def con_manejo_errores(funcion):
    """Traduce la jerarquía de errores del motor a códigos de salida"""
    @functools.wraps(funcion)
    def envoltura(*args, **kwargs):
        try:
            return funcion(*args, **kwargs)
        except ErrorCapacidad as e:
            logger.warning(f"Límite de capacidad: {e}")
            click.echo(f"Error de capacidad: {e}", err=True)
            sys.exit(SALIDA_CAPACIDAD)
        except (ErrorConfiguracion, ErrorPrecondicion) as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(SALIDA_USO)
    return envoltura


def opciones_modelo(funcion):
    """Opciones comunes: fuente del modelo, formato de salida y reporte por clases"""
    opciones = [
        click.option('--model', 'modelo_ruta', type=click.Path(dir_okay=False), help='Archivo de modelo JSON'),
        click.option('--example', 'ejemplo', type=click.Choice(list(EJEMPLOS), case_sensitive=False),
                     help='Modelo integrado'),
        click.option('--output', 'formato', type=click.Choice(['text', 'json']), default='text',
                     show_default=True),
        click.option('--classes', 'clases', is_flag=True, help='Reportar clases de reetiquetado de actividades'),
    ]
    for opcion in reversed(opciones):
        funcion = opcion(funcion)
    return funcion


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Logs de progreso (INFO) en stderr')
def cli(verbose):
    """Análisis exacto y simulación de modelos de formación de equipos."""
    _configurar_logging(verbose)


@cli.command('enumerate')
@opciones_modelo
@click.option('--export', 'exportar', type=click.Path(dir_okay=False),
              help='Exporta la tabla de estados a .csv o .xlsx')
@con_manejo_errores
def enumerar(modelo_ruta, ejemplo, formato, clases, exportar):
    """Enumera la retícula de estados factibles."""
    ctx = _contexto(modelo_ruta, ejemplo)
    documento = reporte_enumeracion(ctx, clases)
    if exportar:
        DataExporter.exportar_tabla_estados(ctx.modelo, ctx.espacio, exportar)
        logger.info(f"Tabla de estados exportada a {exportar}")
    _emitir('enumerate', documento, formato, ctx)


@cli.command('stability')
@opciones_modelo
@click.option('--notion', type=click.Choice(NOCIONES_ESTABILIDAD), required=True)
@click.option('--cost', 'costo', default='0', show_default=True, help='Costo de salida c ≥ 0 (racional)')
@click.option('--mode', 'modo', type=click.Choice(['auto', 'exhaustive', 'greedy']), default='auto',
              show_default=True, help='Búsqueda de conjuntos previsores')
@con_manejo_errores
def estabilidad(modelo_ruta, ejemplo, formato, clases, notion, costo, modo):
    """Conjuntos MTS, CS(c) o estables previsores."""
    costo = _racional(costo)
    if costo < 0:
        raise click.BadParameter("el costo no puede ser negativo", param_hint='--cost')
    ctx = _contexto(modelo_ruta, ejemplo)
    if modo == 'auto':
        modo = 'exhaustive' if len(ctx.espacio) <= MAX_ESTADOS_PREVISOR else 'greedy'
    documento = reporte_estabilidad(ctx, notion, costo, modo, clases)
    _emitir('stability', documento, formato, ctx)


@cli.command('stochastic')
@opciones_modelo
@con_manejo_errores
def estocastico(modelo_ruta, ejemplo, formato, clases):
    """Estados absorbentes, potenciales estocásticos y conjunto SS."""
    ctx = _contexto(modelo_ruta, ejemplo)
    _emitir('stochastic', reporte_estocastico(ctx, clases), formato, ctx)


@cli.command('stationary')
@opciones_modelo
@click.option('--epsilon', type=float, help='Probabilidad de error por proyecto')
@click.option('--scheme', 'esquema', type=click.Choice(ESQUEMAS_PERTURBACION))
@con_manejo_errores
def estacionario(modelo_ruta, ejemplo, formato, clases, epsilon, esquema):
    """Distribución estacionaria exacta de la cadena perturbada."""
    ctx = _contexto(modelo_ruta, ejemplo)
    _emitir('stationary', reporte_estacionario(ctx, epsilon, esquema, clases), formato, ctx)


@cli.command('simulate')
@opciones_modelo
@click.option('--epsilon', type=float)
@click.option('--steps', 'pasos', type=click.IntRange(min=1), required=True)
@click.option('--seed', 'semilla', type=int, default=0, show_default=True)
@click.option('--scheme', 'esquema', type=click.Choice(ESQUEMAS_PERTURBACION))
@click.option('--burn-in', 'burn_in', type=click.IntRange(min=0), help='Por defecto 1% de los pasos')
@click.option('--replicas', type=click.IntRange(min=1), default=1, show_default=True)
@click.option('--workers', 'max_workers', type=click.IntRange(min=1), help='Procesos para las réplicas')
@click.option('--compare', 'comparar', is_flag=True, help='Distancia TV contra la distribución exacta')
@con_manejo_errores
def simular(modelo_ruta, ejemplo, formato, clases, epsilon, pasos, semilla, esquema, burn_in, replicas,
            max_workers, comparar):
    """Simulación Monte Carlo de la dinámica perturbada."""
    ctx = _contexto(modelo_ruta, ejemplo)
    documento = reporte_simulacion(ctx, epsilon, pasos, semilla, esquema, burn_in, replicas, max_workers,
                                   comparar)
    _emitir('simulate', documento, formato, ctx)


@cli.command('verify')
@opciones_modelo
@con_manejo_errores
def verificar(modelo_ruta, ejemplo, formato, clases):
    """Verifica las proposiciones aplicables al modelo."""
    ctx = _contexto(modelo_ruta, ejemplo)
    documento = reporte_verificacion(ctx)
    _emitir('verify', documento, formato, ctx)
    if documento['failed']:
        sys.exit(SALIDA_FALLA)


@cli.command('examples')
@click.argument('nombre', required=False)
@click.option('--emit', 'emitir', is_flag=True, help='Imprime el modelo como archivo de modelo JSON')
@click.option('--output', 'formato', type=click.Choice(['text', 'json']), default='text', show_default=True)
@con_manejo_errores
def ejemplos(nombre, emitir, formato):
    """Lista los modelos integrados o describe uno."""
    if emitir and nombre is None:
        raise click.UsageError("--emit requiere el nombre de un ejemplo")
    documento = reporte_ejemplos(nombre, emitir)
    _emitir('examples', documento, 'json' if emitir else formato)


if __name__ == '__main__':
    cli()
