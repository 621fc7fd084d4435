from .errores import ErrorModelo, ErrorConfiguracion, ErrorCapacidad, ErrorPrecondicion
from .models import (
    Estado,
    Proyecto,
    Tecnologia,
    Modelo,
    participantes,
    horas_totales,
    uso_recursos,
    es_factible,
    cantidad_proyectos,
)
from .pagos import (
    PagoLineal,
    PagoRepartoIgualitario,
    PagoTabla,
    PagoPublicacion,
    BonoAfinidad,
    evaluar,
    verificar_marginal_publicacion,
)
from .reticula import EspacioEstados, enumerar_estados
from .supuestos import ReporteSupuestos, verificar_supuestos
from .estabilidad import AnalizadorEstabilidad, OperacionBloqueo, UmbralesCosto, ConjuntoPrevisor
from .dinamica import DinamicaEquipos, AnalisisCadena, GrafoResistencias, TablaPotenciales, distribucion_estacionaria
from .simulacion import ConfiguracionSimulacion, ReporteOcupacion, SimuladorMonteCarlo, comparar_ocupacion
from .ejemplos import ejemplo_integrado, listar_ejemplos
from .verificacion import ReporteVerificacion, verificar_proposiciones
