import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pandas as pd

from core.errores import ErrorConfiguracion
from core.models import Modelo, miembros
from core.pagos import tabla_utilidades
from core.reticula import EspacioEstados


def a_json(valor):
    """
    Convierte un resultado a tipos JSON: racionales como {num, den}, reales
    como cadena decimal (repr), conjuntos como listas ordenadas.
    """
    if isinstance(valor, bool) or valor is None or isinstance(valor, str):
        return valor
    if isinstance(valor, (int, np.integer)):
        return int(valor)
    if isinstance(valor, Fraction):
        return {'num': valor.numerator, 'den': valor.denominator}
    if isinstance(valor, (float, np.floating)):
        valor = float(valor)
        return repr(valor) if math.isfinite(valor) else None
    if isinstance(valor, dict):
        return {str(k): a_json(v) for k, v in valor.items()}
    if isinstance(valor, (set, frozenset)):
        return sorted(a_json(v) for v in valor)
    if isinstance(valor, (list, tuple, np.ndarray)):
        return [a_json(v) for v in valor]
    if hasattr(valor, 'to_dict'):
        return a_json(valor.to_dict())
    raise TypeError(f"Tipo no serializable: {type(valor).__name__}")


class DataExporter:
    @staticmethod
    def serializar(datos) -> str:
        return json.dumps(a_json(datos), indent=2, ensure_ascii=False)

    @staticmethod
    def exportar_json(datos, archivo: str):
        with open(archivo, 'w', encoding='utf-8') as f:
            f.write(DataExporter.serializar(datos))
            f.write('\n')

    @staticmethod
    def tabla_estados(modelo: Modelo, espacio: EspacioEstados) -> pd.DataFrame:
        """Una fila por estado de X: miembros, tamaño, clase, banderas M/L y utilidades"""
        utilidades = tabla_utilidades(modelo, espacio.estados)
        filas = []
        for a, x in enumerate(espacio.estados):
            fila = {
                'index': a,
                'members': ' '.join(str(k) for k in miembros(x)),
                'label': modelo.etiqueta_estado(x),
                'size': x.bit_count(),
                'class': espacio.etiqueta_clase(espacio.clase(a)),
                'maximal': a in espacio.maximales,
                'max_projects': a in espacio.max_proyectos,
            }
            for nombre, u in zip(modelo.nombres_agentes, utilidades[a]):
                fila[f'u_{nombre}'] = str(u) if isinstance(u, Fraction) else float(u)
            filas.append(fila)
        return pd.DataFrame(filas)

    @staticmethod
    def exportar_tabla_estados(modelo: Modelo, espacio: EspacioEstados, archivo: str):
        ruta = Path(archivo)
        tabla = DataExporter.tabla_estados(modelo, espacio)
        sufijo = ruta.suffix.lower()
        if sufijo == '.csv':
            tabla.to_csv(ruta, index=False, encoding='utf-8')
        elif sufijo == '.xlsx':
            tabla.to_excel(ruta, index=False, sheet_name='estados', engine='openpyxl')
        else:
            raise ErrorConfiguracion(f"Formato de exportación no soportado: '{sufijo}' (use .csv o .xlsx)")
