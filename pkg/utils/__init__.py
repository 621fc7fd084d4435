from .exportador import DataExporter, a_json
from .cargador_modelo import cargar_modelo, modelo_desde_dict
