import os
from pathlib import Path
from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent.parent

# Cargar .env si existe (desarrollo local); ninguna variable es obligatoria
load_dotenv(BASE_DIR / '.env')

DEBUG = os.getenv('DEBUG', 'False') == 'True'
LOG_LEVEL = os.getenv('LOG_LEVEL', 'WARNING')
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# ── Límites de capacidad ───────────────────────────────────────────────────────
# Enumeración de la retícula X
MAX_ESTADOS = int(os.getenv('MAX_ESTADOS', '2000000'))

# Búsqueda de operaciones de bloqueo (exponencial en n y |P|)
MAX_AGENTES_COALICION = int(os.getenv('MAX_AGENTES_COALICION', '12'))
MAX_PROYECTOS_BLOQUEO = int(os.getenv('MAX_PROYECTOS_BLOQUEO', '24'))

# Conjuntos estables previsores en modo exhaustivo (2^|X| subconjuntos)
MAX_ESTADOS_PREVISOR = int(os.getenv('MAX_ESTADOS_PREVISOR', '20'))
# Certificación de minimalidad del conjunto hallado en modo greedy
MAX_LIBRES_MINIMALIDAD = int(os.getenv('MAX_LIBRES_MINIMALIDAD', '12'))

# ── Tolerancias numéricas ──────────────────────────────────────────────────────
# Solo para pagos reales (familia publicación); los racionales son exactos
TOLERANCIA_NUMERICA = float(os.getenv('TOLERANCIA_NUMERICA', '1e-9'))
TOLERANCIA_RESIDUO = float(os.getenv('TOLERANCIA_RESIDUO', '1e-10'))
TOLERANCIA_FILAS = 1e-12

# ── Distribución estacionaria ──────────────────────────────────────────────────
LIMITE_SOLVER_DIRECTO = int(os.getenv('LIMITE_SOLVER_DIRECTO', '2000'))
MAX_ITERACIONES_POTENCIA = int(os.getenv('MAX_ITERACIONES_POTENCIA', '1000000'))
TOLERANCIA_POTENCIA = float(os.getenv('TOLERANCIA_POTENCIA', '1e-14'))

# ── Simulación ─────────────────────────────────────────────────────────────────
BURN_IN_FRACCION = float(os.getenv('BURN_IN_FRACCION', '0.01'))
TAMANO_BLOQUE_SIMULACION = int(os.getenv('TAMANO_BLOQUE_SIMULACION', '65536'))

# Oráculo de árboles por fuerza bruta
MAX_ABSORBENTES_FUERZA_BRUTA = 6

ESQUEMAS_PERTURBACION = ['uniform', 'uniform-destructive']
NOCIONES_ESTABILIDAD = ['mts', 'cs', 'farsighted']
