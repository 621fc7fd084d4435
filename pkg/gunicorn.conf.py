# Configuración de Gunicorn para el servicio de análisis
# Cada petición es CPU-bound y sin estado compartido

import os

# ── Workers ────────────────────────────────────────────────────────────────────
# Los análisis no comparten estado entre peticiones: se puede escalar por procesos.
workers = int(os.getenv('WEB_CONCURRENCY', '2'))

# Worker class sync es la correcta para Flask standard (no async)
worker_class = "sync"

# ── Timeouts ───────────────────────────────────────────────────────────────────
# verify y las simulaciones largas pueden tardar minutos en modelos medianos
timeout = int(os.getenv('GUNICORN_TIMEOUT', '300'))

keepalive = 5

# ── Binding ────────────────────────────────────────────────────────────────────
bind = f"0.0.0.0:{os.getenv('PORT', '5000')}"

# ── Logging ────────────────────────────────────────────────────────────────────
loglevel = "warning"
accesslog = "-"
errorlog  = "-"

# ── Memoria ────────────────────────────────────────────────────────────────────
# Las retículas grandes inflan el heap del worker; reciclarlo seguido lo acota
max_requests = 100
max_requests_jitter = 10

preload_app = True
