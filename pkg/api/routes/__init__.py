from .analisis import api_bp
