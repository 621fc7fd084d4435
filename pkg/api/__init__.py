from .routes import api_bp
