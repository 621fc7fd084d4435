"""
Servicio HTTP del motor de análisis de formación de equipos.
Expone los mismos documentos JSON que la CLI con --output json.
"""

from flask import Flask, jsonify
import os
import logging

from config.settings import DEBUG, LOG_FORMAT
from api import api_bp


def crear_app():
    """Factory para crear y configurar la aplicación Flask."""
    # Configure logging - solo consola, sin archivo
    logging.basicConfig(
        level=logging.INFO,
        format=LOG_FORMAT,
        handlers=[
            logging.StreamHandler()
        ]
    )

    app = Flask(__name__)
    app.json.ensure_ascii = False

    # Registrar blueprints
    app.register_blueprint(api_bp)

    _registrar_extras(app)
    return app


def _registrar_extras(app):
    """Registra health check y manejadores de error globales."""

    @app.route('/_health')
    def health_check():
        """Endpoint para keep-alive del deploy."""
        return jsonify({'status': 'ok'})

    @app.errorhandler(404)
    def not_found(e):
        return jsonify({'success': False, 'message': 'Ruta no encontrada'}), 404

    @app.errorhandler(405)
    def method_not_allowed(e):
        return jsonify({'success': False, 'message': 'Método no permitido'}), 405

    @app.errorhandler(500)
    def server_error(e):
        return jsonify({'success': False, 'message': 'Error interno del servidor'}), 500


# Instancia a nivel de módulo para que gunicorn pueda encontrarla
app = crear_app()

if __name__ == '__main__':
    port = int(os.getenv('PORT', 5000))
    app.run(debug=DEBUG, host='0.0.0.0', port=port)
