"""
MCWC Toolkit - HTTP service
Flask application exposing constructions, verification, bounds, curves and
the PUF simulator as a JSON API
"""
from flask import Flask, jsonify
from flask_cors import CORS
from dotenv import load_dotenv
import logging
import os

from modules import __version__
from modules.config import settings

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)


def create_app():
    """Build the Flask app and register one blueprint per service area"""
    app = Flask(__name__)
    app.config['SECRET_KEY'] = os.getenv('FLASK_SECRET_KEY', 'dev-secret-key-change-in-production')
    CORS(app)

    # Import routes
    from routes.code_routes import code_bp
    from routes.bound_routes import bound_bp
    from routes.curve_routes import curve_bp
    from routes.puf_routes import puf_bp

    # Register blueprints
    app.register_blueprint(code_bp, url_prefix='/api/codes')
    app.register_blueprint(bound_bp, url_prefix='/api/bounds')
    app.register_blueprint(curve_bp, url_prefix='/api/curves')
    app.register_blueprint(puf_bp, url_prefix='/api/puf')

    @app.route('/api/health')
    def health_check():
        """Health check endpoint"""
        return jsonify({
            'status': 'healthy',
            'version': __version__,
            'modules': {
                'constructions': 'active',
                'bounds': 'active',
                'asymptotics': 'active',
                'puf_sim': 'active'
            }
        })

    return app


app = create_app()


if __name__ == '__main__':
    logging.basicConfig(level=settings.log_level)
    host = os.getenv('MCWC_HOST', '127.0.0.1')
    port = int(os.getenv('MCWC_PORT', '5000'))
    print("🚀 Starting MCWC Toolkit service...")
    print(f"📍 API available at: http://{host}:{port}/api/health")
    app.run(debug=False, host=host, port=port)
