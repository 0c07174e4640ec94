"""
API Routes for Asymptotic Rate Curves
"""
import logging

from flask import Blueprint, request, jsonify

from modules.asymptotics import delta_grid, emit_curves, ordering_violations
from modules.errors import McwcError

logger = logging.getLogger(__name__)

curve_bp = Blueprint('curves', __name__)


@curve_bp.route('', methods=['POST'])
def curves():
    """Curve rows on an inclusive delta grid"""
    try:
        data = request.get_json(silent=True) or {}
        grid = delta_grid(float(data.get('start', 0.0)), float(data.get('end', 0.5)),
                          float(data.get('step', 0.01)))
        frame = emit_curves(grid, data.get('curves'))
        return jsonify({
            'points': [{'curve': row.curve, 'delta': float(row.delta), 'rate': float(row.rate),
                        'clamped': bool(row.clamped)} for row in frame.itertuples(index=False)],
            'violations': [list(v) for v in ordering_violations(frame)],
        })

    except McwcError as e:
        return jsonify({'error': str(e), 'code': e.code}), 400
    except Exception as e:
        logger.error(f"❌ curves failed: {e}")
        return jsonify({'error': str(e)}), 500
