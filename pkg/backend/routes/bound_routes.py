"""
API Routes for the Bound Table
"""
import logging

from flask import Blueprint, request, jsonify

from modules.code_core import INFINITY
from modules.errors import McwcError
from modules.tabulator import table_build

logger = logging.getLogger(__name__)

bound_bp = Blueprint('bounds', __name__)


@bound_bp.route('/cell', methods=['POST'])
def bound_cell():
    """Every record and the best bounds for one cell M(m, n, d, w)"""
    try:
        data = request.get_json(silent=True) or {}
        missing = [k for k in ('m', 'n', 'd', 'w') if data.get(k) is None]
        if missing:
            return jsonify({'error': f"missing fields: {', '.join(missing)}"}), 400

        cell = tuple(int(data[k]) for k in ('m', 'n', 'd', 'w'))
        table = table_build([cell], exact=bool(data.get('exact', False)), threads=1)
        lower, upper = table.best(cell)
        return jsonify({
            'cell': list(cell),
            'lower': int(lower.value),
            'upper': 'inf' if upper.value == INFINITY else int(upper.value),
            'exact': lower.value == upper.value,
            'lower_provenance': lower.provenance,
            'upper_provenance': upper.provenance,
            'records': [r.to_dict() for r in table.records(cell)],
        })

    except McwcError as e:
        return jsonify({'error': str(e), 'code': e.code}), 400
    except Exception as e:
        logger.error(f"❌ bound cell failed: {e}")
        return jsonify({'error': str(e)}), 500
