"""
API Routes for Code Construction and Verification
"""
import logging

from flask import Blueprint, request, jsonify

from modules import catalog, recipes
from modules.code_core import BinaryCode, verify_code
from modules.errors import McwcError

logger = logging.getLogger(__name__)

code_bp = Blueprint('codes', __name__)


def _words(code):
    if isinstance(code, BinaryCode):
        return code.strings()
    return [list(w) for w in code.words]


@code_bp.route('/construct', methods=['POST'])
def construct_code():
    """Run a named construction on builtin, rs:<q>:<len>:<d> or inline ingredients"""
    try:
        data = request.get_json(silent=True) or {}
        method = data.get('method')
        if not method:
            return jsonify({'error': f"method required, one of {', '.join(recipes.METHODS)}"}), 400

        result, _ = recipes.run(method, data.get('params') or {})
        if isinstance(result, BinaryCode) or not hasattr(result, 'code'):
            return jsonify({'q': result.q, 'size': len(result), 'length': result.length,
                            'distance': result.claimed_distance, 'words': _words(result)})
        response = result.summary()
        response['words'] = _words(result.code)
        return jsonify(response)

    except McwcError as e:
        return jsonify({'error': str(e), 'code': e.code}), 400
    except Exception as e:
        logger.error(f"❌ construct failed: {e}")
        return jsonify({'error': str(e)}), 500


@code_bp.route('/verify', methods=['POST'])
def verify():
    """Verify inline words against a distance and optional profile claim"""
    try:
        data = request.get_json(silent=True) or {}
        if 'words' not in data:
            return jsonify({'error': 'words required'}), 400

        code = recipes.inline_code(data)
        return jsonify(verify_code(code).to_dict())

    except McwcError as e:
        return jsonify({'error': str(e), 'code': e.code}), 400
    except Exception as e:
        logger.error(f"❌ verify failed: {e}")
        return jsonify({'error': str(e)}), 500


@code_bp.route('/builtin', methods=['GET'])
def list_builtin():
    """Names usable as builtin:<name>"""
    return jsonify({'builtin': catalog.builtin_names()})
