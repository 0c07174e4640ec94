"""
API Routes for the Loop PUF Simulator
"""
import logging

from flask import Blueprint, request, jsonify

from modules import recipes
from modules.errors import McwcError, SimulationError
from modules.puf_sim import device_new, distance_summary, reliability_sweep

logger = logging.getLogger(__name__)

puf_bp = Blueprint('puf', __name__)

# keep request cost bounded
MAX_TRIALS = 100000


@puf_bp.route('/sweep', methods=['POST'])
def sweep():
    """Flip rate per codeword pair on one simulated device"""
    try:
        data = request.get_json(silent=True) or {}
        reference = data.get('code') or data.get('builtin')
        if reference is None:
            return jsonify({'error': 'code or builtin required'}), 400
        if isinstance(reference, str) and not reference.startswith(('builtin:', 'rs:')):
            reference = f"builtin:{reference}"

        code = recipes.resolve(reference)
        profile = getattr(code, 'profile', None)
        m, n = data.get('m'), data.get('n')
        if (m is None or n is None) and profile is not None and profile.is_homogeneous():
            m, n = profile.m, profile.lengths[0]
        if m is None or n is None:
            return jsonify({'error': 'm and n required for codes without a homogeneous profile'}), 400
        trials = int(data.get('trials', 1000))
        if trials > MAX_TRIALS:
            raise SimulationError(f"at most {MAX_TRIALS} trials per request")

        seed = int(data.get('seed', 0))
        dev = device_new(int(m), int(n), data.get('mu', 1.0), data.get('s_eps'), seed)
        noise = float(data['noise']) if data.get('noise') is not None else dev.s_eps
        frame = reliability_sweep(dev, code, noise, trials, seed)
        return jsonify({
            'device': {'m': dev.m, 'n': dev.n, 's_eps': dev.s_eps, 'seed': dev.seed},
            'noise': noise,
            'pairs': [{'pair_index': int(row.pair_index), 'distance': int(row.distance),
                       'flip_rate': float(row.flip_rate) if row.usable else None}
                      for row in frame.itertuples(index=False)],
            'summary': [{'distance': int(row.distance), 'mean_flip_rate': float(row.mean_flip_rate),
                         'pairs': int(row.pairs)}
                        for row in distance_summary(frame).itertuples(index=False)],
        })

    except McwcError as e:
        return jsonify({'error': str(e), 'code': e.code}), 400
    except Exception as e:
        logger.error(f"❌ PUF sweep failed: {e}")
        return jsonify({'error': str(e)}), 500
