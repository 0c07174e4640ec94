"""
Named construction recipes shared by the CLI and the HTTP service

A recipe is a method name plus a flat parameter dict; code-valued
parameters are references resolved by a loader (``builtin:<name>``,
``rs:<q>:<length>:<d>``, or whatever else the caller's loader accepts).
"""
import logging

from modules import catalog
from modules.code_core import BinaryCode, QaryCode, WeightProfile
from modules.constructions import (append_extend, complement_extend, concatenate, extended_reed_solomon,
                                   pseudo_product, qary_expand)
from modules.designs import affine_plane, design_to_mcwc, one_factorization
from modules.errors import CodeFormatError, ConstructionError, DesignError
from modules.gf import field_of_order

logger = logging.getLogger(__name__)

METHODS = ('concat', 'pseudo-product', 'complement', 'append', 'qary-expand', 'rs', 'design')


def resolve(reference):
    """
    Code from a reference string or an inline dict

    Args:
        reference: 'builtin:<name>', 'rs:<q>:<length>:<d>', or a dict with
            ``words`` and optional ``q``, ``d``, ``profile``

    Returns:
        BinaryCode or QaryCode
    """
    if isinstance(reference, dict):
        return inline_code(reference)
    if not isinstance(reference, str):
        raise CodeFormatError(f"cannot read a code from {reference!r}")
    if reference.startswith('builtin:'):
        return catalog.builtin(reference)
    if reference.startswith('rs:'):
        try:
            q, length, d = (int(x) for x in reference[3:].split(':'))
        except ValueError as e:
            raise CodeFormatError(f"expected rs:<q>:<length>:<d>, got {reference!r}") from e
        return extended_reed_solomon(field_of_order(q), length, d)
    raise CodeFormatError(f"unknown code reference {reference!r}")


def inline_code(data):
    """Code from {'words': [...], 'q': 2, 'd': 1, 'profile': 'n:w,...'}"""
    words = data.get('words')
    if not isinstance(words, list):
        raise CodeFormatError("'words' must be a list")
    q = int(data.get('q', 2))
    d = int(data.get('d', 1))
    if q == 2:
        profile = WeightProfile.parse(data['profile']) if data.get('profile') else None
        return BinaryCode.from_strings([str(w) for w in words], d, profile)
    rows = [tuple(int(s) for s in (w.split(',') if isinstance(w, str) else w)) for w in words]
    length = len(rows[0]) if rows else 0
    return QaryCode(q, tuple(rows), length, d)


def _require(params, *names):
    missing = [name for name in names if params.get(name) is None]
    if missing:
        raise ConstructionError(f"missing parameters: {', '.join(missing)}")


def design_from_params(params, load_design=None):
    if params.get('file'):
        if load_design is None:
            raise DesignError("design files are not accepted here")
        return load_design(params['file'])
    family = params.get('family')
    if family == 'affine':
        _require(params, 'q')
        return affine_plane(int(params['q']))
    if family == 'one-factorization':
        _require(params, 'v')
        return one_factorization(int(params['v']))
    raise DesignError("design needs family 'affine' (with q) or 'one-factorization' (with v)")


def run(method, params, load=resolve, load_design=None):
    """
    Run one construction

    Args:
        method (str): one of METHODS
        params (dict): method parameters
        load (callable): reference -> code
        load_design (callable): path -> ResolvableDesign, for 'design' with 'file'

    Returns:
        tuple: (ConstructionResult, or QaryCode for an unexpanded 'rs';
        list of the code references used)
    """
    if method == 'concat':
        _require(params, 'outer', 'inner')
        return concatenate(load(params['outer']), load(params['inner'])), [params['outer'], params['inner']]
    if method == 'pseudo-product':
        _require(params, 'cwc', 'sys')
        return pseudo_product(load(params['cwc']), load(params['sys'])), [params['cwc'], params['sys']]
    if method == 'complement':
        _require(params, 'code')
        return complement_extend(load(params['code'])), [params['code']]
    if method == 'append':
        _require(params, 'k', 'cwc')
        return append_extend(int(params['k']), load(params['cwc'])), [params['cwc']]
    if method == 'qary-expand':
        _require(params, 'code', 'w')
        code = load(params['code'])
        if not isinstance(code, QaryCode):
            raise ConstructionError("qary-expand needs a q-ary input code")
        return qary_expand(code, int(params['w'])), [params['code']]
    if method == 'rs':
        _require(params, 'q', 'len', 'd')
        rs = extended_reed_solomon(field_of_order(int(params['q'])), int(params['len']), int(params['d']))
        if not params.get('expand'):
            return rs, []
        return qary_expand(rs, int(params.get('w') or 1)), []
    if method == 'design':
        return design_to_mcwc(design_from_params(params, load_design)), [params.get('file')]
    raise ConstructionError(f"unknown method {method!r}; known: {', '.join(METHODS)}")
