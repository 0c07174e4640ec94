"""
Lower-bound constructions for multiply constant-weight codes

Every construction verifies its ingredients, builds the code, verifies the
result against the distance it guarantees and returns a ConstructionResult
carrying the provenance that the bound table records.
"""
from dataclasses import dataclass, field
from itertools import product
import logging

from modules.code_core import (BinaryCode, QaryCode, WeightProfile, verify_code,
                                find_systematic_set, systematic_encoder, bits_of,
                                word_of, complement, concat_words, split_word,
                                INFINITY)
from modules.config import settings
from modules.errors import ConstructionError, VerificationError
from modules.gf import galois_field

logger = logging.getLogger(__name__)


@dataclass
class ConstructionResult:
    """A constructed code with its guaranteed distance and provenance"""
    code: BinaryCode
    guaranteed_distance: int
    provenance: str
    params: dict = field(default_factory=dict)
    verified_distance: float = None

    @property
    def size(self):
        return len(self.code)

    @property
    def profile(self):
        return self.code.profile

    def summary(self):
        verified = self.verified_distance
        return {
            'size': self.size,
            'length': self.code.length,
            'profile': str(self.profile) if self.profile else 'none',
            'guaranteed_distance': self.guaranteed_distance,
            'verified_distance': 'inf' if verified == INFINITY else verified,
            'provenance': self.provenance,
        }


def _describe(params):
    return ', '.join(f"{k}={v}" for k, v in params.items())


def _require_verified(code, what):
    report = verify_code(code)
    if not report.passed:
        raise ConstructionError(
            f"{what} failed verification (min distance {report.min_distance}, "
            f"claimed {code.claimed_distance}, {len(report.profile_failures)} profile violations)")
    return report


def _single_block(code, what):
    """Weight of a constant-weight ingredient (profile attached or inferred)"""
    if code.profile is not None:
        if code.profile.m != 1:
            raise ConstructionError(f"{what} must be a constant-weight code (one block)")
        return code.profile.weights[0]
    weights = {bin(w).count('1') for w in code.words}
    if len(weights) != 1:
        raise ConstructionError(f"{what} is not constant-weight")
    return weights.pop()


def finish_construction(words, length, profile, guaranteed, name, params, check=True):
    code = BinaryCode(tuple(words), length, guaranteed, profile)
    result = ConstructionResult(code=code, guaranteed_distance=guaranteed,
                                provenance=f"{name}({_describe(params)})", params=params)
    if check and len(code) <= settings.construction_cap:
        report = verify_code(code)
        if not report.passed:
            raise VerificationError(f"{result.provenance} produced a code failing verification: "
                                    f"min distance {report.min_distance}, guaranteed {guaranteed}")
        result.verified_distance = report.min_distance
    logger.debug(f"{result.provenance}: {len(code)} words")
    return result


def concatenate(outer, inner):
    """
    Concatenate an (m, d2)_q outer code with a CWC(n, d1, w) inner code

    Each outer symbol s is replaced by the s-th inner codeword in sorted order.

    Returns:
        ConstructionResult: MCWC(m, n, d1*d2, w) of size |outer|
    """
    if len(inner) < outer.q:
        raise ConstructionError(f"inner code has {len(inner)} words, outer alphabet needs {outer.q}")
    _require_verified(outer, "outer code")
    _require_verified(inner, "inner code")
    w = _single_block(inner, "inner code")
    n = inner.length
    phi = inner.words[:outer.q]
    words = [concat_words((phi[s], n) for s in u) for u in outer.words]
    params = {'m': outer.length, 'n': n, 'q': outer.q,
              'd1': inner.claimed_distance, 'd2': outer.claimed_distance, 'w': w}
    return finish_construction(words, outer.length * n, WeightProfile.homogeneous(outer.length, n, w),
                               inner.claimed_distance * outer.claimed_distance, 'concatenate', params)


def _array_product(row_code, col_code):
    """
    Encode every k2-by-k1 information array: columns through col_code, then
    rows through row_code. Returns (words, m, n, k1, k2).
    """
    k1, row_enc = systematic_encoder(row_code)
    k2, col_enc = systematic_encoder(col_code)
    m, n = col_code.length, row_code.length
    words = []
    for info in range(2 ** (k1 * k2)):
        # info array read row-major: row r holds bits r*k1 .. r*k1 + k1 - 1
        info_rows = split_word(info, [k1] * k2) if k2 else []
        columns = []
        for j in range(k1):
            column = word_of((r >> (k1 - 1 - j)) & 1 for r in info_rows)
            columns.append(bits_of(col_enc[column], m))
        rows = [row_enc[word_of(col[i] for col in columns)] for i in range(m)]
        words.append(concat_words((r, n) for r in rows))
    return words, m, n, k1, k2


def pseudo_product(cwc, sys):
    """
    Pseudo-product of a systematic CWC(n, d1, w) and a systematic (m, d2) code

    Returns:
        ConstructionResult: MCWC(m, n, d1*d2, w) of size 2^(k1*k2)
    """
    _require_verified(cwc, "constant-weight ingredient")
    _require_verified(sys, "systematic ingredient")
    w = _single_block(cwc, "constant-weight ingredient")
    for code, what in ((cwc, "constant-weight ingredient"), (sys, "systematic ingredient")):
        if len(code) & (len(code) - 1) or find_systematic_set(code) is None:
            raise ConstructionError(f"{what} is not systematic")
    words, m, n, k1, k2 = _array_product(cwc, sys)
    params = {'m': m, 'n': n, 'd1': cwc.claimed_distance, 'd2': sys.claimed_distance,
              'w': w, 'k1': k1, 'k2': k2}
    return finish_construction(words, m * n, WeightProfile.homogeneous(m, n, w),
                               cwc.claimed_distance * sys.claimed_distance, 'pseudo_product', params)


def product_code(row_code, col_code):
    """Classical product of two binary linear codes: arrays with rows in row_code, columns in col_code"""
    _require_verified(row_code, "row code")
    _require_verified(col_code, "column code")
    words, m, n, k1, k2 = _array_product(row_code, col_code)
    params = {'m': m, 'n': n, 'k1': k1, 'k2': k2,
              'd1': row_code.claimed_distance, 'd2': col_code.claimed_distance}
    return finish_construction(words, m * n, None, row_code.claimed_distance * col_code.claimed_distance,
                               'product_code', params)


def pseudo_product_bounds(s_cwc, s_sys, k_linear=None):
    """
    The two lower bounds of the pseudo-product proposition

    Args:
        s_cwc (int): systematic exponent s(n, d1, w) of the constant-weight ingredient
        s_sys (int): systematic exponent s(m, d2)
        k_linear (int): dimension of a linear (m, d2) code, if known

    Returns:
        dict: 2^(s_cwc*s_sys) and, when k_linear is given, B^(s_cwc) = 2^(k_linear*s_cwc)
    """
    bounds = {'systematic': 2 ** (s_cwc * s_sys)}
    if k_linear is not None:
        if k_linear > s_sys:
            raise ConstructionError(f"a linear code of dimension {k_linear} is systematic, "
                                  f"so s(m,d2) >= {k_linear} > {s_sys}")
        bounds['linear'] = 2 ** (k_linear * s_cwc)
    return bounds


def complement_extend(code):
    """
    Systematic CWC(2n, 2d, n) from a systematic (n, d) code via x -> (x, x-bar)
    """
    report = _require_verified(code, "systematic code")
    if find_systematic_set(code) is None:
        raise ConstructionError("input code is not systematic")
    n = code.length
    words = [concat_words(((x, n), (complement(x, n), n))) for x in code.words]
    d = report.min_distance if report.min_distance != INFINITY else code.claimed_distance
    params = {'n': n, 'd': d, 'k': len(code).bit_length() - 1}
    return finish_construction(words, 2 * n, WeightProfile(((2 * n, n),)), 2 * d, 'complement_extend', params)


def append_extend(k, cwc):
    """
    Systematic CWC(n + 2k, d + 2, w + k) as {(x, x-bar, phi(x))}, phi mapping
    F_2^k in increasing order onto the sorted words of the CWC
    """
    if k < 0:
        raise ConstructionError(f"k must be >= 0, got {k}")
    if len(cwc) < 2 ** k:
        raise ConstructionError(f"need at least 2^{k} = {2 ** k} words, CWC has {len(cwc)}")
    _require_verified(cwc, "constant-weight code")
    w = _single_block(cwc, "constant-weight code")
    n = cwc.length
    words = [concat_words(((x, k), (complement(x, k), k), (cwc.words[x], n))) for x in range(2 ** k)]
    params = {'k': k, 'n': n, 'd': cwc.claimed_distance, 'w': w}
    return finish_construction(words, n + 2 * k, WeightProfile(((n + 2 * k, w + k),)),
                               cwc.claimed_distance + 2, 'append_extend', params)


def qary_expand(code, w):
    """
    MCWC(m, q*w, 2d, w) from an (m*w, d)_q code by replacing each symbol x
    with the length-q indicator of x

    Args:
        code (QaryCode): outer code of length m*w
        w (int): symbols per block
    """
    if w < 1 or code.length % w:
        raise ConstructionError(f"code length {code.length} is not divisible by w={w}")
    _require_verified(code, "q-ary code")
    q = code.q
    m = code.length // w
    words = [concat_words((1 << (q - 1 - x), q) for x in u) for u in code.words]
    params = {'m': m, 'q': q, 'w': w, 'd': code.claimed_distance}
    return finish_construction(words, code.length * q, WeightProfile.homogeneous(m, q * w, w),
                               2 * code.claimed_distance, 'qary_expand', params)


def qary_collapse(code, q, w=1):
    """Inverse of qary_expand: read each length-q indicator window back as its symbol"""
    if code.length % q:
        raise ConstructionError(f"length {code.length} is not a multiple of q={q}")
    words = []
    for word in code.words:
        symbols = []
        for window in split_word(word, [q] * (code.length // q)):
            if bin(window).count('1') != 1:
                raise ConstructionError(f"window {window:0{q}b} is not an indicator")
            symbols.append(q - window.bit_length())
        words.append(tuple(symbols))
    distance = max(1, code.claimed_distance // 2)
    return QaryCode(q, tuple(words), code.length // q, distance)


def _evaluate(gf, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = gf.add(gf.mul(acc, x), c)
    return acc


def reed_solomon(f, length, d):
    """
    Reed-Solomon code: all polynomials of degree < length - d + 1 evaluated at
    the first ``length`` field elements in canonical order

    Returns:
        QaryCode: q^(length-d+1) words, minimum distance exactly d
    """
    if length > f.q:
        raise ConstructionError(f"length {length} exceeds field order {f.q}")
    if not 1 <= d <= length:
        raise ConstructionError(f"need 1 <= d <= length, got d={d}, length={length}")
    return _rs_words(f, length, d, extended=False)


def extended_reed_solomon(f, length, d):
    """
    Reed-Solomon code of length up to q + 1; length q + 1 appends the
    coefficient of x^(k-1) (evaluation at infinity) and stays MDS
    """
    if length <= f.q:
        return reed_solomon(f, length, d)
    if length != f.q + 1:
        raise ConstructionError(f"length {length} exceeds q + 1 = {f.q + 1}")
    if not 1 <= d <= length:
        raise ConstructionError(f"need 1 <= d <= length, got d={d}, length={length}")
    return _rs_words(f, length, d, extended=True)


def _rs_words(f, length, d, extended):
    k = length - d + 1
    size = f.q ** k
    if size > settings.construction_cap * 64:
        raise ConstructionError(f"Reed-Solomon code of size {size} exceeds the construction cap")
    gf = galois_field(f)
    points = list(range(min(length, f.q)))
    words = []
    for coeffs in product(range(f.q), repeat=k):
        word = [_evaluate(gf, coeffs, x) for x in points]
        if extended:
            word.append(coeffs[k - 1])
        words.append(tuple(word))
    return QaryCode(f.q, tuple(words), length, d)
