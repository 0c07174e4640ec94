"""
Upper bounds, the transfer lower bound and the exact-search oracle for
M(m, n, d, w) and the heterogeneous T(w_1, n_1; ...; w_m, n_m; d)

All arithmetic is exact (integers and Fractions). Minimum distances of
multiply constant-weight codes are even, so an odd d is served by d + 1 and
the record says so.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb, prod
import logging

import numpy as np

from modules.clique import max_clique, adjacency_from_matrix
from modules.code_core import BinaryCode, WeightProfile, concat_words, INFINITY
from modules.config import settings
from modules.constructions import extended_reed_solomon, qary_expand
from modules.errors import BoundError, SearchLimitError
from modules.gf import prime_power, field_of_order

logger = logging.getLogger(__name__)

LOWER = 'lower'
UPPER = 'upper'
EXACT = 'exact'


@dataclass
class BoundRecord:
    """One value for a parameter cell with the rule or construction that produced it"""
    cell: tuple
    kind: str
    value: object
    provenance: str
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (LOWER, UPPER, EXACT):
            raise BoundError(f"unknown record kind {self.kind!r}")

    @property
    def is_lower(self):
        return self.kind in (LOWER, EXACT)

    @property
    def is_upper(self):
        return self.kind in (UPPER, EXACT)

    def to_dict(self):
        return {
            'cell': list(self.cell),
            'kind': self.kind,
            'value': 'inf' if self.value == INFINITY else int(self.value),
            'provenance': self.provenance,
            'details': {k: str(v) if isinstance(v, Fraction) else v for k, v in self.details.items()},
        }


def even_distance(d):
    """(d', note): the even distance that serves d"""
    if d < 1:
        raise BoundError(f"distance must be >= 1, got {d}")
    if d % 2:
        return d + 1, f" [odd d={d} lifted to {d + 1}]"
    return d, ''


def _check_cell(m, n, d, w):
    if m < 1 or n < 1 or not 0 <= w <= n:
        raise BoundError(f"invalid cell (m={m}, n={n}, d={d}, w={w})")


def trivial_upper(m, n, d, w, references):
    """
    M(m,n,d,w) <= A(nm, d, mw)

    Args:
        references: object with ``upper(kind, q, n, d, w)`` returning an int or None

    Returns:
        BoundRecord: +inf when no A value is known
    """
    _check_cell(m, n, d, w)
    d2, note = even_distance(d)
    value = references.upper('A', 2, m * n, d2, m * w) if references is not None else None
    if value is None:
        return BoundRecord((m, n, d, w), UPPER, INFINITY, f"trivial: A({m * n},{d2},{m * w}) unknown{note}")
    return BoundRecord((m, n, d, w), UPPER, value, f"trivial: A({m * n},{d2},{m * w}) <= {value}{note}")


# ---------------------------------------------------------------------------
# Johnson-type recursions
# ---------------------------------------------------------------------------

def _normalize(parts):
    # complementing a block preserves distances; weight-0 blocks are constant
    parts = [(n, min(w, n - w)) for n, w in parts]
    return tuple(sorted((n, w) for n, w in parts if w > 0))


def _average_bound(parts, d):
    """Average-intersection closed form, or None when its denominator is not positive"""
    u = d // 2
    lam = sum(w for _, w in parts) - u
    denominator = sum(Fraction(w * w, n) for n, w in parts) - lam
    if denominator <= 0:
        return None
    return int(Fraction(u) / denominator)


@lru_cache(maxsize=None)
def _johnson_profile(parts, d):
    """(value, rule) for T over normalized parts and even d"""
    if not parts:
        return 1, 'base: constant blocks'
    if d > 2 * sum(w for _, w in parts):
        return 1, 'base: distance exceeds twice the weight'
    if d <= 2:
        return prod(comb(n, w) for n, w in parts), 'base: all profile words'
    best, rule = INFINITY, None
    for i in range(len(parts)):
        if i and parts[i] == parts[i - 1]:
            continue
        n, w = parts[i]
        rest = parts[:i] + parts[i + 1:]
        sub, _ = _johnson_profile(_normalize(rest + ((n - 1, w - 1),)), d)
        value = (n * sub) // w
        if value < best:
            best, rule = value, f"johnson-shrink-weight on block ({w},{n}) via {sub}"
        if n - 1 >= w:
            sub, _ = _johnson_profile(_normalize(rest + ((n - 1, w),)), d)
            value = (n * sub) // (n - w)
            if value < best:
                best, rule = value, f"johnson-shrink-length on block ({w},{n}) via {sub}"
    value = _average_bound(parts, d)
    if value is not None and value < best:
        best, rule = value, 'johnson-average'
    return best, rule


def johnson_general(profile, d):
    """
    Best Johnson-type upper bound on T(w_1,n_1; ...; w_m,n_m; d)

    Args:
        profile (WeightProfile): block lengths and weights
        d (int): minimum distance

    Returns:
        BoundRecord: the minimum over the recursive single-block reductions and
        the average-intersection form (skipped when its denominator is <= 0)
    """
    d2, note = even_distance(d)
    value, rule = _johnson_profile(_normalize(profile.parts), d2)
    return BoundRecord((str(profile), d), UPPER, value, f"johnson-general: {rule}{note}",
                       {'profile': str(profile)})


@lru_cache(maxsize=None)
def _johnson_matrix(m, n, d, w):
    w = min(w, n - w)
    if w == 0:
        return 1, 'base: constant blocks'
    if d > 2 * m * w:
        return 1, 'base: distance exceeds twice the weight'
    if d <= 2:
        return comb(n, w) ** m, 'base: all profile words'
    sub, _ = _johnson_matrix(m, n - 1, d, w - 1)
    best = (n ** m * sub) // (w ** m)
    rule = f"johnson-shrink-weight via M({m},{n - 1},{d},{w - 1}) <= {sub}"
    sub, _ = _johnson_matrix(m, n - 1, d, w)
    value = (n ** m * sub) // ((n - w) ** m)
    if value < best:
        best, rule = value, f"johnson-shrink-length via M({m},{n - 1},{d},{min(w, n - 1 - w)}) <= {sub}"
    u = d // 2
    denominator = Fraction(m * w * w, n) - (m * w - u)
    if denominator > 0:
        value = int(Fraction(u) / denominator)
        if value < best:
            best, rule = value, 'johnson-average'
    return best, rule


def johnson_homogeneous(m, n, d, w):
    """Homogeneous Johnson recursion (whole-matrix steps), memoized"""
    _check_cell(m, n, d, w)
    d2, note = even_distance(d)
    value, rule = _johnson_matrix(m, n, d2, w)
    return BoundRecord((m, n, d, w), UPPER, value, f"johnson: {rule}{note}")


def singleton_like(m, n, d, w):
    """
    M(m,n,d,w) <= (n/w)^s with s = mw - d/2 + 1, valid when 1 <= s <= m

    Returns:
        BoundRecord or None when the condition fails
    """
    _check_cell(m, n, d, w)
    d2, note = even_distance(d)
    s = m * w - d2 // 2 + 1
    if w == 0 or s > m or s < 1:
        return None
    return BoundRecord((m, n, d, w), UPPER, n ** s // w ** s, f"singleton-like: (n/w)^{s}{note}", {'s': s})


def _shrink_index(m, d, w):
    # smallest i >= 0 with m(w - i) - d/2 + 1 <= m
    excess = m * w - d // 2 + 1 - m
    return max(0, -(-excess // m))


def johnson_closed_form(m, n, d, w):
    """
    Nested-floor bound from i whole-matrix weight reductions followed by the
    Singleton-like bound; the looser n^s/(w-i)^s form rides along in details

    Returns:
        BoundRecord or None when no valid i exists
    """
    _check_cell(m, n, d, w)
    d2, note = even_distance(d)
    if w == 0:
        return None
    i = _shrink_index(m, d2, w)
    if i == 0:
        record = singleton_like(m, n, d, w)
        if record is None:
            return None
        record.provenance = f"johnson-nested (i=0): {record.provenance}"
        record.details.update({'i': 0, 't': record.details['s']})
        return record
    if i >= w:
        return None
    t = m * (w - i) - d2 // 2 + 1
    value = (n - i) ** t // (w - i) ** t
    for j in range(i - 1, -1, -1):
        value = ((n - j) ** m * value) // ((w - j) ** m)
    s = m * w - d2 // 2 + 1
    loose = Fraction(n ** s, (w - i) ** s)
    return BoundRecord((m, n, d, w), UPPER, value, f"johnson-nested: i={i}, t={t}{note}",
                       {'i': i, 't': t, 'loose': loose})


def tightness_window(m, n, d, w):
    """
    Interval [1, w^s/(w-i)^s] bounding lim sup M(m,n,d,w) / (n/w)^s as n grows

    Returns:
        tuple: (Fraction lower, Fraction upper)
    """
    d2, _ = even_distance(d)
    if w < 1:
        raise BoundError("the ratio window needs w >= 1")
    s = m * w - d2 // 2 + 1
    i = _shrink_index(m, d2, w)
    if i >= w:
        raise BoundError(f"no valid reduction count for (m={m}, d={d}, w={w})")
    return Fraction(1), Fraction(w ** s, (w - i) ** s)


def tightness_conditions(m, n, d, w):
    """(s, q) when the exact case applies, else None"""
    d2, _ = even_distance(d)
    if w < 1 or n % w:
        return None
    s = m * w - d2 // 2 + 1
    q = n // w
    if not 1 <= s <= m or prime_power(q) is None or q < m * w - 1:
        return None
    return s, q


def tightness_construction(m, n, d, w):
    """The achieving code: extended Reed-Solomon over GF(n/w), length mw, distance d/2, expanded"""
    conditions = tightness_conditions(m, n, d, w)
    if conditions is None:
        raise BoundError(f"exact-tightness conditions fail for ({m},{n},{d},{w})")
    d2, _ = even_distance(d)
    _, q = conditions
    outer = extended_reed_solomon(field_of_order(q), m * w, d2 // 2)
    return qary_expand(outer, w)


def tightness_exact(m, n, d, w, construct=True):
    """
    Exact value (n/w)^s when s <= m, w | n, n/w >= mw - 1 and n/w a prime power

    The closed form is cross-checked against the Reed-Solomon construction
    whenever the code is small enough to build.

    Returns:
        BoundRecord or None when the conditions fail
    """
    _check_cell(m, n, d, w)
    conditions = tightness_conditions(m, n, d, w)
    if conditions is None:
        return None
    s, q = conditions
    value = q ** s
    details = {'s': s, 'q': q}
    if construct and value <= settings.construction_cap:
        result = tightness_construction(m, n, d, w)
        if result.size != value:
            raise BoundError(f"tightness construction gave {result.size} words, closed form {value}")
        details['construction'] = result.provenance
    return BoundRecord((m, n, d, w), EXACT, value, f"tightness: (n/w)^{s} with q={q}", details)


def eb_transfer(m, n, d, w, a_lower):
    """
    Lower bound ceil(a * C(n,w)^m / C(mn,mw)) on M(m,n,d,w) from a lower
    bound a on A(mn, d, mw)
    """
    _check_cell(m, n, d, w)
    if a_lower < 0:
        raise BoundError(f"A lower bound must be nonnegative, got {a_lower}")
    numerator = a_lower * comb(n, w) ** m
    value = -(-numerator // comb(m * n, m * w))
    return BoundRecord((m, n, d, w), LOWER, value, f"transfer: A({m * n},{d},{m * w}) >= {a_lower}",
                       {'ratio': Fraction(comb(n, w) ** m, comb(m * n, m * w))})


# ---------------------------------------------------------------------------
# Exact search
# ---------------------------------------------------------------------------

def profile_words(m, n, w):
    """All m-block words of block weight w, in increasing (lexicographic) order"""
    blocks = sorted(sum(1 << (n - 1 - j) for j in support) for support in combinations(range(n), w))
    return [concat_words((b, n) for b in choice) for choice in product(blocks, repeat=m)]


def _compatibility(words, length, d):
    """Bitset adjacency: pairs at distance >= d"""
    bits = np.array([[(x >> (length - 1 - i)) & 1 for i in range(length)] for x in words], dtype=np.int32)
    weight = int(bits[0].sum())
    adjacency = []
    for start in range(0, len(words), 1024):
        overlap = bits[start:start + 1024] @ bits.T
        adjacency.extend(adjacency_from_matrix(2 * weight - 2 * overlap >= d, start))
    return adjacency


def _search(m, n, d, w, budget=None, vertex_cap=None, stop_at=None):
    budget = settings.node_budget if budget is None else budget
    vertex_cap = settings.vertex_cap if vertex_cap is None else vertex_cap
    d2, note = even_distance(d)
    vertices = comb(n, w) ** m
    if vertices > vertex_cap:
        raise SearchLimitError(f"{vertices} profile words exceed the vertex cap {vertex_cap}")
    words = profile_words(m, n, w)
    if d2 <= 2 or len(words) == 1:
        # distinct words of equal block weights are always >= 2 apart
        return words, True, 0, note
    adjacency = _compatibility(words, m * n, d2)
    # vertex-transitive graph: some maximum clique contains vertex 0
    result = max_clique(adjacency, budget, root=(0,), stop_at=stop_at)
    clique = [words[v] for v in result.clique]
    logger.info(f"exact search ({m},{n},{d},{w}): {len(clique)} words, "
                f"{'complete' if result.complete else 'incomplete'} after {result.nodes} nodes")
    return clique, result.complete, result.nodes, note


def exact_search(m, n, d, w, budget=None, vertex_cap=None, stop_at=None):
    """
    Maximum clique of the compatibility graph of all profile words

    Args:
        budget (int): branch-node limit (configured default when None)
        vertex_cap (int): largest graph searched (configured default when None)
        stop_at (int): a known upper bound; reaching it proves optimality early

    Returns:
        BoundRecord: exact when the search completed, else a lower bound
        with provenance 'search (incomplete)'
    """
    _check_cell(m, n, d, w)
    clique, complete, nodes, note = _search(m, n, d, w, budget, vertex_cap, stop_at)
    if complete:
        return BoundRecord((m, n, d, w), EXACT, len(clique), f"search (complete){note}", {'nodes': nodes})
    return BoundRecord((m, n, d, w), LOWER, len(clique), f"search (incomplete){note}", {'nodes': nodes})


def exact_search_code(m, n, d, w, budget=None):
    """The clique found by exact_search as a verified-ready MCWC"""
    clique, complete, _, _ = _search(m, n, d, w, budget)
    if not complete:
        logger.warning(f"⚠️ search for ({m},{n},{d},{w}) hit its budget, returning the best clique found")
    return BinaryCode(tuple(clique), m * n, d, WeightProfile.homogeneous(m, n, w))


class BoundCalculator:
    """Applies every upper-bound rule to a cell"""

    def __init__(self):
        logger.info("✅ Bound calculator initialized")

    def upper_records(self, m, n, d, w, references=None):
        """
        All applicable upper-bound records for a cell

        Returns:
            list: trivial, homogeneous and general Johnson, Singleton-like and
            nested records (inapplicable rules omitted)
        """
        records = [
            trivial_upper(m, n, d, w, references),
            johnson_homogeneous(m, n, d, w),
            johnson_general(WeightProfile.homogeneous(m, n, w), d),
        ]
        records[2].cell = (m, n, d, w)
        for rule in (singleton_like, johnson_closed_form):
            record = rule(m, n, d, w)
            if record is not None:
                records.append(record)
        return records

    def cell_report(self, m, n, d, w, references=None, exact=False, budget=None):
        """
        Per-rule records plus the best lower and upper values for one cell

        Returns:
            dict: ``records`` (list of BoundRecord), ``lower``, ``upper``, ``exact``
        """
        records = self.upper_records(m, n, d, w, references)
        tight = tightness_exact(m, n, d, w)
        if tight is not None:
            records.append(tight)
        if references is not None:
            a_lower = references.lower('A', 2, m * n, even_distance(d)[0], m * w)
            if a_lower is not None:
                records.append(eb_transfer(m, n, d, w, a_lower))
        best_upper = min(r.value for r in records if r.is_upper)
        if exact:
            try:
                records.append(exact_search(m, n, d, w, budget=budget,
                                            stop_at=None if best_upper == INFINITY else best_upper))
            except SearchLimitError as e:
                logger.warning(f"⚠️ exact search skipped: {e}")
        lower = max((r.value for r in records if r.is_lower), default=1)
        upper = min(r.value for r in records if r.is_upper)
        return {'records': records, 'lower': lower, 'upper': upper, 'exact': lower == upper}


# Initialize global bound calculator instance
bound_calculator = BoundCalculator()
