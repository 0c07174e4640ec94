"""
Best-known table of M(m, n, d, w)

Collects, per cell, every construction size, every upper-bound rule, the
transfer bound and (within budget) the exact-search value; rejects any
insertion that would put a best lower bound above a best upper bound.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
import threading
import logging

import numpy as np
import pandas as pd

from modules import catalog
from modules.bounds import (BoundRecord, LOWER, bound_calculator, even_distance,
                            exact_search, exact_search_code, johnson_general)
from modules.code_core import WeightProfile, INFINITY
from modules.config import settings
from modules.constructions import (concatenate, extended_reed_solomon, pseudo_product,
                                   complement_extend, qary_expand)
from modules.designs import affine_plane, one_factorization, design_to_mcwc
from modules.errors import BoundError, ConsistencyError, McwcError, SearchLimitError
from modules.gf import field_of_order, prime_power

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ['m', 'n', 'd', 'w', 'lower', 'upper', 'exact_flag', 'lower_provenance', 'upper_provenance']
REFERENCE_COLUMNS = ['kind', 'q', 'n', 'd', 'w', 'lower', 'upper', 'source']


def _optional_int(value):
    if value is None or (isinstance(value, float) and np.isnan(value)) or value == '':
        return None
    return int(value)


class ReferenceValues:
    """Ingested A(n,d,w), A_q(n,d) and B(n,d) values keyed by (kind, q, n, d, w)"""

    def __init__(self):
        self._values = {}
        self._lock = threading.Lock()

    @classmethod
    def from_csv(cls, path=None):
        """Load a reference CSV (``kind,q,n,d,w,lower,upper,source``)"""
        path = settings.reference_table if path is None else path
        frame = pd.read_csv(path, comment='#')
        missing = set(REFERENCE_COLUMNS) - set(frame.columns)
        if missing:
            raise BoundError(f"reference table {path} lacks columns {sorted(missing)}")
        refs = cls()
        for row in frame.itertuples(index=False):
            refs.add(row.kind, int(row.q), int(row.n), int(row.d), _optional_int(row.w),
                     _optional_int(row.lower), _optional_int(row.upper), str(row.source))
        logger.info(f"📚 Loaded {len(refs)} reference values from {path}")
        return refs

    def copy(self):
        clone = ReferenceValues()
        with self._lock:
            clone._values = dict(self._values)
        return clone

    def __len__(self):
        return len(self._values)

    @staticmethod
    def _key(kind, q, n, d, w):
        if kind not in ('A', 'Aq', 'B'):
            raise BoundError(f"unknown reference kind {kind!r}")
        return kind, q, n, d, w if kind == 'A' else None

    def add(self, kind, q, n, d, w, lower, upper, source):
        """Merge a value, keeping the larger lower and the smaller upper bound"""
        key = self._key(kind, q, n, d, w)
        with self._lock:
            old_lower, old_upper, old_source = self._values.get(key, (None, None, ''))
            if lower is not None and (old_lower is None or lower > old_lower):
                old_lower, old_source = lower, source
            if upper is not None and (old_upper is None or upper < old_upper):
                old_upper, old_source = upper, source
            if old_lower is not None and old_upper is not None and old_lower > old_upper:
                raise ConsistencyError(f"reference {key}: lower {old_lower} > upper {old_upper} ({source})")
            self._values[key] = (old_lower, old_upper, old_source)

    def lower(self, kind, q, n, d, w=None):
        return self._values.get(self._key(kind, q, n, d, w), (None, None, ''))[0]

    def upper(self, kind, q, n, d, w=None):
        return self._values.get(self._key(kind, q, n, d, w), (None, None, ''))[1]

    def source(self, kind, q, n, d, w=None):
        return self._values.get(self._key(kind, q, n, d, w), (None, None, ''))[2]

    def to_frame(self):
        rows = [{'kind': k[0], 'q': k[1], 'n': k[2], 'd': k[3], 'w': k[4],
                 'lower': v[0], 'upper': v[1], 'source': v[2]}
                for k, v in sorted(self._values.items(), key=lambda kv: str(kv[0]))]
        return pd.DataFrame(rows, columns=REFERENCE_COLUMNS)


class BoundTable:
    """Cell -> records, with lower <= upper enforced on every insertion"""

    def __init__(self, references=None):
        self.references = references if references is not None else ReferenceValues()
        self.cells = {}
        self._lock = threading.Lock()

    def insert(self, record):
        """
        Add a record; duplicates are ignored

        Raises:
            ConsistencyError: the cell's best lower would exceed its best upper
        """
        cell = tuple(record.cell)
        with self._lock:
            records = self.cells.setdefault(cell, [])
            if any(r.kind == record.kind and r.value == record.value and r.provenance == record.provenance
                   for r in records):
                return
            lower = self._best(records + [record], lower=True)
            upper = self._best(records + [record], lower=False)
            if lower is not None and upper is not None and lower.value > upper.value:
                raise ConsistencyError(
                    f"cell {cell}: lower {lower.value} [{lower.provenance}] > "
                    f"upper {upper.value} [{upper.provenance}]")
            records.append(record)

    @staticmethod
    def _best(records, lower):
        if lower:
            candidates = [r for r in records if r.is_lower]
            return max(candidates, key=lambda r: r.value, default=None)
        candidates = [r for r in records if r.is_upper]
        return min(candidates, key=lambda r: r.value, default=None)

    def best(self, cell):
        """(best lower record, best upper record) for a cell"""
        records = self.cells.get(tuple(cell), [])
        return self._best(records, lower=True), self._best(records, lower=False)

    def records(self, cell):
        return list(self.cells.get(tuple(cell), []))

    def to_frame(self):
        """One row per cell, ordered by (m, n, d, w)"""
        rows = []
        for cell in sorted(self.cells):
            lower, upper = self.best(cell)
            low = lower.value if lower is not None else 1
            high = upper.value if upper is not None else INFINITY
            rows.append({
                'm': cell[0], 'n': cell[1], 'd': cell[2], 'w': cell[3],
                'lower': low,
                'upper': 'inf' if high == INFINITY else int(high),
                'exact_flag': int(low == high),
                'lower_provenance': lower.provenance if lower is not None else 'trivial: single word',
                'upper_provenance': upper.provenance if upper is not None else 'none',
            })
        return pd.DataFrame(rows, columns=TABLE_COLUMNS)


# ---------------------------------------------------------------------------
# Lower-bound offers: (distance, size, provenance) for one (m, n, w) slice
# ---------------------------------------------------------------------------

@dataclass
class LowerOffer:
    """A code with profile (m, n, w) and verified distance; serves every d <= distance"""
    distance: int
    size: int
    provenance: str


def _build_or_count(size, build, provenance):
    # codes up to the construction cap are built and verified, larger ones counted
    if size <= settings.construction_cap:
        result = build()
        return result.size, result.provenance
    return size, f"{provenance} (counted, not expanded)"


def _rs_offers(m, n, w):
    """Reed-Solomon over GF(n/w), length mw, expanded symbol-by-symbol"""
    if n % w:
        return []
    q = n // w
    if prime_power(q) is None or m * w > q + 1 or q > settings.field_cap:
        return []
    offers = []
    for rs_distance in range(1, m * w + 1):
        size = q ** (m * w - rs_distance + 1)

        def build(rs_distance=rs_distance):
            return qary_expand(extended_reed_solomon(field_of_order(q), m * w, rs_distance), w)

        count, provenance = _build_or_count(
            size, build, f"qary_expand(RS[{m * w},{m * w - rs_distance + 1},{rs_distance}]_{q}, w={w})")
        offers.append(LowerOffer(2 * rs_distance, count, provenance))
    return offers


def _qary_offers(m, n, w, references):
    """w = 1: M(m, n, 2d, 1) >= A_n(m, d) from ingested q-ary values"""
    if w != 1:
        return []
    offers = []
    for d in range(1, m + 1):
        value = references.lower('Aq', n, m, d)
        if value is not None:
            offers.append(LowerOffer(2 * d, value, f"qary_expand of A_{n}({m},{d}) >= {value} "
                                                   f"[{references.source('Aq', n, m, d)}]"))
    return offers


def _largest_prime_power(limit):
    for q in range(limit, 1, -1):
        if prime_power(q) is not None:
            return q
    return None


def _concatenation_offers(m, n, w):
    """RS outer code over the largest usable field, searched CWC(n, d1, w) inner code"""
    if m < 2 or w == 0 or w == n or comb(n, w) > settings.vertex_cap:
        return []
    offers = []
    for d1 in range(4, 2 * min(w, n - w) + 1, 2):
        try:
            inner = exact_search_code(1, n, d1, w)
        except (SearchLimitError, McwcError) as e:
            logger.debug(f"no inner CWC({n},{d1},{w}): {e}")
            continue
        q = _largest_prime_power(len(inner))
        if q is None or m > q + 1:
            continue
        for d2 in range(1, m + 1):
            size = q ** (m - d2 + 1)

            def build(d2=d2, q=q, inner=inner):
                return concatenate(extended_reed_solomon(field_of_order(q), m, d2), inner)

            count, provenance = _build_or_count(
                size, build, f"concatenate(RS[{m},{m - d2 + 1},{d2}]_{q}, CWC({n},{d1},{w}))")
            offers.append(LowerOffer(d1 * d2, count, provenance))
    return offers


def _systematic_ingredients(length):
    """Systematic binary codes of the given length: (code, name)"""
    names = [f"full-{length}", f"rep-{length}"]
    if length >= 2:
        names.append(f"even-{length}")
    names += [name for name in ('lin-4-3-2', 'lin-6-2-4', 'lin-8-4-4') if int(name.split('-')[1]) == length]
    if length >= 2 and length & (length - 1) == 0:
        names.append(f"rm-1-{length.bit_length() - 1}")
    return [(catalog.builtin(name), name) for name in dict.fromkeys(names)]


def _pseudo_product_offers(m, n, w):
    """Systematic CWC(n, 2d', n/2) from complement_extend, times a systematic length-m code"""
    if n % 2 or w != n // 2:
        return []
    offers = []
    for half, half_name in _systematic_ingredients(n // 2):
        cwc = complement_extend(half).code
        k1 = len(cwc).bit_length() - 1
        for sys, sys_name in _systematic_ingredients(m):
            k2 = len(sys).bit_length() - 1
            size = 2 ** (k1 * k2)

            def build(cwc=cwc, sys=sys):
                return pseudo_product(cwc, sys)

            count, provenance = _build_or_count(
                size, build, f"pseudo_product(complement_extend({half_name}), {sys_name})")
            offers.append(LowerOffer(cwc.claimed_distance * sys.claimed_distance, count, provenance))
    return offers


def _design_offers(m, n, w):
    offers = []
    designs = []
    if w * w == n and m == w and prime_power(w) is not None:
        designs.append(affine_plane(w))
    if w == 2 and n % 2 == 0 and m == n // 2:
        designs.append(one_factorization(n))
    for design in designs:
        result = design_to_mcwc(design)
        offers.append(LowerOffer(result.guaranteed_distance, result.size, result.provenance))
    return offers


def lower_offers(m, n, w, references):
    """Every construction that yields an MCWC with profile (m, n, w)"""
    offers = []
    for source in (lambda: _rs_offers(m, n, w),
                   lambda: _qary_offers(m, n, w, references),
                   lambda: _design_offers(m, n, w),
                   lambda: _pseudo_product_offers(m, n, w),
                   lambda: _concatenation_offers(m, n, w)):
        try:
            offers.extend(source())
        except McwcError as e:
            logger.warning(f"⚠️ construction skipped for ({m},{n},{w}): {e}")
    # a code of size 1 also serves any distance
    offers.append(LowerOffer(INFINITY, 1, 'trivial: single word'))
    return offers


def _best_offer(offers, d):
    usable = [o for o in offers if o.distance >= d]
    return max(usable, key=lambda o: (o.size, -len(o.provenance)))


# ---------------------------------------------------------------------------
# Table driver
# ---------------------------------------------------------------------------

def _prime_a_references(references, m, n, d, w):
    """Make sure an upper bound on A(mn, d, mw) exists for the trivial rule"""
    d2, _ = even_distance(d)
    if references.upper('A', 2, m * n, d2, m * w) is None:
        record = johnson_general(WeightProfile(((m * n, m * w),)), d2)
        references.add('A', 2, m * n, d2, m * w, None, record.value, record.provenance)


def evaluate_cell(table, m, n, d, w, offers, exact=True, budget=None):
    """Insert every record for one cell into the table"""
    cell = (m, n, d, w)
    references = table.references
    _prime_a_references(references, m, n, d, w)
    report = bound_calculator.cell_report(m, n, d, w, references=references)
    for record in report['records']:
        table.insert(record)
    offer = _best_offer(offers, even_distance(d)[0])
    table.insert(BoundRecord(cell, LOWER, offer.size, offer.provenance))
    if exact:
        lower, upper = table.best(cell)
        if lower.value < upper.value:
            try:
                table.insert(exact_search(m, n, d, w, budget=budget, stop_at=upper.value))
            except SearchLimitError as e:
                logger.debug(f"cell {cell}: {e}")


def parse_range(text):
    """'1..3' -> [1, 2, 3]; '4' -> [4]; '2,4,6' -> [2, 4, 6]"""
    text = str(text).strip()
    try:
        if '..' in text:
            start, stop = text.split('..', 1)
            return list(range(int(start), int(stop) + 1))
        return [int(x) for x in text.split(',')]
    except ValueError as e:
        raise BoundError(f"malformed range {text!r}") from e


def grid_cells(m_values, n_values, w_values, d_values=None):
    """All cells with 1 <= w <= n and even d <= mn (or the given d values)"""
    cells = []
    for m in m_values:
        for n in n_values:
            for w in w_values:
                if not 1 <= w <= n:
                    continue
                top = max(2, m * n)
                ds = d_values if d_values is not None else range(2, top + 1, 2)
                cells.extend((m, n, d, w) for d in ds)
    return cells


def table_build(cells, references=None, exact=True, budget=None, threads=None):
    """
    Evaluate every cell: constructions, upper-bound rules, transfer and search

    Args:
        cells (list): (m, n, d, w) tuples
        references (ReferenceValues): ingested values (default reference table); left unchanged
        exact (bool): run the exact-search oracle where it fits the vertex cap
        budget (int): node budget per search
        threads (int): worker threads over (m, n, w) slices

    Returns:
        BoundTable: deterministic for given cells, budget and references

    Raises:
        ConsistencyError: a cell's best lower bound exceeded its best upper bound
    """
    references = ReferenceValues.from_csv() if references is None else references.copy()
    threads = settings.threads if threads is None else max(1, threads)
    table = BoundTable(references)
    slices = {}
    for m, n, d, w in cells:
        slices.setdefault((m, n, w), []).append(d)

    def run_slice(key):
        m, n, w = key
        offers = lower_offers(m, n, w, references)
        for d in sorted(slices[key]):
            evaluate_cell(table, m, n, d, w, offers, exact=exact, budget=budget)
        logger.debug(f"slice {key}: {len(slices[key])} cells done")

    if threads == 1:
        for key in sorted(slices):
            run_slice(key)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_slice, sorted(slices)))
    logger.info(f"📊 Table built: {len(table.cells)} cells")
    return table


def table_write(table, path, manifest=None):
    """CSV export preceded by '# manifest:' comment lines"""
    frame = table.to_frame()
    with open(path, 'w') as fh:
        if manifest is not None:
            fh.write(manifest.comment_block())
        frame.to_csv(fh, index=False)
    return path


def table_read(path):
    return pd.read_csv(path, comment='#')
