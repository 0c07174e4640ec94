"""
Resolvable designs and the design-to-MCWC conversion

Generates affine planes AG(2, q) and one-factorizations of K_v (both
resolvable 2-designs), reads and writes designs from text files, checks the
design axioms exhaustively, and turns each parallel class into one m-by-v
matrix whose rows are the indicator vectors of the class's blocks.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
import logging

from modules.code_core import WeightProfile, concat_words
from modules.constructions import finish_construction
from modules.errors import DesignError, FieldError
from modules.gf import field_of_order, galois_field

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResolvableDesign:
    """Points 0..v-1 with parallel classes of k-subsets"""
    v: int
    k: int
    t: int
    classes: tuple
    family: str = 'external'

    def __post_init__(self):
        # canonical form: sorted points, blocks ordered by smallest point, classes sorted
        classes = tuple(sorted(
            tuple(sorted((tuple(sorted(block)) for block in cls), key=lambda b: b[0] if b else -1))
            for cls in self.classes))
        object.__setattr__(self, 'classes', classes)

    @property
    def blocks(self):
        return [block for cls in self.classes for block in cls]

    @property
    def m(self):
        return self.v // self.k


def class_count_formula(v, k, t):
    """Number of parallel classes of a resolvable t-(v,k,1) design: k*C(v,t) / (v*C(k,t))"""
    return Fraction(k * comb(v, t), v * comb(k, t))


def verify_design(design):
    """
    Exhaustive check of the design axioms

    Returns:
        dict: per-axiom flags plus ``valid`` (partition + sizes + every
        t-subset in exactly one block) and ``packing`` (every t-subset in at
        most one block, which is all the distance argument needs)
    """
    v, k, t = design.v, design.k, design.t
    problems = []
    if k < 1 or v % k:
        problems.append(f"block size {k} does not divide v={v}")
    for index, cls in enumerate(design.classes):
        if any(len(block) != k for block in cls):
            problems.append(f"class {index} has a block of size != {k}")
        points = sorted(p for block in cls for p in block)
        if points != list(range(v)):
            problems.append(f"class {index} does not partition the {v} points")
    cover = {}
    for block in design.blocks:
        for subset in combinations(block, t):
            cover[subset] = cover.get(subset, 0) + 1
    repeated = sum(1 for c in cover.values() if c > 1)
    missing = comb(v, t) - len(cover)
    blocks = design.blocks
    max_meet = max((len(set(a) & set(b)) for a, b in combinations(blocks, 2)), default=0)
    structural = not problems
    report = {
        'v': v, 'k': k, 't': t,
        'classes': len(design.classes),
        'formula_classes': str(class_count_formula(v, k, t)) if k and v else 'n/a',
        'problems': problems,
        'repeated_t_subsets': repeated,
        'uncovered_t_subsets': missing,
        'max_block_intersection': max_meet,
        'packing': structural and repeated == 0 and max_meet <= t - 1,
    }
    report['valid'] = report['packing'] and missing == 0
    return report


def affine_plane(q):
    """
    Resolvable 2-(q^2, q, 1) design on GF(q)^2, point (x, y) numbered x*q + y

    Classes: the vertical lines x = c, then for each slope a the lines y = a*x + b.
    """
    try:
        gf = galois_field(field_of_order(q))
    except FieldError as e:
        raise DesignError(f"affine plane needs a prime-power order: {e}") from e
    classes = [[[c * q + y for y in range(q)] for c in range(q)]]
    for a in range(q):
        classes.append([[x * q + gf.add(gf.mul(a, x), b) for x in range(q)] for b in range(q)])
    design = ResolvableDesign(v=q * q, k=q, t=2, classes=tuple(classes), family=f"affine({q})")
    logger.debug(f"affine plane of order {q}: {len(design.classes)} classes")
    return design


def one_factorization(v):
    """Round-robin (circle method) resolution of K_v into v - 1 perfect matchings"""
    if v < 2 or v % 2:
        raise DesignError(f"one-factorizations need an even v >= 2, got {v}")
    fixed = v - 1
    rounds = []
    for r in range(v - 1):
        pairs = [[r, fixed]]
        for i in range(1, v // 2):
            pairs.append([(r + i) % (v - 1), (r - i) % (v - 1)])
        rounds.append(pairs)
    return ResolvableDesign(v=v, k=2, t=2, classes=tuple(rounds), family=f"one_factorization({v})")


def design_to_mcwc(design):
    """
    One m-by-v matrix per parallel class (m = v/k, row weight k)

    Returns:
        ConstructionResult: MCWC(v/k, v, 2(k-t+1)v/k, k), one word per class
    """
    report = verify_design(design)
    if not report['packing']:
        raise DesignError(f"design failed verification: {report['problems'] or report}")
    v, k, t = design.v, design.k, design.t
    m = v // k
    words = []
    for cls in design.classes:
        rows = [sum(1 << (v - 1 - p) for p in block) for block in cls]
        words.append(concat_words((row, v) for row in rows))
    params = {'family': design.family, 'v': v, 'k': k, 't': t,
              'classes': len(design.classes), 'complete': report['valid']}
    if not report['valid']:
        logger.warning(f"⚠️ {design.family}: incomplete design, recording {len(design.classes)} classes")
    return finish_construction(words, m * v, WeightProfile.homogeneous(m, v, k),
                               2 * (k - t + 1) * m, 'design_to_mcwc', params)


def design_loads(text):
    """
    Parse a design file: header '# design v=<v> k=<k> t=<t>', then one
    parallel class per line, blocks separated by '|', points by ','
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith('# design'):
        raise DesignError("missing '# design v=.. k=.. t=..' header")
    fields = dict(token.split('=', 1) for token in lines[0][len('# design'):].split() if '=' in token)
    try:
        v, k, t = int(fields['v']), int(fields['k']), int(fields['t'])
    except (KeyError, ValueError) as e:
        raise DesignError(f"malformed design header {lines[0]!r}") from e
    classes = []
    for line in lines[1:]:
        if line.startswith('#'):
            continue
        try:
            classes.append([[int(p) for p in block.split(',')] for block in line.split('|')])
        except ValueError as e:
            raise DesignError(f"malformed class line {line!r}") from e
    return ResolvableDesign(v=v, k=k, t=t, classes=tuple(classes), family=fields.get('family', 'external'))


def design_dumps(design):
    lines = [f"# design v={design.v} k={design.k} t={design.t} family={design.family}"]
    for cls in design.classes:
        lines.append('|'.join(','.join(map(str, block)) for block in cls))
    return '\n'.join(lines) + '\n'


def design_read(path):
    with open(path, 'r') as fh:
        return design_loads(fh.read())


def design_write(path, design):
    with open(path, 'w') as fh:
        fh.write(design_dumps(design))
    return path
