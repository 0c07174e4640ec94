"""
Asymptotic rate curves for multiply constant-weight codes with omega = 1/2

Every rate is in bits per coordinate (base-2 logarithms). Lower-bound curves
come from the concatenation, pseudo-product and q-ary expansion constructions;
the upper curve is the linear-programming bound on constant-weight rates,
which also bounds mu(delta, omega) because the two rates coincide.
"""
from dataclasses import dataclass
from math import comb, log2, sqrt
import logging

import numpy as np
import pandas as pd

from modules.errors import DomainError

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ['curve', 'delta', 'rate']
_TOLERANCE = 1e-12


def _as_array(x):
    return np.asarray(x, dtype=float)


def entropy(x):
    """
    Binary entropy H(x) with H(0) = H(1) = 0

    Args:
        x (float | array-like): values in [0, 1]

    Returns:
        float or np.ndarray matching the input
    """
    values = _as_array(x)
    if np.any((values < -_TOLERANCE) | (values > 1 + _TOLERANCE)) or np.any(np.isnan(values)):
        raise DomainError(f"entropy argument outside [0, 1]: {x}")
    values = np.clip(values, 0.0, 1.0)
    with np.errstate(divide='ignore', invalid='ignore'):
        h = -values * np.log2(values) - (1 - values) * np.log2(1 - values)
    h = np.where((values == 0) | (values == 1), 0.0, h)
    return float(h) if h.ndim == 0 else h


def _g(x):
    return entropy((1 - sqrt(max(0.0, 1 - x))) / 2)


def mrrw_upper(delta, omega):
    """
    Upper bound g(u^2), u = -delta + sqrt(delta^2 - 2 delta + 4 omega (1 - omega))

    Returns 0 once u drops to 0 (no codes of positive rate beyond that distance).
    """
    if not 0 <= delta < 1 or not 0 < omega < 1:
        raise DomainError(f"need 0 <= delta < 1 and 0 < omega < 1, got ({delta}, {omega})")
    discriminant = delta * delta - 2 * delta + 4 * omega * (1 - omega)
    if discriminant < 0:
        raise DomainError(f"negative discriminant {discriminant} at (delta={delta}, omega={omega})")
    u = -delta + sqrt(discriminant)
    if u <= 0:
        return 0.0
    return _g(u * u)


def mrrw_special(delta):
    """H(1/2 - sqrt(delta (1 - delta))), the omega = 1/2 form, for 0 <= delta <= 1/2"""
    if not 0 <= delta <= 0.5:
        raise DomainError(f"the balanced-weight form needs 0 <= delta <= 1/2, got {delta}")
    return entropy(max(0.0, 0.5 - sqrt(delta * (1 - delta))))


def tvz_rate(q, delta):
    """Rate 1 - delta - 1/(sqrt(q) - 1) of the algebraic-geometry outer codes, clamped at 0"""
    if q < 4 or not 0 <= delta <= 1:
        raise DomainError(f"need q >= 4 and 0 <= delta <= 1, got q={q}, delta={delta}")
    return max(0.0, 1 - delta - 1 / (sqrt(q) - 1))


@dataclass(frozen=True)
class InnerCodeSpec:
    """A balanced-weight CWC(n, d, n/2) with q codewords, used as an inner code"""
    n: int
    d: int
    q: int
    label: str

    @property
    def w(self):
        return self.n // 2

    @property
    def cutoff(self):
        """Largest relative distance with positive concatenated rate"""
        return (self.d / self.n) * (1 - 1 / (sqrt(self.q) - 1))

    def supported_by(self, references):
        """True when an ingested lower bound on A(n, d, n/2) is at least q"""
        known = references.lower('A', 2, self.n, self.d, self.w)
        return known is not None and known >= self.q


INNER_12_4_6 = InnerCodeSpec(12, 4, 11 ** 2, 'concat-12-4-6')
INNER_28_14_14 = InnerCodeSpec(28, 14, 7 ** 2, 'concat-28-14-14')
INNER_28_4_14 = InnerCodeSpec(28, 4, 1237 ** 2, 'concat-28-4-14')
INNER_CODES = (INNER_12_4_6, INNER_28_14_14, INNER_28_4_14)


@dataclass
class RatePoint:
    curve: str
    delta: float
    rate: float
    omega: float = 0.5
    clamped: bool = False


CONCAT_NORMALIZATIONS = ('length', 'distance')


def concat_rate(inner, delta, normalization='length'):
    """
    Rate of concatenating algebraic-geometry outer codes with the inner CWC

    The outer code over GF(q) has rate tvz_rate(q, delta n / d) and every
    outer symbol costs n binary coordinates carrying log2 q bits. Two scalings
    of that line are in use:

    - 'length': (log2 q / n) * (cutoff - delta), e.g. log2(11)/6 * (3/10 - delta)
      for the CWC(12, 4, 6) inner code
    - 'distance': (log2 q / d) * (cutoff - delta), larger by the factor n/d

    Both are zero past the cutoff (d/n)(1 - 1/(sqrt q - 1)).

    Args:
        inner (InnerCodeSpec): inner code
        delta (float): relative distance, >= 0
        normalization (str): 'length' or 'distance'

    Returns:
        float: rate, clamped at 0
    """
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    if normalization not in CONCAT_NORMALIZATIONS:
        raise DomainError(f"normalization must be one of {CONCAT_NORMALIZATIONS}, got {normalization!r}")
    outer_delta = min(1.0, delta * inner.n / inner.d)
    rate = log2(inner.q) / inner.n * tvz_rate(inner.q, outer_delta)
    if normalization == 'length':
        rate *= inner.d / inner.n
    return rate


def pseudo_product_rate(delta):
    """(1 - H(sqrt(delta)))^2 / 2 for 0 <= delta <= 1/4"""
    if not 0 <= delta <= 0.25:
        raise DomainError(f"pseudo-product rate needs 0 <= delta <= 1/4, got {delta}")
    return (1 - entropy(sqrt(delta))) ** 2 / 2


def pseudo_product_rate_split(delta1, delta2):
    """(1 - H(delta1))/2 * (1 - H(delta2)) for a split delta = delta1 * delta2"""
    for value in (delta1, delta2):
        if not 0 <= value <= 0.5:
            raise DomainError(f"split distances must lie in [0, 1/2], got {value}")
    return (1 - entropy(delta1)) / 2 * (1 - entropy(delta2))


def gv_rate(delta):
    """1 - H(delta) for 0 <= delta <= 1/2"""
    if not 0 <= delta <= 0.5:
        raise DomainError(f"GV rate needs 0 <= delta <= 1/2, got {delta}")
    return 1 - entropy(delta)


def transfer_exponent(m, n, w):
    """log2(C(mn, mw) / C(n, w)^m) / (mn): the rate lost by the transfer inequality"""
    if m < 1 or not 0 <= w <= n or n < 1:
        raise DomainError(f"invalid (m={m}, n={n}, w={w})")
    return (log2(comb(m * n, m * w)) - m * log2(comb(n, w))) / (m * n)


def _curve_functions():
    curves = {
        'mrrw': (lambda d: mrrw_upper(d, 0.5), lambda d: 0 <= d <= 0.5),
        'gv': (gv_rate, lambda d: 0 <= d <= 0.5),
        'pseudo-product': (pseudo_product_rate, lambda d: 0 <= d <= 0.25),
    }
    for inner in INNER_CODES:
        curves[inner.label] = (lambda d, inner=inner: concat_rate(inner, d), lambda d: 0 <= d <= 0.5)
        curves[f"{inner.label}-by-d"] = (lambda d, inner=inner: concat_rate(inner, d, 'distance'),
                                         lambda d: 0 <= d <= 0.5)
    return curves


CURVE_NAMES = tuple(_curve_functions())
LOWER_CURVES = tuple(name for name in CURVE_NAMES if name != 'mrrw')


def delta_grid(start, end, step):
    """Inclusive grid start, start + step, ... <= end (empty when start > end)"""
    if step <= 0:
        raise DomainError(f"grid step must be positive, got {step}")
    if start > end:
        return np.array([])
    count = int(np.floor((end - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


def emit_curves(deltas, curves=None):
    """
    Evaluate the named curves on a grid

    Args:
        deltas (array-like): relative distances
        curves (list): subset of CURVE_NAMES (all by default)

    Returns:
        pd.DataFrame: columns curve, delta, rate, clamped; sorted by (curve, delta);
        points outside a curve's domain are left out
    """
    functions = _curve_functions()
    curves = list(CURVE_NAMES) if not curves else list(curves)
    unknown = [c for c in curves if c not in functions]
    if unknown:
        raise DomainError(f"unknown curves {unknown}; known: {', '.join(CURVE_NAMES)}")
    points = []
    for name in curves:
        rate_of, in_domain = functions[name]
        for delta in deltas:
            delta = float(delta)
            if not in_domain(delta):
                continue
            rate = float(rate_of(delta))
            clamped = name.startswith('concat-') and rate == 0.0
            points.append(RatePoint(name, delta, rate, clamped=clamped))
    frame = pd.DataFrame([p.__dict__ for p in points],
                         columns=['curve', 'delta', 'rate', 'omega', 'clamped'])
    frame = frame.sort_values(['curve', 'delta'], kind='mergesort').reset_index(drop=True)
    clamped = int(frame['clamped'].sum()) if len(frame) else 0
    if clamped:
        logger.debug(f"{clamped} concatenation points past their cutoff, clamped to 0")
    return frame[['curve', 'delta', 'rate', 'clamped']]


def curves_write(frame, path, manifest=None):
    """CSV ``curve,delta,rate`` with 6 significant digits"""
    with open(path, 'w') as fh:
        if manifest is not None:
            fh.write(manifest.comment_block())
        frame[CURVE_COLUMNS].to_csv(fh, index=False, float_format='%.6g')
    return path


def ordering_violations(frame):
    """
    (curve, delta) points where a lower curve exceeds the upper curve, or a
    lower curve exceeds the GV curve on the shared domain
    """
    violations = []
    upper = frame[frame['curve'] == 'mrrw'].set_index('delta')['rate']
    gv = frame[frame['curve'] == 'gv'].set_index('delta')['rate']
    for row in frame[frame['curve'] != 'mrrw'].itertuples(index=False):
        if row.delta in upper.index and row.rate > upper[row.delta] + _TOLERANCE:
            violations.append((row.curve, row.delta, 'above upper bound'))
        if row.curve != 'gv' and row.delta in gv.index and row.rate > gv[row.delta] + _TOLERANCE:
            violations.append((row.curve, row.delta, 'above GV'))
    return violations
