"""
Builtin ingredient codes, addressed as ``builtin:<name>``

Fixed names:
    cwc-2-2-1   {01, 10}
    cwc-4-2-2   {0011, 0110, 1001, 1100}, systematic CWC(4,2,2)
    sys-4-2-2   {0011, 0101, 1010, 1111}, systematic distance-2 code (not constant weight)
    lin-4-3-2   even-weight [4,3,2] code (equivalent to RM(1,2))
    lin-6-2-4   {000000, 111100, 001111, 110011}
    lin-8-4-4   extended Hamming code (RM(1,3))

Parametrised names:
    rep-<n>, even-<n>, full-<n>, rm-1-<r>   binary linear families
    clique-<n>-<d>-<w>                      largest CWC(n,d,w) found by exact search
"""
from itertools import product
import re
import logging

from modules.code_core import BinaryCode, WeightProfile, word_of, weight
from modules.errors import CodeFormatError

logger = logging.getLogger(__name__)


def linear_span(generator_rows, length):
    """All GF(2) combinations of the given packed generator rows"""
    words = set()
    for coeffs in product((0, 1), repeat=len(generator_rows)):
        word = 0
        for c, row in zip(coeffs, generator_rows):
            if c:
                word ^= row
        words.add(word)
    if len(words) != 2 ** len(generator_rows):
        raise CodeFormatError("generator rows are linearly dependent")
    return tuple(sorted(words))


def linear_code(generator, distance):
    """Binary linear code from generator rows given as bit strings"""
    length = len(generator[0])
    rows = [word_of(r) for r in generator]
    return BinaryCode(linear_span(rows, length), length, distance)


def repetition_code(n):
    return linear_code(['1' * n], n)


def even_weight_code(n):
    if n < 2:
        raise CodeFormatError("even-weight codes need length >= 2")
    rows = ['1' + '0' * i + '1' + '0' * (n - 2 - i) for i in range(n - 1)]
    return linear_code(rows, 2)


def full_space(n):
    rows = ['0' * i + '1' + '0' * (n - 1 - i) for i in range(n)]
    return linear_code(rows, 1)


def reed_muller_first_order(r):
    """RM(1, r): length 2^r, dimension r + 1, distance 2^(r-1)"""
    length = 2 ** r
    rows = ['1' * length]
    for i in range(r - 1, -1, -1):
        rows.append(''.join(str((j >> i) & 1) for j in range(length)))
    return linear_code(rows, max(1, 2 ** (r - 1)))


def constant_weight(code):
    """Attach the single-block profile of a constant-weight code"""
    weights = {weight(w) for w in code.words}
    if len(weights) != 1:
        raise CodeFormatError(f"code is not constant-weight (weights {sorted(weights)})")
    return code.with_claim(profile=WeightProfile(((code.length, weights.pop()),)))


_FIXED = {
    'cwc-2-2-1': lambda: constant_weight(BinaryCode.from_strings(['01', '10'], 2)),
    'cwc-4-2-2': lambda: constant_weight(BinaryCode.from_strings(['0011', '0110', '1001', '1100'], 2)),
    'sys-4-2-2': lambda: BinaryCode.from_strings(['0011', '0101', '1010', '1111'], 2),
    'lin-4-3-2': lambda: even_weight_code(4),
    'lin-6-2-4': lambda: linear_code(['111100', '001111'], 4),
    'lin-8-4-4': lambda: reed_muller_first_order(3),
}

_FAMILIES = [
    (re.compile(r'rep-(\d+)$'), lambda n: repetition_code(int(n))),
    (re.compile(r'even-(\d+)$'), lambda n: even_weight_code(int(n))),
    (re.compile(r'full-(\d+)$'), lambda n: full_space(int(n))),
    (re.compile(r'rm-1-(\d+)$'), lambda r: reed_muller_first_order(int(r))),
    (re.compile(r'clique-(\d+)-(\d+)-(\d+)$'), lambda n, d, w: _searched_cwc(int(n), int(d), int(w))),
]


def _searched_cwc(n, d, w):
    from modules.bounds import exact_search_code
    return exact_search_code(1, n, d, w)


def builtin_names():
    return sorted(_FIXED) + ['rep-<n>', 'even-<n>', 'full-<n>', 'rm-1-<r>', 'clique-<n>-<d>-<w>']


def builtin(name):
    """
    Resolve a builtin code name (with or without the 'builtin:' prefix)

    Returns:
        BinaryCode: with claimed distance, and a profile for constant-weight codes
    """
    if name.startswith('builtin:'):
        name = name[len('builtin:'):]
    if name in _FIXED:
        return _FIXED[name]()
    for pattern, factory in _FAMILIES:
        match = pattern.match(name)
        if match:
            return factory(*match.groups())
    raise CodeFormatError(f"unknown builtin code {name!r}; known: {', '.join(builtin_names())}")
