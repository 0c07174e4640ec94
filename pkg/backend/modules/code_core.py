"""
Codewords, codes and their verification

Binary words are packed into Python integers: the first coordinate is the
most significant of ``length`` bits, so integer order equals lexicographic
order of the bit strings. q-ary words are tuples of symbols. Codes keep their
words sorted and de-duplicated, which makes equality canonical.
"""
from dataclasses import dataclass, field
from itertools import combinations
import math
import logging

import numpy as np

from modules.errors import CodeFormatError

logger = logging.getLogger(__name__)

INFINITY = math.inf

# rows per block when forming pairwise distance matrices
_CHUNK = 1024


def weight(word):
    return bin(word).count('1')


def bits_of(word, length):
    """Tuple of the ``length`` bits of a packed word, first coordinate first"""
    return tuple((word >> (length - 1 - i)) & 1 for i in range(length))


def word_of(bits):
    """Pack a bit sequence (ints or a '0101' string) into an integer word"""
    value = 0
    for b in bits:
        b = int(b)
        if b not in (0, 1):
            raise CodeFormatError(f"non-binary digit {b!r}")
        value = (value << 1) | b
    return value


def complement(word, length):
    return word ^ ((1 << length) - 1)


def concat_words(parts):
    """Concatenate (word, length) pairs into one packed word"""
    value = 0
    for word, length in parts:
        value = (value << length) | word
    return value


def split_word(word, lengths):
    """Split a packed word into consecutive blocks of the given lengths"""
    total = sum(lengths)
    blocks = []
    offset = total
    for length in lengths:
        offset -= length
        blocks.append((word >> offset) & ((1 << length) - 1))
    return blocks


def hamming_distance(u, v):
    """
    Number of positions in which two words differ

    Args:
        u, v: equal-length sequences (strings, tuples, lists) or packed ints

    Returns:
        int: Hamming distance
    """
    if isinstance(u, int) and isinstance(v, int):
        return weight(u ^ v)
    if len(u) != len(v):
        raise CodeFormatError(f"length mismatch: {len(u)} != {len(v)}")
    return sum(1 for a, b in zip(u, v) if a != b)


@dataclass(frozen=True)
class WeightProfile:
    """Block lengths and weights (n_1, w_1; ...; n_m, w_m)"""
    parts: tuple

    def __post_init__(self):
        parts = tuple((int(n), int(w)) for n, w in self.parts)
        if not parts:
            raise CodeFormatError("a weight profile needs at least one block")
        for n, w in parts:
            if n < 1 or not 0 <= w <= n:
                raise CodeFormatError(f"invalid block (n={n}, w={w})")
        object.__setattr__(self, 'parts', parts)

    @classmethod
    def homogeneous(cls, m, n, w):
        return cls(tuple((n, w) for _ in range(m)))

    @classmethod
    def parse(cls, text):
        """Parse 'n1:w1,n2:w2,...'; returns None for 'none'"""
        text = text.strip()
        if text.lower() == 'none':
            return None
        try:
            parts = [tuple(int(x) for x in item.split(':')) for item in text.split(',')]
            return cls(tuple((n, w) for n, w in parts))
        except ValueError as e:
            raise CodeFormatError(f"malformed profile {text!r}") from e

    def __str__(self):
        return ','.join(f"{n}:{w}" for n, w in self.parts)

    @property
    def m(self):
        return len(self.parts)

    @property
    def length(self):
        return sum(n for n, _ in self.parts)

    @property
    def lengths(self):
        return [n for n, _ in self.parts]

    @property
    def weights(self):
        return [w for _, w in self.parts]

    def is_homogeneous(self):
        return len(set(self.parts)) == 1

    def block_weights(self, word):
        return [weight(b) for b in split_word(word, self.lengths)]

    def satisfied_by(self, word):
        return self.block_weights(word) == self.weights


@dataclass(frozen=True)
class MatrixCodeword:
    """A packed word read as m blocks (rows of an m-by-n array when homogeneous)"""
    bits: int
    profile: WeightProfile

    @classmethod
    def from_rows(cls, rows, profile=None):
        rows = [r if isinstance(r, str) else ''.join(str(int(b)) for b in r) for r in rows]
        if profile is None:
            profile = WeightProfile(tuple((len(r), r.count('1')) for r in rows))
        return cls(word_of(''.join(rows)), profile)

    @property
    def rows(self):
        return [bits_of(b, n) for b, n in zip(split_word(self.bits, self.profile.lengths),
                                             self.profile.lengths)]

    def as_array(self):
        """m-by-n numpy array (homogeneous profiles only)"""
        if not self.profile.is_homogeneous():
            raise CodeFormatError("only homogeneous codewords form a rectangular array")
        return np.array(self.rows, dtype=np.uint8)

    def is_valid(self):
        return self.profile.satisfied_by(self.bits)


def _canonical(words):
    ordered = sorted(words)
    for a, b in zip(ordered, ordered[1:]):
        if a == b:
            raise CodeFormatError(f"duplicate word {a!r}")
    return tuple(ordered)


@dataclass(frozen=True)
class BinaryCode:
    """Set of packed binary words with a claimed distance and optional profile"""
    words: tuple
    length: int
    claimed_distance: int = 1
    profile: WeightProfile = None

    def __post_init__(self):
        words = _canonical(int(w) for w in self.words)
        if self.length < 0:
            raise CodeFormatError(f"negative length {self.length}")
        for w in words:
            if w < 0 or w >> self.length:
                raise CodeFormatError(f"word {w:b} does not fit length {self.length}")
        if self.profile is not None and self.profile.length != self.length:
            raise CodeFormatError(f"profile length {self.profile.length} != code length {self.length}")
        object.__setattr__(self, 'words', words)

    @classmethod
    def from_strings(cls, strings, claimed_distance=1, profile=None):
        strings = [s.replace(' ', '') for s in strings]
        lengths = {len(s) for s in strings}
        if len(lengths) > 1:
            raise CodeFormatError(f"mixed word lengths {sorted(lengths)}")
        length = lengths.pop() if lengths else (profile.length if profile else 0)
        return cls(tuple(word_of(s) for s in strings), length, claimed_distance, profile)

    @property
    def q(self):
        return 2

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def strings(self):
        return [''.join(map(str, bits_of(w, self.length))) for w in self.words]

    def as_array(self):
        """|C|-by-length 0/1 numpy array"""
        if not self.words:
            return np.zeros((0, self.length), dtype=np.uint8)
        return np.array([bits_of(w, self.length) for w in self.words], dtype=np.uint8)

    def with_claim(self, claimed_distance=None, profile=None):
        return BinaryCode(self.words, self.length,
                          self.claimed_distance if claimed_distance is None else claimed_distance,
                          self.profile if profile is None else profile)


@dataclass(frozen=True)
class QaryCode:
    """Set of symbol tuples over [0, q) with a claimed distance"""
    q: int
    words: tuple
    length: int
    claimed_distance: int = 1

    def __post_init__(self):
        words = _canonical(tuple(int(s) for s in w) for w in self.words)
        if self.q < 2:
            raise CodeFormatError(f"alphabet size must be >= 2, got {self.q}")
        for w in words:
            if len(w) != self.length:
                raise CodeFormatError(f"word {w} does not have length {self.length}")
            if any(not 0 <= s < self.q for s in w):
                raise CodeFormatError(f"word {w} has symbols outside [0, {self.q})")
        object.__setattr__(self, 'words', words)

    @property
    def profile(self):
        return None

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def as_array(self):
        if not self.words:
            return np.zeros((0, self.length), dtype=np.int64)
        return np.array(self.words, dtype=np.int64)

    def with_claim(self, claimed_distance):
        return QaryCode(self.q, self.words, self.length, claimed_distance)


@dataclass
class VerificationReport:
    """Outcome of an exhaustive distance and profile check"""
    size: int
    length: int
    claimed_distance: int
    min_distance: float
    closest_pair: tuple = None
    profile_failures: list = field(default_factory=list)
    profile: str = 'none'

    @property
    def distance_ok(self):
        return self.min_distance >= self.claimed_distance

    @property
    def passed(self):
        return self.distance_ok and not self.profile_failures

    def to_dict(self):
        return {
            'passed': self.passed,
            'size': self.size,
            'length': self.length,
            'claimed_distance': self.claimed_distance,
            'min_distance': 'inf' if self.min_distance == INFINITY else int(self.min_distance),
            'closest_pair': list(self.closest_pair) if self.closest_pair else None,
            'profile': self.profile,
            'profile_failures': self.profile_failures,
        }


def min_distance(code):
    """
    Exact minimum pairwise distance, exhaustive over all pairs

    Returns:
        tuple: (distance, (i, j)) with i < j word indices; (INFINITY, None)
        for codes with fewer than two words
    """
    size = len(code)
    if size < 2:
        return INFINITY, None
    matrix = code.as_array()
    binary = isinstance(code, BinaryCode)
    if binary:
        a = matrix.astype(np.int32)
        weights = a.sum(axis=1)
    best, pair = INFINITY, None
    for start in range(0, size, _CHUNK):
        stop = min(size, start + _CHUNK)
        if binary:
            block = weights[start:stop, None] + weights[None, :] - 2 * (a[start:stop] @ a.T)
        else:
            block = (matrix[start:stop, None, :] != matrix[None, :, :]).sum(axis=2)
        rows = np.arange(start, stop)
        # only pairs (i, j) with j > i
        block = np.where(np.arange(size)[None, :] > rows[:, None], block, np.iinfo(np.int64).max)
        flat = int(np.argmin(block))
        i, j = divmod(flat, size)
        value = int(block[i, j])
        if value < best:
            best, pair = value, (start + i, j)
    return best, pair


def verify_code(code):
    """
    Check a code's claimed distance and, if attached, its weight profile

    Args:
        code (BinaryCode | QaryCode): nonempty code

    Returns:
        VerificationReport: never raises for failed claims
    """
    distance, pair = min_distance(code)
    failures = []
    profile = getattr(code, 'profile', None)
    if profile is not None:
        for index, word in enumerate(code.words):
            found = profile.block_weights(word)
            if found != profile.weights:
                failures.append({'word_index': index,
                                 'word': ''.join(map(str, bits_of(word, code.length))),
                                 'block_weights': found,
                                 'expected': profile.weights})
    report = VerificationReport(size=len(code), length=code.length,
                                claimed_distance=code.claimed_distance,
                                min_distance=distance, closest_pair=pair,
                                profile_failures=failures,
                                profile=str(profile) if profile else 'none')
    if not report.passed:
        logger.info(f"verification failed: min distance {distance}, "
                    f"{len(failures)} profile violations")
    return report


def _is_power_of_two(size):
    return size >= 1 and size & (size - 1) == 0


def find_systematic_set(code):
    """
    First k-subset I of coordinates (0-based, lexicographic order) on which
    the code restricts bijectively onto {0,1}^k, where |code| = 2^k

    Returns:
        tuple: the coordinate set, or None when the code is not systematic
    """
    size = len(code)
    if not _is_power_of_two(size):
        raise CodeFormatError(f"code size {size} is not a power of two")
    k = size.bit_length() - 1
    if k == 0:
        return ()
    matrix = code.as_array().astype(np.int64)
    # a coordinate of I takes the value 1 on exactly half of the code
    candidates = [j for j in range(code.length) if matrix[:, j].sum() * 2 == size]
    for subset in combinations(candidates, k):
        keys = matrix[:, list(subset)] @ (1 << np.arange(k - 1, -1, -1, dtype=np.int64))
        if len(np.unique(keys)) == size:
            return tuple(subset)
    return None


def systematic_encoder(code, info_set=None):
    """
    Map from information integers (bits read on the systematic set, first
    coordinate most significant) to codewords

    Returns:
        tuple: (k, dict info -> word)
    """
    if info_set is None:
        info_set = find_systematic_set(code)
    if info_set is None:
        raise CodeFormatError("code is not systematic")
    table = {}
    for word in code.words:
        bits = bits_of(word, code.length)
        table[word_of(bits[j] for j in info_set)] = word
    return len(info_set), table


def _parse_header(line):
    if not line.startswith('# code'):
        raise CodeFormatError(f"missing '# code' header, got {line.strip()!r}")
    fields = {}
    for token in line[len('# code'):].split():
        key, sep, value = token.partition('=')
        if not sep:
            raise CodeFormatError(f"malformed header token {token!r}")
        fields[key] = value
    try:
        q = int(fields['q'])
        length = int(fields['len'])
        distance = int(fields['d'])
    except (KeyError, ValueError) as e:
        raise CodeFormatError(f"header needs integer q, len and d: {line.strip()!r}") from e
    profile = WeightProfile.parse(fields.get('profile', 'none'))
    return q, length, distance, profile


def code_loads(text):
    """Parse the text code format; returns BinaryCode or QaryCode"""
    lines = [ln.rstrip('\n') for ln in text.splitlines()]
    if not lines:
        raise CodeFormatError("empty code file")
    q, length, distance, profile = _parse_header(lines[0])
    body = [ln.strip() for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith('#')]
    if q == 2:
        for s in body:
            if len(s) != length:
                raise CodeFormatError(f"word {s!r} has length {len(s)}, header says {length}")
        return BinaryCode(tuple(word_of(s) for s in body), length, distance, profile)
    if profile is not None:
        raise CodeFormatError("weight profiles apply to binary codes only")
    words = []
    for s in body:
        try:
            words.append(tuple(int(x) for x in s.split(',')))
        except ValueError as e:
            raise CodeFormatError(f"malformed q-ary word {s!r}") from e
    return QaryCode(q, tuple(words), length, distance)


def code_dumps(code, comments=()):
    """Serialise a code in the text format, with optional '# key: value' comments"""
    profile = getattr(code, 'profile', None)
    lines = [f"# code q={code.q} len={code.length} d={code.claimed_distance} "
             f"profile={profile if profile else 'none'}"]
    lines += [f"# {c}" for c in comments]
    if isinstance(code, BinaryCode):
        lines += code.strings()
    else:
        lines += [','.join(map(str, w)) for w in code.words]
    return '\n'.join(lines) + '\n'


def code_read(path):
    with open(path, 'r') as fh:
        return code_loads(fh.read())


def code_write(path, code, comments=()):
    with open(path, 'w') as fh:
        fh.write(code_dumps(code, comments))
    logger.info(f"wrote {len(code)} words to {path}")
    return path


def read_comments(path):
    """The '# key: value' comment lines after the header, as a dict"""
    comments = {}
    with open(path, 'r') as fh:
        for line in fh.read().splitlines()[1:]:
            if line.startswith('# ') and ':' in line:
                key, _, value = line[2:].partition(':')
                comments[key.strip()] = value.strip()
    return comments
