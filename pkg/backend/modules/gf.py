"""
Finite-field arithmetic over GF(p^k)

Fields are built from the smallest monic irreducible polynomial of degree k
over GF(p) (polynomials ordered by their base-p integer value, highest degree
coefficient most significant). Elements are coefficient vectors, little-endian
in the root of the modulus; the canonical element order is the integer whose
base-p digits are those coefficients.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
import logging

from modules.config import settings
from modules.errors import FieldError

logger = logging.getLogger(__name__)


def is_prime(n):
    """Deterministic trial-division primality test (desk-scale integers)"""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q):
    """
    Decompose q as p^k

    Returns:
        tuple: (p, k) when q is a prime power, otherwise None
    """
    if q < 2:
        return None
    p = next(f for f in range(2, q + 1) if q % f == 0)
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 and is_prime(p) else None


def _trim(poly):
    poly = list(poly)
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def poly_mod(a, b, p):
    """Remainder of a modulo b over GF(p); both little-endian coefficient lists"""
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise FieldError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        factor = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        a = _trim(a)
    return a


def _monic_polys(degree, p):
    # every monic polynomial of the given degree, in increasing integer order
    for tail in product(range(p), repeat=degree):
        yield list(reversed(tail)) + [1]


def is_irreducible(poly, p):
    """Irreducibility by trial division against all monic polynomials of degree <= deg/2"""
    poly = _trim(poly)
    degree = len(poly) - 1
    if degree < 1:
        return False
    for d in range(1, degree // 2 + 1):
        for divisor in _monic_polys(d, p):
            if not poly_mod(poly, divisor, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) described by its characteristic, degree and modulus"""
    p: int
    k: int
    modulus: tuple

    @property
    def q(self):
        return self.p ** self.k

    def __str__(self):
        return f"GF({self.q})"


@dataclass(frozen=True)
class FieldElement:
    """Element of a field, as a length-k coefficient vector"""
    coeffs: tuple
    field: FieldSpec

    def __post_init__(self):
        if len(self.coeffs) != self.field.k:
            raise FieldError(f"element needs {self.field.k} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < self.field.p for c in self.coeffs):
            raise FieldError(f"coefficients {self.coeffs} not all in [0, {self.field.p})")

    @property
    def index(self):
        return sum(c * self.field.p ** i for i, c in enumerate(self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)


def field_make(p, k, cap=None):
    """
    Build GF(p^k) with the smallest monic irreducible modulus of degree k

    Args:
        p (int): prime characteristic
        k (int): extension degree, at least 1
        cap (int): maximum field order (defaults to the configured field cap)

    Returns:
        FieldSpec: deterministic across runs
    """
    cap = settings.field_cap if cap is None else cap
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if p ** k > cap:
        raise FieldError(f"field order {p}^{k} exceeds the cap {cap}")
    return _field_make(p, k)


@lru_cache(maxsize=None)
def _field_make(p, k):
    for candidate in _monic_polys(k, p):
        if is_irreducible(candidate, p):
            logger.debug(f"GF({p}^{k}) modulus {candidate}")
            return FieldSpec(p=p, k=k, modulus=tuple(candidate))
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")  # unreachable


def field_of_order(q, cap=None):
    """Field of order q for a prime power q"""
    decomposition = prime_power(q)
    if decomposition is None:
        raise FieldError(f"{q} is not a prime power")
    return field_make(*decomposition, cap=cap)


class GaloisField:
    """Index-based arithmetic with log/antilog tables, used by codes and designs"""

    def __init__(self, spec):
        self.spec = spec
        self.p = spec.p
        self.k = spec.k
        self.q = spec.q
        self._digits = [self._to_digits(i) for i in range(self.q)]
        self.generator = self._find_generator()
        self.exp = [0] * (2 * (self.q - 1))
        self.log = [0] * self.q
        x = 1
        for i in range(self.q - 1):
            self.exp[i] = x
            self.log[x] = i
            x = self._slow_mul(x, self.generator)
        for i in range(self.q - 1, 2 * (self.q - 1)):
            self.exp[i] = self.exp[i - (self.q - 1)]

    def _to_digits(self, index):
        digits = []
        for _ in range(self.k):
            index, r = divmod(index, self.p)
            digits.append(r)
        return digits

    def _from_digits(self, digits):
        return sum(c * self.p ** i for i, c in enumerate(digits))

    def _slow_mul(self, a, b):
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        rem = poly_mod(prod, self.spec.modulus, self.p)
        return self._from_digits(rem + [0] * (self.k - len(rem)))

    def _order(self, a):
        x, order = a, 1
        while x != 1:
            x = self._slow_mul(x, a)
            order += 1
        return order

    def _find_generator(self):
        if self.q == 2:
            return 1
        for a in range(2, self.q):
            if self._order(a) == self.q - 1:
                return a
        raise FieldError(f"{self.spec} has no primitive element")  # impossible for a field

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        return self._from_digits([(x + y) % self.p for x, y in zip(self._digits[a], self._digits[b])])

    def neg(self, a):
        return self._from_digits([(-x) % self.p for x in self._digits[a]])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a):
        if a == 0:
            raise FieldError("zero has no multiplicative inverse")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def pow(self, a, e):
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self.exp[(self.log[a] * e) % (self.q - 1)]

    def order(self, a):
        """Multiplicative order of a nonzero element"""
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        return self._order(a)


@lru_cache(maxsize=None)
def galois_field(spec):
    """Shared table-backed arithmetic for a field spec"""
    logger.debug(f"building tables for {spec}")
    return GaloisField(spec)


def field_element(f, index):
    """Element with canonical index ``index`` (0 <= index < q)"""
    if not 0 <= index < f.q:
        raise FieldError(f"index {index} out of range for {f}")
    return FieldElement(tuple(galois_field(f)._digits[index]), f)


def field_elements(f):
    """All q elements in canonical order"""
    return [field_element(f, i) for i in range(f.q)]


def field_zero(f):
    return field_element(f, 0)


def field_one(f):
    return field_element(f, 1)


def _check(f, *elements):
    for a in elements:
        if a.field != f:
            raise FieldError(f"operand from {a.field} used in {f}")


def field_add(a, b, f):
    _check(f, a, b)
    return field_element(f, galois_field(f).add(a.index, b.index))


def field_sub(a, b, f):
    _check(f, a, b)
    return field_element(f, galois_field(f).sub(a.index, b.index))


def field_mul(a, b, f):
    _check(f, a, b)
    return field_element(f, galois_field(f).mul(a.index, b.index))


def field_inv(a, f):
    _check(f, a)
    return field_element(f, galois_field(f).inv(a.index))


def field_pow(a, e, f):
    _check(f, a)
    return field_element(f, galois_field(f).pow(a.index, e))


def multiplicative_order(a, f):
    _check(f, a)
    return galois_field(f).order(a.index)
