"""Finite fields F_{p^k}, Frobenius automorphisms and cyclic Galois groups.

Elements are encoded as integer codes ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``
where ``(c_0, ..., c_{k-1})`` are the coefficients of the polynomial
representative modulo the field's defining polynomial.  The integer order of
codes is the canonical element order (lexicographic on the coefficient vector,
highest degree first); it is used whenever an element has to be *chosen*.

The hot loops in :mod:`flagdescent.linalg` work on raw codes through the
``add``/``mul``/``inv`` methods; :class:`FieldElement` is the ergonomic wrapper
for scalar work.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd

from sympy import divisors, isprime

from .budget import check_budget

MAX_FIELD_SIZE = 1 << 16
_TABLE_LIMIT = 256


class FieldError(ValueError):
    """Raised for malformed fields, mismatched elements or missing roots."""


# -- polynomials over F_p, coefficient lists in ascending degree ------------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = _poly_trim(a)
    m = _poly_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        factor = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p
        a = _poly_trim(a)
    return a


def _poly_mulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_mod(out, m, p)


def is_irreducible(poly, p):
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _poly_trim(poly)
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p, k):
    """Lexicographically least monic irreducible polynomial of degree ``k``."""
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


# -- fields -----------------------------------------------------------------

class FiniteField:
    """The field F_q, q = p^k, modulo a fixed monic irreducible polynomial.

    Use :func:`GF` rather than the constructor so that equal fields are the
    same object (subspaces and flags compare fields by identity).
    """

    def __init__(self, p, k, modulus=None):
        if not isprime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be positive")
        self.p = p
        self.k = k
        self.q = p ** k
        if modulus is None:
            modulus = least_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus {modulus} is not monic of degree {k}")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self._build_tables()

    def _build_tables(self):
        q, p = self.q, self.p
        self._exp = None
        for g in range(1, q):
            powers = [1]
            x = [1]
            gpoly = self._poly(g)
            while True:
                x = _poly_mulmod(x, gpoly, self.modulus, p)
                c = self._code(x)
                if c == 1:
                    break
                powers.append(c)
            if len(powers) == q - 1:
                self._exp = powers + powers
                self.generator = g
                break
        self._log = [0] * q
        for i in range(q - 1):
            self._log[self._exp[i]] = i
        if q <= _TABLE_LIMIT:
            self._add_t = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
            self._mul_t = [[self._mul_log(a, b) for b in range(q)] for a in range(q)]
        else:
            self._add_t = self._mul_t = None
        self._neg = [self._neg_digits(a) for a in range(q)]
        self._inv = [0] + [self._exp[(q - 1 - self._log[a]) % (q - 1)] for a in range(1, q)]

    # code <-> coefficient list
    def _poly(self, code):
        return _poly_trim(self.coeffs(code))

    def _code(self, poly):
        return sum(c * self.p ** i for i, c in enumerate(poly))

    def coeffs(self, code):
        p = self.p
        return tuple((code // p ** i) % p for i in range(self.k))

    def from_coeffs(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            raise FieldError(f"too many coefficients for {self}")
        return self._code([int(c) % self.p for c in coeffs])

    def _add_digits(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        out, place = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def _neg_digits(self, a):
        p = self.p
        out, place = 0, 1
        while a:
            out += ((-(a % p)) % p) * place
            a //= p
            place *= p
        return out

    def _mul_log(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    # arithmetic on codes
    def add(self, a, b):
        if self._add_t is not None:
            return self._add_t[a][b]
        return self._add_digits(a, b)

    def neg(self, a):
        return self._neg[a]

    def sub(self, a, b):
        return self.add(a, self._neg[b])

    def mul(self, a, b):
        if self._mul_t is not None:
            return self._mul_t[a][b]
        return self._mul_log(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def log(self, a):
        """Discrete logarithm to the base :attr:`generator`."""
        if a == 0:
            raise FieldError("log of 0")
        return self._log[a]

    def order(self, a):
        """Multiplicative order of a nonzero element."""
        return (self.q - 1) // gcd(self._log[a], self.q - 1) if a else 0

    def from_int(self, n):
        return int(n) % self.p

    def elements(self):
        return range(self.q)

    def nonzero(self):
        return range(1, self.q)

    # wrapped elements
    def __call__(self, n):
        """Image of the integer ``n`` in the prime field, wrapped."""
        return FieldElement(self, self.from_int(n))

    def element(self, code):
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for {self}")
        return FieldElement(self, code)

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    def descriptor(self):
        return format_field(self)

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __reduce__(self):
        return (GF, (self.p, self.k, self.modulus))


@lru_cache(maxsize=None)
def _gf(p, k, modulus):
    return FiniteField(p, k, modulus)


def GF(p, k=1, modulus=None):
    """Canonical (cached) field of order p^k."""
    if modulus is None:
        if not isprime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be positive")
        modulus = least_irreducible(p, k)
    return _gf(p, k, tuple(modulus))


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: FiniteField
    code: int

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError(f"field mismatch: {self.field} vs {other.field}")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(o, self.code))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(self.code, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(o, self.code))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __lt__(self, other):
        return self.code < other.code

    def __bool__(self):
        return self.code != 0

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.code))

    def order(self):
        return self.field.order(self.code)

    @property
    def coeffs(self):
        return self.field.coeffs(self.code)

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.code}"
        return "<" + ",".join(map(str, self.coeffs)) + ">"


def primitive_root_of_unity(field, m):
    """Least element (canonical order) of multiplicative order exactly ``m``."""
    if m < 1:
        raise FieldError("m must be positive")
    if (field.q - 1) % m:
        raise FieldError(f"{field} lacks primitive {m}-th roots of unity (m does not divide {field.q - 1})")
    for a in field.nonzero():
        if field.order(a) == m:
            return FieldElement(field, a)
    raise AssertionError("unreachable: cyclic group has elements of every divisor order")


def is_primitive_root(x, m):
    """Direct check: x^m = 1 and x^d != 1 for proper divisors d of m."""
    if x ** m != 1:
        return False
    return all(x ** d != 1 for d in divisors(m) if d < m)


# -- automorphisms and Galois groups -----------------------------------------

class GaloisGroup:
    """Gal(F_{q^k} | F_q), cyclic of order k, generated by x -> x^q.

    ``base`` is a field in its own right; ``embed`` maps its codes into codes
    of ``top`` through a fixed root of the base modulus (the least one).
    """

    def __init__(self, base, top):
        if base.p != top.p or top.k % base.k:
            raise FieldError(f"{base} is not a subfield of {top}")
        self.base = base
        self.top = top
        self.order = top.k // base.k
        self.q = base.q
        self._frob_tables = {}
        self.embed = self._embedding()
        self._descend = {c: i for i, c in enumerate(self.embed)}

    def _embedding(self):
        base, top = self.base, self.top
        if base.k == 1:
            return [top.from_int(i) for i in range(base.q)]
        mod = base.modulus
        for alpha in top.elements():
            acc = 0
            for c in reversed(mod):
                acc = top.add(top.mul(acc, alpha), top.from_int(c))
            if acc == 0:
                break
        else:
            raise FieldError("base modulus has no root in top field")
        table = []
        for code in base.elements():
            acc = 0
            for c in reversed(base.coeffs(code)):
                acc = top.add(top.mul(acc, alpha), top.from_int(c))
            table.append(acc)
        return table

    def frob_table(self, e):
        e %= self.order
        tab = self._frob_tables.get(e)
        if tab is None:
            power = self.q ** e
            top = self.top
            tab = [top.pow(x, power) for x in top.elements()]
            self._frob_tables[e] = tab
        return tab

    def automorphism(self, e):
        return FieldAutomorphism(self, e % self.order)

    @property
    def generator(self):
        return self.automorphism(1 % self.order if self.order > 1 else 0)

    @property
    def identity(self):
        return self.automorphism(0)

    def elements(self):
        return [self.automorphism(e) for e in range(self.order)]

    def fixed_field(self):
        """Codes of top fixed by the generator (computed by exhaustion)."""
        tab = self.frob_table(1)
        return [x for x in self.top.elements() if tab[x] == x]

    def lift(self, base_code):
        return self.embed[base_code]

    def descend(self, top_code):
        try:
            return self._descend[top_code]
        except KeyError:
            raise FieldError(f"{top_code} is not in the base field") from None

    def in_base(self, top_code):
        return top_code in self._descend

    def __repr__(self):
        return f"Gal({self.top}|{self.base})"

    def __reduce__(self):
        return (_galois_group, (self.base, self.top))


@lru_cache(maxsize=None)
def _galois_group(base, top):
    return GaloisGroup(base, top)


@dataclass(frozen=True)
class FieldAutomorphism:
    """x -> x^(q^e) on the top field of ``group``."""

    group: GaloisGroup
    e: int

    def __call__(self, x):
        if isinstance(x, FieldElement):
            if x.field is not self.group.top:
                raise FieldError(f"{x!r} does not belong to {self.group.top}")
            return FieldElement(x.field, self.group.frob_table(self.e)[x.code])
        return self.group.frob_table(self.e)[x]

    @property
    def table(self):
        return self.group.frob_table(self.e)

    def compose(self, other):
        """self o other."""
        if other.group is not self.group:
            raise FieldError("automorphisms of different towers")
        return FieldAutomorphism(self.group, (self.e + other.e) % self.group.order)

    def inverse(self):
        return FieldAutomorphism(self.group, (-self.e) % self.group.order)

    @property
    def is_identity(self):
        return self.e == 0

    def __repr__(self):
        return f"Frob^{self.e}"


def apply_automorphism(sigma, x):
    return sigma(x)


def make_tower(p, base_degree, relative_degree, max_size=MAX_FIELD_SIZE):
    """Return ``(base, top, group)`` for F_{p^b} inside F_{p^(b k)}."""
    if not isprime(p):
        raise FieldError(f"{p} is not prime")
    if base_degree < 1 or relative_degree < 1:
        raise FieldError("degrees must be positive")
    check_budget("field size", p ** (base_degree * relative_degree), max_size)
    base = GF(p, base_degree)
    top = GF(p, base_degree * relative_degree)
    return base, top, _galois_group(base, top)


# -- text formats ----------------------------------------------------------

def format_field(field):
    return f"{field.p}^{field.k}/" + ",".join(map(str, field.modulus))


def parse_field(text):
    """Parse ``p^k[/c0,c1,...]`` (or plain ``p``)."""
    text = text.strip()
    head, _, mod = text.partition("/")
    p_s, _, k_s = head.partition("^")
    p, k = int(p_s), int(k_s or 1)
    modulus = tuple(int(c) for c in mod.split(",")) if mod else None
    return GF(p, k, modulus)


def format_element(field, code):
    return ",".join(map(str, field.coeffs(code)))


def parse_element(field, text):
    return field.from_coeffs(int(c) for c in text.split(","))
