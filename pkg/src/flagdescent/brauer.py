"""Cyclic algebras by structure constants, norm and Hilbert-symbol splitting
tests, and the index arithmetic ruling out ruled non-trivial Brauer-Severi
surfaces."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, product
from math import gcd, isqrt

from sympy import factorint, legendre_symbol

from .budget import current_budget
from .fields import FieldElement, FieldError, FiniteField, primitive_root_of_unity
from .linalg import _nullspace_rows, _rref_rows


class AlgebraError(ArithmeticError):
    """Table construction produced a non-associative or non-central algebra."""


# -- scalars --------------------------------------------------------------------

class Rationals:
    """Q with the code-level interface of :class:`FiniteField` (Fraction values)."""

    p = 0
    q = None

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def pow(self, a, e):
        return Fraction(a) ** e

    def from_int(self, n):
        return Fraction(n)

    def __repr__(self):
        return "Q"

    def __reduce__(self):
        return (_rationals, ())


QQ = Rationals()


def _rationals():
    return QQ


def _scalar(K, x):
    if isinstance(x, FieldElement):
        if x.field is not K:
            raise FieldError("scalar from a different field")
        return x.code
    if K is QQ:
        return Fraction(x)
    if not 0 <= int(x) < K.q:
        raise FieldError(f"code {x} not in {K}")
    return int(x)


# -- structure-constant algebras ----------------------------------------------------------

class StructureAlgebra:
    """Finite-dimensional algebra over K given by a sparse multiplication table.

    ``table[i][j]`` is a tuple of ``(k, c)`` pairs: e_i e_j = sum c e_k.
    """

    def __init__(self, K, dim, table, unit, name=None):
        self.K = K
        self.dim = dim
        self.table = tuple(tuple(tuple(sorted(cell)) for cell in row) for row in table)
        self.unit = tuple(unit)
        self.name = name or f"algebra[{dim}]"

    @classmethod
    def base(cls, K):
        return cls(K, 1, (((((0, 1),),),)), (1,), name=str(K))

    def zero_vec(self):
        return (0,) * self.dim

    def mul_vec(self, u, v):
        K = self.K
        out = [0] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.table[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = K.mul(a, b)
                for k, c in row[j]:
                    out[k] = K.add(out[k], K.mul(ab, c))
        return tuple(out)

    def basis_vec(self, i):
        return tuple(1 if j == i else 0 for j in range(self.dim))

    def element(self, coeffs):
        return AlgebraElement(self, tuple(_scalar(self.K, c) for c in coeffs))

    @property
    def one(self):
        return AlgebraElement(self, self.unit)

    def basis_element(self, i):
        return AlgebraElement(self, self.basis_vec(i))

    def associativity_failure(self):
        """First basis triple (i, j, k) with (e_i e_j) e_k != e_i (e_j e_k), else None."""
        n = self.dim
        e = [self.basis_vec(i) for i in range(n)]
        prods = [[self.mul_vec(e[i], e[j]) for j in range(n)] for i in range(n)]
        for i, j, k in product(range(n), repeat=3):
            if self.mul_vec(prods[i][j], e[k]) != self.mul_vec(e[i], prods[j][k]):
                return (i, j, k)
        return None

    def is_associative(self):
        return self.associativity_failure() is None

    def center_basis(self):
        """Basis of {x : x e_i = e_i x for all i}, by an exact linear solve."""
        K, n = self.K, self.dim
        rows = []
        for i in range(n):
            # coefficient of e_k in x e_i - e_i x, linear in x
            block = [[0] * n for _ in range(n)]
            for j in range(n):
                for k, c in self.table[j][i]:
                    block[k][j] = K.add(block[k][j], c)
                for k, c in self.table[i][j]:
                    block[k][j] = K.sub(block[k][j], c)
            rows.extend(tuple(r) for r in block if any(r))
        return _nullspace_rows(K, rows, n)

    def left_matrix(self, u):
        """Rows of L_u in the monomial basis: column j is u e_j."""
        cols = [self.mul_vec(u, self.basis_vec(j)) for j in range(self.dim)]
        return [tuple(c[i] for c in cols) for i in range(self.dim)]

    def is_zero_divisor(self, u):
        return len(_rref_rows(self.K, self.left_matrix(u), self.dim)[0]) < self.dim

    def same_table(self, other):
        return self.K is other.K and self.dim == other.dim and self.table == other.table

    def __repr__(self):
        return f"{self.name} over {self.K}"


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: StructureAlgebra
    coeffs: tuple

    def _other(self, other):
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra:
                raise AlgebraError("elements of different algebras")
            return other.coeffs
        A = self.algebra
        c = _scalar(A.K, other)
        return tuple(A.K.mul(c, u) for u in A.unit)

    def __add__(self, other):
        K = self.algebra.K
        return AlgebraElement(self.algebra, tuple(K.add(a, b) for a, b in zip(self.coeffs, self._other(other))))

    __radd__ = __add__

    def __neg__(self):
        K = self.algebra.K
        return AlgebraElement(self.algebra, tuple(K.neg(a) for a in self.coeffs))

    def __sub__(self, other):
        return self + (-AlgebraElement(self.algebra, self._other(other)))

    def __rsub__(self, other):
        return AlgebraElement(self.algebra, self._other(other)) - self

    def __mul__(self, other):
        return AlgebraElement(self.algebra, self.algebra.mul_vec(self.coeffs, self._other(other)))

    def __rmul__(self, other):
        return AlgebraElement(self.algebra, self.algebra.mul_vec(self._other(other), self.coeffs))

    def __pow__(self, e):
        out = self.algebra.one
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            return self.coeffs == self._other(other)
        except (AlgebraError, FieldError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((id(self.algebra), self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*e{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


# -- cyclic algebras ---------------------------------------------------------------

class CyclicAlgebra(StructureAlgebra):
    """K<x1, x2 | x1^m = a, x2^m = b, x1 x2 = ω x2 x1>, basis x1^i x2^j at i*m + j."""

    def __init__(self, K, m, a, b, omega):
        self.m, self.a, self.b, self.omega = m, a, b, omega
        table = []
        # x2^j x1^k = ω^{-jk} x1^k x2^j
        w_inv = K.inv(omega)
        for i, j in product(range(m), repeat=2):
            row = []
            for k, l in product(range(m), repeat=2):
                c = K.pow(w_inv, j * k)
                s, t = i + k, j + l
                if s >= m:
                    s -= m
                    c = K.mul(c, a)
                if t >= m:
                    t -= m
                    c = K.mul(c, b)
                row.append(((s * m + t, c),))
            table.append(row)
        unit = tuple(1 if i == 0 else 0 for i in range(m * m))
        super().__init__(K, m * m, table, unit, name=f"({a},{b})_{m}")

    def monomial(self, i, j):
        return self.basis_element((i % self.m) * self.m + (j % self.m))

    @property
    def x1(self):
        return self.monomial(1, 0) if self.m > 1 else self.one * self.a

    @property
    def x2(self):
        return self.monomial(0, 1) if self.m > 1 else self.one * self.b


def _root_of_unity(K, m):
    if K is QQ:
        if m == 1:
            return Fraction(1)
        if m == 2:
            return Fraction(-1)
        raise FieldError(f"Q lacks primitive {m}-th roots of unity")
    return primitive_root_of_unity(K, m).code


def make_cyclic(K, m, a, b, omega=None):
    """Build, and verify, the cyclic algebra (a, b)_ω of degree m over K."""
    if m < 1:
        raise ValueError("degree m must be positive")
    a, b = _scalar(K, a), _scalar(K, b)
    if not a or not b:
        raise ValueError("a and b must be nonzero")
    if omega is None:
        omega = _root_of_unity(K, m)
    else:
        omega = _scalar(K, omega)
        if K.pow(omega, m) != 1 or any(K.pow(omega, d) == 1 for d in range(1, m)):
            raise FieldError(f"{omega} is not a primitive {m}-th root of unity")
    A = CyclicAlgebra(K, m, a, b, omega)
    bad = A.associativity_failure()
    if bad is not None:
        raise AlgebraError(f"associativity fails on basis triple {bad}")
    centre = A.center_basis()
    if len(centre) != 1:
        raise AlgebraError(f"center has dimension {len(centre)}, expected 1")
    return A


def opposite(A):
    """Same basis, t'(x, y) = t(y, x)."""
    n = A.dim
    table = [[A.table[j][i] for j in range(n)] for i in range(n)]
    name = A.name[:-3] if A.name.endswith("^op") else f"{A.name}^op"
    return StructureAlgebra(A.K, n, table, A.unit, name=name)


def tensor_table(A, B, max_dim=256):
    """A ⊗_K B with basis a_i ⊗ b_j at i * dim B + j."""
    if A.K is not B.K:
        raise FieldError("tensor factors must share the base field")
    n = A.dim * B.dim
    if n > max_dim:
        raise ValueError(f"tensor dimension {n} exceeds limit {max_dim}")
    K = A.K
    nb = B.dim
    table = []
    for i, j in product(range(A.dim), range(nb)):
        row = []
        for k, l in product(range(A.dim), range(nb)):
            cell = {}
            for s, c in A.table[i][k]:
                for t, d in B.table[j][l]:
                    idx = s * nb + t
                    cell[idx] = K.add(cell.get(idx, 0), K.mul(c, d))
            row.append(tuple((idx, c) for idx, c in cell.items() if c))
        table.append(row)
    unit = tuple(K.mul(x, y) for x in A.unit for y in B.unit)
    return StructureAlgebra(K, n, table, unit, name=f"{A.name}⊗{B.name}")


# -- zero divisors ------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroDivisorResult:
    """``status`` is one of found, none, budget-exceeded, not-exhaustible."""

    status: str
    pair: tuple = None
    tried: int = 0
    note: str = ""

    @property
    def found(self):
        return self.status == "found"


def _sparse_candidates(q, n):
    """Nonzero vectors up to scalars, by support size then lexicographically."""
    for w in range(1, n + 1):
        for support in combinations(range(n), w):
            for rest in product(range(1, q), repeat=w - 1):
                v = [0] * n
                v[support[0]] = 1
                for idx, c in zip(support[1:], rest):
                    v[idx] = c
                yield tuple(v)


def zero_divisor_search(A, budget=None):
    """Search for nonzero u, v with u v = 0 (u normalized, sparse first)."""
    K = A.K
    if not isinstance(K, FiniteField):
        return ZeroDivisorResult("not-exhaustible", note=f"{K} is infinite; no finite search decides")
    budget = current_budget() if budget is None else budget
    tried = 0
    for u in _sparse_candidates(K.q, A.dim):
        if tried >= budget:
            return ZeroDivisorResult("budget-exceeded", tried=tried)
        tried += 1
        L = A.left_matrix(u)
        kernel = _nullspace_rows(K, L, A.dim)
        if kernel:
            v = kernel[0]
            assert not any(A.mul_vec(u, v))
            return ZeroDivisorResult("found", (A.element(u), A.element(v)), tried)
    return ZeroDivisorResult("none", tried=tried, note="exhausted: division algebra")


# -- norms over finite fields ----------------------------------------------------------

@dataclass(frozen=True)
class NormResult:
    is_norm: bool
    witness: object
    always_norm: bool


def norm(group, x):
    """N(x) = prod over the Galois group of σ(x), as a top-field code."""
    top = group.top
    out = 1
    for e in range(group.order):
        out = top.mul(out, group.frob_table(e)[x])
    return out


def is_norm_finite(group, b):
    """Is the base-field element b a norm from top?  Witness is a top-field code.

    ``always_norm`` records an exhaustive surjectivity check of N onto the
    nonzero base elements for this tower.
    """
    base, top = group.base, group.top
    b = _scalar(base, b)
    if not b:
        raise ValueError("b must be nonzero")
    target = group.lift(b)
    witness = None
    image = set()
    for x in top.nonzero():
        nx = norm(group, x)
        image.add(nx)
        if witness is None and nx == target:
            witness = x
    always = image == {group.lift(c) for c in base.nonzero()}
    return NormResult(witness is not None, witness, always)


def radical_extension_degree(field, a, m):
    """[F_q(a^{1/m}) : F_q]: least d such that x^m = a is solvable in F_{q^d}."""
    a = _scalar(field, a)
    if not a:
        raise ValueError("a must be nonzero")
    q = field.q
    o = field.order(a)
    d = 1
    while True:
        n = q ** d - 1
        # a has an m-th root in the cyclic group of order n iff ord(a) | n / gcd(m, n)
        if (n // gcd(m, n)) % o == 0:
            return d
        d += 1


# -- quaternion algebras over Q ------------------------------------------------------

def _squarefree(n):
    if n == 0:
        raise ValueError("zero has no squarefree part")
    out = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out


def _split_p(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def hilbert_symbol(a, b, p):
    """(a, b)_p for nonzero integers; ``p = 0`` means the real place."""
    if not a or not b:
        raise ValueError("Hilbert symbol of zero")
    if p == 0:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split_p(a, p)
    beta, v = _split_p(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omg = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omg(v) + beta * omg(u)
        return -1 if e % 2 else 1
    e = (alpha * beta * ((p - 1) // 2)) % 2
    s = -1 if e else 1
    if beta % 2:
        s *= legendre_symbol(u % p, p)
    if alpha % 2:
        s *= legendre_symbol(v % p, p)
    return s


@dataclass(frozen=True)
class QuaternionVerdict:
    a: int
    b: int
    splits: bool
    local: dict
    product: int

    def ramified(self):
        return sorted((p for p, s in self.local.items() if s == -1), key=lambda p: (p != "inf", p))


def quaternion_splits_Q(a, b):
    """(a, b)_Q splits iff every local Hilbert symbol is +1.

    ``local`` maps the places inf, 2 and each odd prime dividing ab to the
    symbol; their product must be +1.
    """
    a, b = int(a), int(b)
    if not a or not b:
        raise ValueError("a and b must be nonzero")
    a, b = _squarefree(a), _squarefree(b)
    primes = {2} | set(factorint(abs(a * b)))
    local = {"inf": hilbert_symbol(a, b, 0)}
    for p in sorted(primes):
        local[p] = hilbert_symbol(a, b, p)
    prod = 1
    for s in local.values():
        prod *= s
    if prod != 1:
        raise ArithmeticError(f"product formula fails for ({a}, {b})")
    return QuaternionVerdict(a, b, all(s == 1 for s in local.values()), local, prod)


def norm_search_Q(a, b, bound):
    """Find rationals x, y with x^2 - a y^2 = b, numerators and denominators <= bound."""
    for z in range(1, bound + 1):
        bz = b * z * z
        for y in range(-bound, bound + 1):
            x2 = bz + a * y * y
            if x2 < 0:
                continue
            x = isqrt(x2)
            if x * x == x2 and x <= bound:
                return Fraction(x, z), Fraction(y, z)
    return None


# -- index arithmetic -------------------------------------------------------------------

@dataclass(frozen=True)
class IndexFact:
    """ind(subject) = value, with the claim that value divides each of ``divides``."""

    subject: str
    value: int
    divides: tuple = ()
    provenance: tuple = ()

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("an index is a positive integer")

    @property
    def consistent(self):
        return all(n % self.value == 0 for n in self.divides)

    def to_json(self):
        return {"subject": self.subject, "value": self.value, "divides": list(self.divides),
                "provenance": list(self.provenance), "consistent": self.consistent}


@dataclass(frozen=True)
class ChainVerdict:
    surface_trivial: bool
    curve_exists: bool
    curve_trivial: bool
    branch: str
    ruled: bool
    contradiction: str = None
    facts: tuple = ()
    steps: tuple = dc_field(default=())

    def to_json(self):
        return {
            "inputs": {"surface_trivial": self.surface_trivial, "curve_exists": self.curve_exists,
                       "curve_trivial": self.curve_trivial},
            "branch": self.branch,
            "ruled": self.ruled,
            "contradiction": self.contradiction,
            "facts": [f.to_json() for f in self.facts],
            "steps": [{"rule": r, "statement": s} for r, s in self.steps],
        }


SURFACE_DIM = 2
CURVE_DIM = 1


def index_chain_bs_surface(surface_trivial, curve_exists, curve_trivial):
    """Replay the index argument for a Brauer-Severi surface X.

    ``curve_exists`` says X is ruled, i.e. X is birational to P^1 x Q with a
    rational map X --> Q; ``curve_trivial`` says Q is the projective line
    (ignored when there is no curve).
    """
    if surface_trivial:
        steps = (("trivial-is-rational", "X ≅ P^2 is rational, hence ruled"),)
        return ChainVerdict(True, curve_exists, curve_trivial, "trivial", True, None, (), steps)
    if not curve_exists:
        steps = (("no-ruling", "no birational map to P^1 x Q is given; nothing to refute"),)
        return ChainVerdict(False, False, curve_trivial, "not-ruled", False, None, (), steps)
    if curve_trivial:
        steps = (
            ("ruled-gives-curve-map", "X is birational to P^1 x Q with Q ≅ P^1"),
            ("rational-point", "P^1 x P^1 has K-points, so X has a K-rational point"),
            ("chatelet", "a Brauer-Severi variety with a rational point is trivial"),
        )
        return ChainVerdict(False, True, True, "chatelet", True,
                            "X is trivial, contradicting non-triviality", (), steps)
    # non-trivial X, rational map to a non-trivial conic Q
    ind_X = SURFACE_DIM + 1          # minimal, so X^min = X
    ind_Q = CURVE_DIM + 1
    ind_Xm = ind_Q                   # Q^min ≅ (X^{⊗m})^min
    facts = (
        IndexFact("X", ind_X, (), ("minimality: non-trivial iff minimal", "ind = dim X^min + 1")),
        IndexFact("Q", ind_Q, (), ("minimality: non-trivial iff minimal", "ind = dim Q^min + 1")),
        IndexFact("X^⊗m", ind_Xm, (ind_X,),
                  ("amitsur: Q similar to X^⊗m", "index of X^⊗m divides index of X")),
    )
    bad = facts[2]
    assert not bad.consistent
    steps = (
        ("ruled-gives-curve-map", "X is birational to P^1 x Q with Q a non-trivial conic"),
        ("minimality", f"X non-trivial, so X is minimal and ind(X) = dim X + 1 = {ind_X}"),
        ("minimality", f"Q non-trivial, so Q is minimal and ind(Q) = dim Q + 1 = {ind_Q}"),
        ("amitsur", "a rational map X --> Q makes Q similar to X^⊗m"),
        ("index-of-minimal-model", f"ind(X^⊗m) = ind((X^⊗m)^min) = ind(Q^min) = {ind_Xm}"),
        ("index-divides", f"ind(X^⊗m) | ind(X) requires {ind_Xm} | {ind_X}: false"),
    )
    return ChainVerdict(False, True, False, "index", True, f"{ind_Xm} does not divide {ind_X}", facts, steps)
