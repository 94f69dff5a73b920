"""Flags of subspaces, enumeration over F_q and the Schubert-type loci."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .budget import check_budget
from .linalg import (
    LinAlgError,
    QuotientChart,
    Subspace,
    format_subspace,
    intersect,
    parse_subspace,
)


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class FlagSignature:
    """Dimension vector d_1 < ... < d_r of a flag in an n-dimensional space.

    ``0 < d_1`` is required.  ``d_r = n`` is tolerated because the target
    varieties of the projections (flags inside V1 or V2) may end in the
    whole component; :attr:`is_proper` reports the strict form.
    """

    n: int
    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if self.n < 1:
            raise SignatureError("ambient dimension must be positive")
        if any(b <= a for a, b in zip(dims, dims[1:])):
            raise SignatureError(f"dimensions {dims} are not strictly increasing")
        if dims and (dims[0] <= 0 or dims[-1] > self.n):
            raise SignatureError(f"dimensions {dims} out of range for n={self.n}")

    @property
    def r(self):
        return len(self.dims)

    @property
    def is_proper(self):
        return not self.dims or self.dims[-1] < self.n

    def shifted(self, k):
        """The signature d - k on an (n - k)-dimensional space."""
        return FlagSignature(self.n - k, tuple(d - k for d in self.dims))

    def dual(self):
        return FlagSignature(self.n, tuple(self.n - d for d in reversed(self.dims)))

    def is_self_dual(self):
        return self.dual() == self

    def __str__(self):
        return "<".join(map(str, self.dims)) + f"|{self.n}"


@dataclass(frozen=True)
class Flag:
    signature: FlagSignature
    chain: tuple

    def __post_init__(self):
        chain = tuple(self.chain)
        object.__setattr__(self, "chain", chain)
        if tuple(Z.dim for Z in chain) != self.signature.dims:
            raise SignatureError(
                f"chain dimensions {[Z.dim for Z in chain]} do not match {self.signature.dims}")
        for A, B in zip(chain, chain[1:]):
            if not A <= B:
                raise SignatureError("chain is not increasing")

    @classmethod
    def _trusted(cls, sig, chain):
        obj = object.__new__(cls)
        object.__setattr__(obj, "signature", sig)
        object.__setattr__(obj, "chain", tuple(chain))
        return obj

    def __getitem__(self, i):
        return self.chain[i]

    def __len__(self):
        return len(self.chain)

    @property
    def top(self):
        return self.chain[-1]

    def map(self, fn, sig=None):
        """Apply a subspace map chainwise."""
        return Flag(sig or self.signature, tuple(fn(Z) for Z in self.chain))

    def __repr__(self):
        return f"Flag[{format_flag(self)}]"


# -- counting ------------------------------------------------------------------

def gaussian_binomial(n, d, q):
    """Number of d-dimensional subspaces of F_q^n."""
    if not 0 <= d <= n:
        raise ValueError(f"need 0 <= d <= n, got d={d}, n={n}")
    if q < 2:
        raise ValueError("q must be at least 2")
    num = den = 1
    for i in range(d):
        num *= q ** (n - i) - 1
        den *= q ** (d - i) - 1
    return num // den


def flag_count(sig, q):
    total, prev = 1, 0
    for d in sig.dims:
        total *= gaussian_binomial(sig.n - prev, d - prev, q)
        prev = d
    return total


# -- enumeration ---------------------------------------------------------------

def _rref_shapes(n, d):
    """(pivots, free positions) for every RREF shape of rank d in F^n."""
    for piv in combinations(range(n), d):
        pset = set(piv)
        free = [(i, j) for i, pc in enumerate(piv) for j in range(pc + 1, n) if j not in pset]
        yield piv, free


def enumerate_subspaces(n, d, field, ambient=None, budget=None):
    """Yield every d-dimensional subspace of F^n exactly once.

    Order: pivot columns lexicographically, then the free RREF entries
    lexicographically.  With ``ambient`` (a Subspace of dimension n) the
    subspaces are those of ``ambient``, embedded in its surrounding space.
    """
    if ambient is not None and ambient.dim != n:
        raise LinAlgError("ambient dimension mismatch")
    if not 0 <= d <= n:
        raise ValueError(f"need 0 <= d <= n, got d={d}, n={n}")
    check_budget(f"subspaces Gr({d},{n}) over {field}", gaussian_binomial(n, d, field.q), budget)
    q = field.q
    for piv, free in _rref_shapes(n, d):
        for values in product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(d)]
            for i, pc in enumerate(piv):
                rows[i][pc] = 1
            for (i, j), x in zip(free, values):
                rows[i][j] = x
            if ambient is None:
                yield Subspace._trusted(field, n, [tuple(r) for r in rows], piv)
            else:
                yield Subspace(field, ambient.n, tuple(ambient.vector(r) for r in rows))


def _supersets(Z, ambient, d):
    """d-dimensional subspaces of ``ambient`` containing Z."""
    chart = QuotientChart(ambient, Z)
    for Wq in enumerate_subspaces(chart.dim, d - Z.dim, Z.field, budget=float("inf")):
        lifted = tuple(chart.lift(v) for v in Wq.basis)
        yield Subspace(Z.field, Z.n, Z.basis + lifted)


def enumerate_flags(sig, field, ambient=None, budget=None):
    """Yield every flag of signature ``sig`` once (nested canonical order).

    ``ambient`` (a Subspace with ``dim == sig.n``) restricts to flags inside
    it; flags are then embedded in ambient's surrounding space.
    """
    if ambient is None:
        ambient = Subspace.full(field, sig.n)
    elif ambient.dim != sig.n:
        raise LinAlgError("ambient dimension mismatch")
    check_budget(f"flags Fl({sig}) over {field}", flag_count(sig, field.q), budget)

    def rec(prefix, last):
        i = len(prefix)
        if i == sig.r:
            yield Flag._trusted(sig, prefix)
            return
        for Z in _supersets(last, ambient, sig.dims[i]):
            yield from rec(prefix + (Z,), Z)

    yield from rec((), Subspace.zero(field, ambient.n))


# -- split signatures and Schubert-type loci -----------------------------------------

@dataclass(frozen=True)
class SplitSignature:
    """A signature d0 cut at n1 into a lower part d (<= n1) and upper part e (> n1)."""

    full: FlagSignature
    n1: int

    def __post_init__(self):
        if not 0 < self.n1 < self.full.n:
            raise SignatureError(f"split index n1={self.n1} out of range")

    @property
    def lower(self):
        return tuple(d for d in self.full.dims if d <= self.n1)

    @property
    def upper(self):
        return tuple(e for e in self.full.dims if e > self.n1)

    @property
    def p(self):
        return len(self.lower)

    @property
    def q(self):
        return len(self.upper)

    @property
    def n2(self):
        return self.full.n - self.n1

    @property
    def case(self):
        if not self.upper:
            return 1
        if not self.lower:
            return 2
        return 3

    def lower_signature(self):
        """Signature of the φ1 target: d on V1."""
        return FlagSignature(self.n1, self.lower)

    def upper_signature(self):
        """Signature of the φ2 target: e - n1 on V2."""
        return FlagSignature(self.n2, tuple(e - self.n1 for e in self.upper))

    def parts(self, flag):
        if flag.signature != self.full:
            raise SignatureError(f"flag signature {flag.signature} != {self.full}")
        return flag.chain[: self.p], flag.chain[self.p:]


@dataclass(frozen=True)
class SchubertMembership:
    dim_Zp_cap_V2: object
    dim_W1_cap_V2: object
    in_A1: bool
    in_A2: bool

    @property
    def in_A(self):
        return self.in_A1 or self.in_A2


def schubert_membership(flag, D, split):
    """Membership of a flag in the complements A1, A2, A of U1, U2, U."""
    if D.n1 != split.n1 or D.n != split.full.n:
        raise SignatureError("decomposition does not match split signature")
    low, up = split.parts(flag)
    V2 = D.V2
    dz = dw = None
    in_a1 = in_a2 = False
    if low:
        dz = intersect(low[-1], V2).dim
        in_a1 = dz > 0
    if up:
        dw = intersect(up[0], V2).dim
        in_a2 = dw > split.upper[0] - split.n1
    return SchubertMembership(dz, dw, in_a1, in_a2)


# -- text format ------------------------------------------------------------------------

def format_flag(flag):
    """Subspace blocks separated by ``|`` (rows inside a block by ``;``)."""
    return " | ".join(format_subspace(Z) for Z in flag.chain)


def parse_flag(field, n, text):
    """Inverse of :func:`format_flag` for a flag in F^n."""
    chain = tuple(parse_subspace(field, n, b) for b in text.split("|"))
    return Flag(FlagSignature(n, tuple(Z.dim for Z in chain)), chain)
