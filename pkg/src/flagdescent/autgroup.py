"""Admissibility, the dual involution, PGL witnesses and twisted Galois actions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product

from .budget import check_budget
from .fields import make_tower
from .flags import Flag, FlagSignature, SignatureError, enumerate_flags
from .linalg import LinAlgError, Matrix, SemilinearMap, annihilator, format_matrix, parse_matrix


class CocycleError(ValueError):
    pass


def is_admissible(sig):
    """False exactly for n >= 3 with d_i + d_{r+1-i} = n for every i."""
    n, d = sig.n, sig.dims
    symmetric = all(d[i] + d[len(d) - 1 - i] == n for i in range(len(d)))
    return not (n >= 3 and symmetric)


# -- projective maps -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProjectiveMap:
    """Element of PGL_n given by an invertible lift; equal iff lifts are proportional."""

    lift: Matrix

    def __post_init__(self):
        if not self.lift.is_invertible():
            raise LinAlgError("projective map needs an invertible lift")
        object.__setattr__(self, "canonical", self.lift.normalized())

    def __eq__(self, other):
        return isinstance(other, ProjectiveMap) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __matmul__(self, other):
        return ProjectiveMap(self.lift @ other.lift)

    def inverse(self):
        return ProjectiveMap(self.lift.inverse())

    def apply_subspace(self, U):
        return SemilinearMap(None, self.lift).apply_subspace(U)

    def apply_flag(self, flag):
        return flag.map(self.apply_subspace)

    def order(self, limit=10_000):
        """Order in PGL (smallest k with lift^k scalar)."""
        M = self.lift
        P = M
        for k in range(1, limit + 1):
            if P.is_scalar():
                return k
            P = P @ M
        raise ValueError(f"order exceeds {limit}")

    def __repr__(self):
        return f"PGL[{format_matrix(self.canonical)}]"


def enumerate_pgl(n, field, budget=None):
    """All of PGL_n(F_q), via lifts whose first nonzero entry is 1."""
    q = field.q
    check_budget(f"PGL_{n} candidates over {field}", q ** (n * n), budget)
    for entries in product(range(q), repeat=n * n):
        lead = next((x for x in entries if x), 0)
        if lead != 1:
            continue
        M = Matrix(field, tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n)))
        if M.is_invertible():
            yield ProjectiveMap(M)


# -- duality -----------------------------------------------------------------------------

def dual_flag(flag):
    """Z_1 < ... < Z_r  ->  Z_r^⊥ < ... < Z_1^⊥ in the dual space."""
    sig = flag.signature.dual()
    return Flag(sig, tuple(annihilator(Z) for Z in reversed(flag.chain)))


def tau(flag, j0=None):
    """The dimension-swapping automorphism j ∘ * of a self-dual flag variety."""
    if not flag.signature.is_self_dual():
        raise SignatureError(f"signature {flag.signature} is not self-dual")
    dual = dual_flag(flag)
    if j0 is None:
        return dual
    if not j0.is_invertible():
        raise LinAlgError("j0 must be invertible")
    return dual.map(SemilinearMap(None, j0).apply_subspace)


# -- permutation witnesses -------------------------------------------------------------

class _PermutationTable:
    """Flag permutations induced by every element of PGL_n(F_q)."""

    def __init__(self, sig, field, budget):
        self.flags = list(enumerate_flags(sig, field, budget=budget))
        self.index = {f: i for i, f in enumerate(self.flags)}
        self.by_perm = {}
        for g in enumerate_pgl(sig.n, field, budget=budget):
            perm = tuple(self.index[g.apply_flag(f)] for f in self.flags)
            self.by_perm.setdefault(perm, g)

    def perm_of(self, mapping):
        return tuple(self.index[mapping(f)] for f in self.flags)


@lru_cache(maxsize=8)
def _permutation_table(sig, field, budget):
    return _PermutationTable(sig, field, budget)


def is_pgl_induced(perm, sig, field, budget=None):
    """Return g in PGL with g·F = perm(F) for every flag F, else None.

    ``perm`` is a callable on flags or a mapping flag -> flag.
    """
    table = _permutation_table(sig, field, budget)
    fn = perm.__getitem__ if hasattr(perm, "__getitem__") and not callable(perm) else perm
    return table.by_perm.get(table.perm_of(fn))


def flag_permutation(mapping, sig, field, budget=None):
    """Index tuple of ``mapping`` on the canonical flag list."""
    return _permutation_table(sig, field, budget).perm_of(mapping)


# -- twisted Galois actions ---------------------------------------------------------------

@dataclass(frozen=True)
class CocycleCheck:
    ok: bool
    witness: tuple = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class TwistedAction:
    """σ -> T(σ) = a_σ ∘ B_b(σ) on flags of F_{q^k}^n.

    ``lifts[e]`` is the chosen lift c_σ (coordinates in the basis ``basis``)
    of a_σ for σ = Frob^e.  For ``e`` in ``swaps`` the action additionally
    applies the dual involution (only for self-dual signatures, standard basis).
    """

    group: object
    n: int
    lifts: dict
    basis: Matrix = None
    swaps: frozenset = frozenset()
    signature: FlagSignature = None
    _maps: dict = dc_field(default=None, init=False, repr=False)

    def __post_init__(self):
        F = self.group.top
        basis = self.basis if self.basis is not None else Matrix.identity(F, self.n)
        object.__setattr__(self, "basis", basis)
        if basis.shape != (self.n, self.n) or not basis.is_invertible():
            raise LinAlgError("basis must be an invertible n x n matrix")
        lifts = {e % self.group.order: M for e, M in self.lifts.items()}
        if set(lifts) != set(range(self.group.order)):
            raise CocycleError(f"need a lift for every exponent 0..{self.group.order - 1}")
        for M in lifts.values():
            if M.field is not F or M.shape != (self.n, self.n) or not M.is_invertible():
                raise CocycleError("lifts must be invertible n x n matrices over the top field")
        object.__setattr__(self, "lifts", lifts)
        object.__setattr__(self, "swaps", frozenset(e % self.group.order for e in self.swaps))
        if self.swaps and basis != Matrix.identity(F, self.n):
            raise CocycleError("dimension-swapping actions are only supported in the standard basis")
        Bt = basis.T
        Bt_inv = Bt.inverse()
        maps = {}
        for e, c in lifts.items():
            sigma = self.group.automorphism(e)
            maps[e] = SemilinearMap(sigma, Bt @ c @ Bt_inv.map_entries(sigma.table))
        object.__setattr__(self, "_maps", maps)

    # constructors
    @classmethod
    def trivial(cls, group, n, basis=None, signature=None):
        F = group.top
        return cls(group, n, {e: Matrix.identity(F, n) for e in range(group.order)}, basis,
                   signature=signature)

    @classmethod
    def from_generator(cls, group, c, basis=None, swap=False, signature=None):
        """Extend a lift for the Frobenius generator by c_{σ^k} = c σ(c) ... σ^{k-1}(c)."""
        F = group.top
        n = c.nrows
        lifts = {0: Matrix.identity(F, n)}
        acc = Matrix.identity(F, n)
        for e in range(1, group.order):
            acc = acc @ c.map_entries(group.frob_table(e - 1))
            lifts[e] = acc
        swaps = frozenset(e for e in range(group.order) if swap and e % 2 == 1)
        return cls(group, n, lifts, basis, swaps, signature)

    @classmethod
    def coboundary(cls, group, g, basis=None, signature=None):
        """a_σ = g · σ(g)^{-1}."""
        lifts = {e: g @ g.map_entries(group.frob_table(e)).inverse() for e in range(group.order)}
        return cls(group, g.nrows, lifts, basis, signature=signature)

    @property
    def field(self):
        return self.group.top

    def semilinear(self, e):
        """T(Frob^e) on vectors, in standard coordinates."""
        return self._maps[e % self.group.order]

    def lift(self, e):
        return self.lifts[e % self.group.order]

    def apply_subspace(self, e, U):
        """Natural action on subspaces (PGL part only)."""
        e %= self.group.order
        if e in self.swaps:
            raise CocycleError("dimension-swapping elements do not act on single subspaces")
        return self._maps[e].apply_subspace(U)

    def __call__(self, e, flag):
        e = getattr(e, "e", e) % self.group.order
        s = self._maps[e]
        if e in self.swaps:
            sig_e = self.group.automorphism(e)
            galois = SemilinearMap(sig_e, Matrix.identity(self.field, self.n))
            linear = SemilinearMap(None, self.lifts[e])
            swapped = tau(flag.map(galois.apply_subspace))
            return swapped.map(linear.apply_subspace)
        return flag.map(s.apply_subspace)

    def probe_signature(self):
        return self.signature or FlagSignature(self.n, (1,))

    def to_json(self):
        g = self.group
        return {
            "tower": [g.top.p, g.base.k, g.order],
            "n": self.n,
            "basis": format_matrix(self.basis),
            "lifts": {str(e): format_matrix(M) for e, M in sorted(self.lifts.items())},
            "swaps": sorted(self.swaps),
            "signature": list(self.signature.dims) if self.signature else None,
        }

    @classmethod
    def from_json(cls, data):
        _, _, group = make_tower(*data["tower"])
        F = group.top
        n = int(data["n"])
        basis = parse_matrix(F, data["basis"]) if data.get("basis") else None
        lifts = {int(e): parse_matrix(F, t) for e, t in data["lifts"].items()}
        sig = FlagSignature(n, tuple(data["signature"])) if data.get("signature") else None
        return cls(group, n, lifts, basis, frozenset(data.get("swaps", ())), sig)


def load_cocycle(path):
    with open(path) as fh:
        return TwistedAction.from_json(json.load(fh))


def dump_cocycle(T, path):
    with open(path, "w") as fh:
        json.dump(T.to_json(), fh, indent=2)


def validate_cocycle(T, probe=None, budget=None):
    """Check T(στ) = T(σ)T(τ) on every flag of the probe signature.

    Returns a :class:`CocycleCheck`; its witness is ``(e_σ, e_τ, flag)``.
    """
    sig = probe or T.probe_signature()
    flags = list(enumerate_flags(sig, T.field, budget=budget))
    k = T.group.order
    for s in range(k):
        for t in range(k):
            for f in flags:
                if T((s + t) % k, f) != T(s, T(t, f)):
                    return CocycleCheck(False, (s, t, f))
    return CocycleCheck(True)


def lifts_satisfy_cocycle(T):
    """Matrix-level form: c_{στ} ∝ c_σ · σ(c_τ) for all pairs (no swaps)."""
    g = T.group
    for s in range(g.order):
        for t in range(g.order):
            lhs = T.lift(s + t)
            rhs = T.lift(s) @ T.lift(t).map_entries(g.frob_table(s))
            if not lhs.proportional_to(rhs):
                return CocycleCheck(False, (s, t))
    return CocycleCheck(True)


def fixed_flags(T, sig=None, budget=None, validate=True):
    """Flags F with T(σ)F = F for every σ in the Galois group."""
    sig = sig or T.probe_signature()
    if validate:
        check = validate_cocycle(T, sig, budget)
        if not check:
            raise CocycleError(f"not a cocycle; witness {check.witness}")
    return [f for f in enumerate_flags(sig, T.field, budget=budget)
            if all(T(e, f) == f for e in range(T.group.order))]


def orbits(T, sig=None, budget=None):
    """Orbits of the Galois group on flags (as lists, in enumeration order)."""
    sig = sig or T.probe_signature()
    seen = set()
    out = []
    for f in enumerate_flags(sig, T.field, budget=budget):
        if f in seen:
            continue
        orbit = []
        for e in range(T.group.order):
            g = T(e, f)
            if g not in orbit:
                orbit.append(g)
        seen.update(orbit)
        out.append(orbit)
    return out
