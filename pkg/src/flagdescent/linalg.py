"""Exact linear algebra over a :class:`~flagdescent.fields.FiniteField`.

Vectors are tuples of field codes.  Matrices act on column vectors
(``M @ v``); a subspace is stored by the reduced row echelon basis of its
span, so two :class:`Subspace` objects are equal iff they are the same set.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product

from .fields import FieldError, FiniteField, format_element, parse_element


class LinAlgError(ValueError):
    pass


# -- raw row operations --------------------------------------------------------

def _rref_rows(F, rows, ncols):
    """RREF of a list of rows; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    pivots = []
    rank = 0
    nrows = len(rows)
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        s = inv(prow[col])
        if s != 1:
            prow = [mul(s, x) for x in prow]
            rows[rank] = prow
        for r in range(nrows):
            if r != rank:
                row = rows[r]
                f = row[col]
                if f:
                    nf = neg(f)
                    rows[r] = [add(x, mul(nf, y)) if y else x for x, y in zip(row, prow)]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return [tuple(r) for r in rows[:rank]], pivots


def _lin_comb(F, coeffs, rows, ncols):
    out = [0] * ncols
    add, mul = F.add, F.mul
    for c, row in zip(coeffs, rows):
        if c:
            for j, y in enumerate(row):
                if y:
                    out[j] = add(out[j], mul(c, y))
    return tuple(out)


def _vec_add(F, u, v):
    return tuple(F.add(a, b) for a, b in zip(u, v))


def _vec_sub(F, u, v):
    return tuple(F.sub(a, b) for a, b in zip(u, v))


def _vec_scale(F, c, v):
    return tuple(F.mul(c, a) for a in v)


def _nullspace_rows(F, rows, ncols):
    """Basis of {x : R x = 0} for the rows R (right kernel)."""
    red, pivots = _rref_rows(F, rows, ncols)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for fj in free:
        x = [0] * ncols
        x[fj] = 1
        for row, pj in zip(red, pivots):
            if row[fj]:
                x[pj] = F.neg(row[fj])
        basis.append(tuple(x))
    return basis


# -- matrices ------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    field: FiniteField
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise LinAlgError("ragged matrix")
        q = self.field.q
        for r in rows:
            for x in r:
                if not 0 <= x < q:
                    raise FieldError(f"entry {x} not in {self.field}")

    @classmethod
    def identity(cls, F, n):
        return cls(F, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, F, m, n):
        return cls(F, tuple((0,) * n for _ in range(m)))

    @classmethod
    def diag(cls, F, entries):
        n = len(entries)
        return cls(F, tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return self.shape[1]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def columns(self):
        return tuple(zip(*self.rows)) if self.rows else ()

    def transpose(self):
        return Matrix(self.field, self.columns())

    T = property(transpose)

    def __matmul__(self, other):
        F = self.field
        if isinstance(other, Matrix):
            if other.field is not F:
                raise FieldError("field mismatch")
            if self.ncols != other.nrows:
                raise LinAlgError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return Matrix(F, tuple(tuple(_dot(F, r, c) for c in cols) for r in self.rows))
        v = tuple(other)
        if len(v) != self.ncols:
            raise LinAlgError("vector length mismatch")
        return tuple(_dot(F, r, v) for r in self.rows)

    def __add__(self, other):
        F = self.field
        return Matrix(F, tuple(_vec_add(F, a, b) for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other):
        F = self.field
        return Matrix(F, tuple(_vec_sub(F, a, b) for a, b in zip(self.rows, other.rows)))

    def scale(self, c):
        F = self.field
        return Matrix(F, tuple(_vec_scale(F, c, r) for r in self.rows))

    def map_entries(self, table):
        """Apply a code -> code table entrywise (e.g. a Frobenius power)."""
        return Matrix(self.field, tuple(tuple(table[x] for x in r) for r in self.rows))

    def rank(self):
        return len(_rref_rows(self.field, self.rows, self.ncols)[0])

    def is_invertible(self):
        m, n = self.shape
        return m == n and self.rank() == n

    def inverse(self):
        F = self.field
        n, m = self.shape
        if n != m:
            raise LinAlgError("inverse of a non-square matrix")
        aug = [r + tuple(int(i == j) for j in range(n)) for i, r in enumerate(self.rows)]
        red, piv = _rref_rows(F, aug, 2 * n)
        if piv[:n] != list(range(n)) or len(red) < n:
            raise LinAlgError("singular matrix")
        return Matrix(F, tuple(r[n:] for r in red))

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def nullspace(self):
        """Basis of the right kernel {x : M x = 0}."""
        return _nullspace_rows(self.field, self.rows, self.ncols)

    def is_scalar(self):
        n = self.nrows
        if n != self.ncols or n == 0:
            return False
        c = self.rows[0][0]
        return all(self.rows[i][j] == (c if i == j else 0) for i in range(n) for j in range(n))

    def first_nonzero(self):
        for r in self.rows:
            for x in r:
                if x:
                    return x
        return 0

    def normalized(self):
        """Scale so the first nonzero entry (row-major) is 1."""
        lead = self.first_nonzero()
        if lead in (0, 1):
            return self
        return self.scale(self.field.inv(lead))

    def proportional_to(self, other):
        return self.shape == other.shape and self.normalized() == other.normalized()

    def block(self, rows, cols):
        return Matrix(self.field, tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def __repr__(self):
        return f"Matrix({format_matrix(self)})"


def _dot(F, u, v):
    add, mul = F.add, F.mul
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = add(acc, mul(a, b))
    return acc


def rref(M):
    """Return ``(R, rank, pivots)`` with ``R`` the RREF of ``M`` (same shape)."""
    red, piv = _rref_rows(M.field, M.rows, M.ncols)
    rows = list(red) + [(0,) * M.ncols] * (M.nrows - len(red))
    return Matrix(M.field, tuple(rows)), len(red), piv


def solve_left(F, rows, target, ncols):
    """Coefficients x with sum_i x_i rows[i] = target, or None.

    ``rows`` must be linearly independent for the answer to be unique.
    """
    k = len(rows)
    # columns of the system: unknown x_i multiplies rows[i]
    system = [tuple(rows[i][j] for i in range(k)) + (target[j],) for j in range(ncols)]
    red, piv = _rref_rows(F, system, k + 1)
    if k in piv:
        return None
    x = [0] * k
    for row, pj in zip(red, piv):
        x[pj] = row[k]
    return tuple(x)


# -- subspaces -------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Subspace of F^n stored by its RREF basis (canonical)."""

    field: FiniteField
    n: int
    basis: tuple
    pivots: tuple = dc_field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.pivots is None:
            red, piv = _rref_rows(self.field, self.basis, self.n)
            object.__setattr__(self, "basis", tuple(red))
            object.__setattr__(self, "pivots", tuple(piv))

    @classmethod
    def span(cls, F, n, vectors):
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != n:
                raise LinAlgError(f"vector of length {len(v)} in F^{n}")
        return cls(F, n, tuple(vectors))

    @classmethod
    def zero(cls, F, n):
        return cls(F, n, (), ())

    @classmethod
    def full(cls, F, n):
        return cls(F, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), tuple(range(n)))

    @classmethod
    def _trusted(cls, F, n, basis, pivots):
        return cls(F, n, tuple(basis), tuple(pivots))

    @property
    def dim(self):
        return len(self.basis)

    def basis_matrix(self):
        return Matrix(self.field, self.basis) if self.basis else Matrix(self.field, ())

    def coords(self, v):
        """Coordinates of ``v`` in the RREF basis (raises if v is outside)."""
        c = tuple(v[j] for j in self.pivots)
        if _lin_comb(self.field, c, self.basis, self.n) != tuple(v):
            raise LinAlgError("vector not in subspace")
        return c

    def reduce(self, v):
        """Reduce ``v`` modulo the subspace (zero at pivot positions)."""
        F = self.field
        v = list(v)
        for row, pj in zip(self.basis, self.pivots):
            f = v[pj]
            if f:
                nf = F.neg(f)
                v = [F.add(a, F.mul(nf, b)) if b else a for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, v):
        return not any(self.reduce(v))

    __contains__ = contains

    def vector(self, coeffs):
        return _lin_comb(self.field, coeffs, self.basis, self.n)

    def __le__(self, other):
        _check_same(self, other)
        return all(other.contains(v) for v in self.basis)

    def __lt__(self, other):
        return self.dim < other.dim and self <= other

    def __add__(self, other):
        return subspace_sum(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def vectors(self):
        """All q^dim vectors (small cases only)."""
        for c in product(range(self.field.q), repeat=self.dim):
            yield self.vector(c)

    def __repr__(self):
        return f"Subspace<{format_subspace(self)}>"


def _check_same(U, W):
    if U.n != W.n or U.field is not W.field:
        raise LinAlgError(f"ambient mismatch: F^{U.n} over {U.field} vs F^{W.n} over {W.field}")


def subspace_sum(U, W):
    _check_same(U, W)
    return Subspace(U.field, U.n, U.basis + W.basis)


def intersect(U, W):
    """U ∩ W from the kernel of the stacked system  x·U = y·W."""
    _check_same(U, W)
    F = U.field
    if not U.dim or not W.dim:
        return Subspace.zero(F, U.n)
    k = U.dim
    # columns of [U; -W]^T: unknowns (x, y), equation per coordinate
    stacked = list(U.basis) + [tuple(F.neg(a) for a in w) for w in W.basis]
    cols = [tuple(r[j] for r in stacked) for j in range(U.n)]
    kernel = _nullspace_rows(F, cols, len(stacked))
    return Subspace(F, U.n, tuple(_lin_comb(F, x[:k], U.basis, U.n) for x in kernel))


def annihilator(U):
    """U^⊥ in the dual space, identified with F^n through the dual basis."""
    return Subspace(U.field, U.n, tuple(_nullspace_rows(U.field, U.basis, U.n)))


# -- decompositions and projections --------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """V = V1 ⊕ V2 given by an ordered basis ``b``: first n1 rows span V1."""

    basis: Matrix
    n1: int

    def __post_init__(self):
        n = self.basis.nrows
        if self.basis.shape != (n, n) or not self.basis.is_invertible():
            raise LinAlgError("decomposition basis must be an invertible square matrix")
        if not 1 <= self.n1 < n:
            raise LinAlgError(f"need 1 <= n1 < n, got n1={self.n1}, n={n}")
        object.__setattr__(self, "_inv", self.basis.inverse())

    @classmethod
    def standard(cls, F, n, n1):
        return cls(Matrix.identity(F, n), n1)

    @property
    def field(self):
        return self.basis.field

    @property
    def n(self):
        return self.basis.nrows

    @property
    def n2(self):
        return self.n - self.n1

    @property
    def V1(self):
        return Subspace.span(self.field, self.n, self.basis.rows[: self.n1])

    @property
    def V2(self):
        return Subspace.span(self.field, self.n, self.basis.rows[self.n1:])

    def coords(self, v):
        """x with v = sum x_i b_i."""
        return tuple(_dot(self.field, v, col) for col in self._inv.columns())

    def pr(self, v):
        """Projection onto V1 along V2."""
        x = self.coords(v)
        return _lin_comb(self.field, x[: self.n1], self.basis.rows[: self.n1], self.n)

    def pr2(self, v):
        """Projection onto V2 along V1."""
        x = self.coords(v)
        return _lin_comb(self.field, x[self.n1:], self.basis.rows[self.n1:], self.n)

    def from_coords(self, x):
        return _lin_comb(self.field, x, self.basis.rows, self.n)


def project_along(Z, D):
    """Image of Z under the projection V -> V1 along V2 (inside F^n)."""
    if Z.n != D.n or Z.field is not D.field:
        raise LinAlgError("ambient mismatch")
    return Subspace(Z.field, Z.n, tuple(D.pr(v) for v in Z.basis))


# -- semilinear maps ---------------------------------------------------------------

@dataclass(frozen=True)
class SemilinearMap:
    """v -> c · sigma(v), sigma applied coordinatewise (``sigma=None``: linear)."""

    sigma: object
    matrix: Matrix

    def __post_init__(self):
        if not self.matrix.is_invertible():
            raise LinAlgError("semilinear map needs an invertible matrix")
        if self.sigma is not None and self.sigma.group.top is not self.matrix.field:
            raise FieldError("automorphism and matrix live over different fields")

    @property
    def field(self):
        return self.matrix.field

    @property
    def n(self):
        return self.matrix.nrows

    def _sig_table(self):
        return None if self.sigma is None or self.sigma.is_identity else self.sigma.table

    def __call__(self, v):
        tab = self._sig_table()
        if tab is not None:
            v = tuple(tab[x] for x in v)
        return self.matrix @ v

    def apply_subspace(self, U):
        if U.n != self.n or U.field is not self.field:
            raise LinAlgError("dimension/field mismatch")
        return Subspace(U.field, U.n, tuple(self(v) for v in U.basis))

    def sigma_of(self, M):
        tab = self._sig_table()
        return M if tab is None else M.map_entries(tab)

    def compose(self, other):
        """self ∘ other: automorphism σ_s σ_t, matrix c_s · σ_s(c_t)."""
        if self.sigma is None:
            sig = other.sigma
        elif other.sigma is None:
            sig = self.sigma
        else:
            sig = self.sigma.compose(other.sigma)
        return SemilinearMap(sig, self.matrix @ self.sigma_of(other.matrix))

    def inverse(self):
        """(σ, c)^{-1} = (σ^{-1}, σ^{-1}(c^{-1}))."""
        if self.sigma is None:
            return SemilinearMap(None, self.matrix.inverse())
        s_inv = self.sigma.inverse()
        return SemilinearMap(s_inv, self.matrix.inverse().map_entries(s_inv.table))


def semilinear_apply(s, U):
    return s.apply_subspace(U)


def semilinear_compose(s, t):
    return s.compose(t)


# -- quotient coordinates ----------------------------------------------------------

class QuotientChart:
    """Coordinates on W2/T1 for a subspace T1 <= W2.

    The transversal coordinates are the non-pivot columns of T1's RREF
    written in the coordinates of W2's RREF basis.
    """

    def __init__(self, W2, T1):
        if not T1 <= W2:
            raise LinAlgError("T1 must lie in W2")
        self.W2 = W2
        self.T1 = T1
        F = W2.field
        self._t_coords = Subspace(F, W2.dim, tuple(W2.coords(v) for v in T1.basis))
        piv = set(self._t_coords.pivots)
        self.transversal = tuple(j for j in range(W2.dim) if j not in piv)

    @property
    def dim(self):
        return len(self.transversal)

    def __call__(self, v):
        c = self._t_coords.reduce(self.W2.coords(v))
        return tuple(c[j] for j in self.transversal)

    def lift(self, x):
        c = [0] * self.W2.dim
        for j, a in zip(self.transversal, x):
            c[j] = a
        return self.W2.vector(c)


# -- text formats --------------------------------------------------------------------

def _fmt_entry(F, x):
    return str(x) if F.k == 1 else format_element(F, x).replace(",", ":")


def _parse_entry(F, s):
    return parse_element(F, s.replace(":", ","))


def format_matrix(M):
    """Rows ``;``-separated, entries ``,``-separated (``:`` inside extension entries)."""
    return ";".join(",".join(_fmt_entry(M.field, x) for x in r) for r in M.rows)


def parse_matrix(F, text):
    text = text.strip()
    if not text:
        return Matrix(F, ())
    return Matrix(F, tuple(tuple(_parse_entry(F, e) for e in row.split(",")) for row in text.split(";")))


def format_subspace(U):
    return format_matrix(U.basis_matrix()) if U.dim else f"0^{U.n}"


def parse_subspace(F, n, text):
    text = text.strip()
    if text.startswith("0^") or not text:
        return Subspace.zero(F, n)
    return Subspace.span(F, n, parse_matrix(F, text).rows)
