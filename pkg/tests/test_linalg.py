from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from flagdescent.fields import GF, make_tower
from flagdescent.linalg import (
    Decomposition,
    LinAlgError,
    Matrix,
    QuotientChart,
    SemilinearMap,
    Subspace,
    annihilator,
    format_matrix,
    format_subspace,
    intersect,
    parse_matrix,
    parse_subspace,
    project_along,
    rref,
    semilinear_apply,
    semilinear_compose,
    solve_left,
    subspace_sum,
)


def span_set(F, vectors, n):
    """Every linear combination, by brute force."""
    out = set()
    for c in product(range(F.q), repeat=len(vectors)):
        v = [0] * n
        for a, w in zip(c, vectors):
            for j in range(n):
                v[j] = F.add(v[j], F.mul(a, w[j]))
        out.add(tuple(v))
    return out


def all_vectors(F, n):
    return list(product(range(F.q), repeat=n))


def vecs(F, n, k):
    return st.lists(st.tuples(*[st.integers(0, F.q - 1)] * n), min_size=0, max_size=k)


F2, F3, F4 = GF(2), GF(3), GF(2, 2)


def test_rref_examples():
    M = Matrix(F3, ((0, 2, 1), (0, 1, 2), (1, 1, 1)))
    R, rank, piv = rref(M)
    assert rank == 2 and piv == [0, 1]
    assert R.rows == ((1, 0, 2), (0, 1, 2), (0, 0, 0))
    assert rref(R)[0] == R


@given(vecs(F3, 4, 5))
@settings(max_examples=80, deadline=None)
def test_rank_matches_span_size(rows):
    U = Subspace.span(F3, 4, rows)
    assert len(span_set(F3, rows, 4)) == 3 ** U.dim
    assert set(U.vectors()) == span_set(F3, rows, 4)
    # canonical: any spanning set of the same space gives the same object
    assert Subspace.span(F3, 4, list(U.vectors())) == U


@given(vecs(F4, 3, 3), vecs(F4, 3, 3))
@settings(max_examples=80, deadline=None)
def test_sum_and_intersection_against_sets(a, b):
    U, W = Subspace.span(F4, 3, a), Subspace.span(F4, 3, b)
    su, sw = span_set(F4, a, 3), span_set(F4, b, 3)
    assert set(intersect(U, W).vectors()) == su & sw
    assert set(subspace_sum(U, W).vectors()) == span_set(F4, list(a) + list(b), 3)
    assert (U & W) <= U <= (U + W)
    assert (U <= W) == su.issubset(sw)


@given(vecs(F3, 3, 3))
@settings(max_examples=60, deadline=None)
def test_annihilator_brute_force(rows):
    U = Subspace.span(F3, 3, rows)
    ann = {w for w in all_vectors(F3, 3)
           if all(sum(x * y for x, y in zip(u, w)) % 3 == 0 for u in U.vectors())}
    assert set(annihilator(U).vectors()) == ann
    assert annihilator(annihilator(U)) == U


def test_inverse_and_powers():
    M = Matrix(F4, ((1, 2, 0), (0, 1, 3), (2, 0, 1)))
    assert M.is_invertible()
    assert M @ M.inverse() == Matrix.identity(F4, 3)
    assert M ** -1 == M.inverse()
    assert M ** 3 == M @ M @ M
    with pytest.raises(LinAlgError):
        Matrix(F2, ((1, 1), (1, 1))).inverse()


def test_solve_left_and_coords():
    rows = [(1, 0, 2), (0, 1, 1)]
    x = solve_left(F3, rows, (2, 1, 2), 3)
    assert x == (2, 1)
    assert solve_left(F3, rows, (0, 0, 1), 3) is None
    U = Subspace.span(F3, 3, rows)
    for c in product(range(3), repeat=2):
        assert U.coords(U.vector(c)) == c
    with pytest.raises(LinAlgError):
        U.coords((0, 0, 1))


def test_decomposition_projection_examples():
    D = Decomposition.standard(F2, 3, 1)
    # the line through (1, 1, 0) projects to span(e1); span(e2) projects to 0
    assert project_along(Subspace.span(F2, 3, [(1, 1, 0)]), D) == Subspace.span(F2, 3, [(1, 0, 0)])
    assert project_along(Subspace.span(F2, 3, [(0, 1, 0)]), D).dim == 0
    with pytest.raises(LinAlgError):
        Decomposition.standard(F2, 3, 0)
    with pytest.raises(LinAlgError):
        Decomposition(Matrix(F2, ((1, 1), (1, 1))), 1)


def test_projection_nonstandard_basis_brute_force():
    B = Matrix(F3, ((1, 1, 0), (0, 1, 1), (1, 0, 1)))
    D = Decomposition(B, 2)
    V1, V2 = set(D.V1.vectors()), set(D.V2.vectors())
    for v in all_vectors(F3, 3):
        p1, p2 = D.pr(v), D.pr2(v)
        assert p1 in V1 and p2 in V2
        assert tuple((a + b) % 3 for a, b in zip(p1, p2)) == v
        assert D.from_coords(D.coords(v)) == v


def test_semilinear_maps():
    _, F, G = make_tower(2, 1, 2)
    frob = G.generator
    c = Matrix(F, ((2, 1), (0, 1)))
    s = SemilinearMap(frob, c)
    t = SemilinearMap(frob, Matrix(F, ((1, 0), (3, 1))))
    for v in all_vectors(F, 2):
        # definition: c · σ(v)
        direct = c @ tuple(F.pow(x, 2) for x in v)
        assert s(v) == direct
        assert s.compose(t)(v) == s(t(v))
        assert s.inverse()(s(v)) == v
    U = Subspace.span(F, 2, [(1, 2)])
    assert semilinear_apply(s, U) == Subspace.span(F, 2, [s((1, 2))])
    assert semilinear_compose(s, s.inverse()).apply_subspace(U) == U
    # additivity and σ-homogeneity
    for a in F.elements():
        assert s(tuple(F.mul(a, x) for x in (1, 3))) == tuple(F.mul(F.pow(a, 2), y) for y in s((1, 3)))


def test_quotient_chart_is_bijection():
    W2 = Subspace.span(F3, 4, [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    T1 = Subspace.span(F3, 4, [(0, 1, 1, 0)])
    chart = QuotientChart(W2, T1)
    assert chart.dim == 2
    classes = {}
    for v in W2.vectors():
        classes.setdefault(chart(v), set()).add(v)
    assert len(classes) == 9
    for x, cls in classes.items():
        assert chart(chart.lift(x)) == x
        assert chart.lift(x) in cls
        # each class is a coset of T1
        base = next(iter(cls))
        assert cls == {tuple((a + b) % 3 for a, b in zip(base, t)) for t in T1.vectors()}
    with pytest.raises(LinAlgError):
        QuotientChart(T1, W2)


def test_text_formats():
    M = Matrix(F4, ((1, 2), (3, 0)))
    assert format_matrix(M) == "1:0,0:1;1:1,0:0"
    assert parse_matrix(F4, format_matrix(M)) == M
    U = Subspace.span(F3, 3, [(1, 2, 0)])
    assert parse_subspace(F3, 3, format_subspace(U)) == U
    Z = Subspace.zero(F3, 3)
    assert format_subspace(Z) == "0^3" and parse_subspace(F3, 3, "0^3") == Z


def test_entries_validated():
    from flagdescent.fields import FieldError
    with pytest.raises(FieldError):
        Matrix(F2, ((0, 2),))
    with pytest.raises(LinAlgError):
        Subspace.span(F2, 3, [(1, 0)])
