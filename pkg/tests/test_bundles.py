from itertools import product

import pytest

from flagdescent.autgroup import TwistedAction
from flagdescent.bundles import (
    BlockActions,
    BundleContext,
    BundleError,
    NonBlockLiftError,
    SplittingError,
    F_map,
    base_points,
    coord_phi1,
    coord_phi2,
    coord_psi,
    fiber_basis,
    fiber_points,
    in_U,
    in_U1,
    in_U2,
    is_block_diagonal,
    param_phi1,
    param_phi2,
    param_psi,
    phi1,
    phi2,
    psi,
    split_from_automorphism,
    unflatten,
    zero_section,
)
from flagdescent.checks import cocycle_instance, split_instance
from flagdescent.fields import GF, make_tower
from flagdescent.flags import FlagSignature, SplitSignature, enumerate_flags, flag_count
from flagdescent.linalg import Decomposition, Matrix, Subspace


def vec_add(F, u, v):
    return tuple(F.add(a, b) for a, b in zip(u, v))


def test_loci_brute_force():
    F = GF(2)
    ctx = BundleContext.standard(F, 4, 2, (1, 3))
    V2 = set(ctx.V2.vectors())
    full = 2 ** 4
    for f in enumerate_flags(ctx.split.full, F):
        Z, W = f.chain
        u1 = not any(v in V2 for v in Z.vectors() if any(v))
        u2 = len({vec_add(F, w, v) for w in W.vectors() for v in V2}) == full
        assert in_U1(f, ctx) == u1 and in_U2(f, ctx) == u2 and in_U(f, ctx) == (u1 and u2)
        if u1:
            # φ1 is the image of Z under the projection killing V2
            image = {ctx.D.pr(v) for v in Z.vectors()}
            assert set(phi1(f, ctx).top.vectors()) == image
        else:
            with pytest.raises(BundleError):
                phi1(f, ctx)
        if u2:
            assert set(phi2(f, ctx).chain[0].vectors()) == set(W.vectors()) & V2


@pytest.mark.parametrize("q,n,n1,dims", [(2, 3, 2, (1,)), (3, 3, 1, (2,)), (2, 4, 2, (1, 3)), (2, 4, 1, (2, 3))])
def test_cardinalities(q, n, n1, dims):
    F = GF(q)
    ctx = BundleContext.standard(F, n, n1, dims)
    full = list(enumerate_flags(ctx.split.full, F))
    U = [f for f in full if in_U(f, ctx)]
    assert len(U) == len(base_points(ctx)) * q ** ctx.fiber_rank()
    if ctx.p:
        U1 = [f for f in enumerate_flags(ctx.lower_sig(), F) if in_U1(f, ctx)]
        assert len(U1) == flag_count(ctx.split.lower_signature(), q) * q ** (ctx.d_p * ctx.n2)
    if ctx.q:
        U2 = [f for f in enumerate_flags(ctx.upper_sig(), F) if in_U2(f, ctx)]
        t1 = ctx.split.upper[0] - n1
        assert len(U2) == flag_count(ctx.split.upper_signature(), q) * q ** (n1 * (ctx.n2 - t1))


def test_fiber_rank_matches_kernel_dimension():
    F = GF(3)
    ctx = BundleContext.standard(F, 4, 2, (1, 3))
    for S, T in base_points(ctx):
        assert len(fiber_basis(S, T, ctx)) == ctx.fiber_rank() == 1 * 2 + 2 * 1 - 1 * 1


def test_nonstandard_decomposition_round_trip():
    F = GF(3)
    B = Matrix(F, ((1, 1, 0), (0, 1, 1), (1, 0, 1)))
    ctx = BundleContext(Decomposition(B, 1), SplitSignature(FlagSignature(3, (1, 2)), 1))
    seen = 0
    for S, T in base_points(ctx):
        assert S.top <= ctx.V1 and T.chain[0] <= ctx.V2
        for f, g in fiber_points(S, T, ctx):
            flag = param_psi(S, T, f, g, ctx)
            pt = coord_psi(flag, ctx)
            assert (pt.S, pt.T, pt.f, pt.g) == (S, T, f, g)
            seen += 1
    U = [f for f in enumerate_flags(ctx.split.full, F) if in_U(f, ctx)]
    assert seen == len(U)
    for f in U:
        pt = coord_psi(f, ctx)
        assert param_psi(pt.S, pt.T, pt.f, pt.g, ctx) == f


def test_kernel_equivalence_small():
    F = GF(2)
    ctx = BundleContext.standard(F, 4, 2, (1, 3))
    for S, T in base_points(ctx):
        for x in product(range(2), repeat=4):
            f, g = unflatten(ctx, x)
            Z = param_phi1(S, f, ctx).top
            W1 = param_phi2(T, g, ctx).chain[0]
            zero = not any(any(r) for r in F_map(S, T, f, g, ctx).rows)
            assert (Z <= W1) == zero
            if not zero:
                with pytest.raises(BundleError):
                    param_psi(S, T, f, g, ctx)


def test_zero_section_shape():
    F = GF(2)
    ctx = BundleContext.standard(F, 4, 2, (1, 3))
    for S, T in base_points(ctx):
        z = zero_section(S, T, ctx)
        Z, W = z.chain
        assert Z == S.top and W == ctx.V1 + T.chain[0]
        assert psi(z, ctx) == (S, T)


def test_phi_chart_round_trips_case_one_and_two():
    F = GF(3)
    c1 = BundleContext.standard(F, 3, 2, (1,))
    for f in enumerate_flags(c1.lower_sig(), F):
        if in_U1(f, c1):
            c = coord_phi1(f, c1)
            assert param_phi1(c.S, c.f, c1) == f
    c2 = BundleContext.standard(F, 3, 1, (2,))
    for f in enumerate_flags(c2.upper_sig(), F):
        if in_U2(f, c2):
            c = coord_phi2(f, c2)
            assert param_phi2(c.T, c.g, c2) == f


def test_zero_section_naturality():
    T = cocycle_instance("diag-omega")
    ctx = BundleContext.standard(T.field, 3, 1, (1, 2))
    Q = BlockActions(T, ctx)
    for S, Tb in base_points(ctx):
        for e in range(T.group.order):
            img = T(e, zero_section(S, Tb, ctx))
            assert img == zero_section(*Q.Q(e, S, Tb), ctx)


def test_block_checks():
    F = GF(3)
    M = Matrix(F, ((1, 2, 0), (1, 1, 0), (0, 0, 2)))
    assert is_block_diagonal(M, 2) and not is_block_diagonal(M, 1)
    T = cocycle_instance("off-block")
    ctx = BundleContext.standard(T.field, 3, 1, (1, 2))
    with pytest.raises(NonBlockLiftError):
        BlockActions(T, ctx)
    other = BundleContext(Decomposition(Matrix(T.field, ((1, 1, 0), (0, 1, 0), (0, 0, 1))), 1), ctx.split)
    with pytest.raises(NonBlockLiftError):
        BlockActions(cocycle_instance("trivial"), other)


def test_splitting_f8():
    g, T, V1 = split_instance("F8")
    r = split_from_automorphism(g, T)
    F = T.field
    assert r.decomposition.V1 == Subspace(F, 3, V1)
    assert r.decomposition.V2 == Subspace(F, 3, ((0, 0, 1),))
    assert r.nu == {0: 1} and r.block_diagonal == {0: True}
    assert r.condition == "order>n!"
    # a scaled lift gives the same pair of eigenspaces, possibly reordered
    r2 = split_from_automorphism(g.scale(5), T)
    D, D2 = r.decomposition, r2.decomposition
    assert {D2.V1, D2.V2} == {D.V1, D.V2}


def test_splitting_nontrivial_nu():
    g, T, V1 = split_instance("F53^2-pair-swap")
    r = split_from_automorphism(g, T)
    top = T.field
    assert r.nu[1] == top.neg(1) and r.nu_orders == {0: 1, 1: 2}
    assert all(r.block_diagonal.values())
    assert r.decomposition.V1 == Subspace(top, 4, V1)
    # choosing another eigenvalue of h^{n!} gives another valid splitting
    r2 = split_from_automorphism(g, T, choose=1)
    assert r2.decomposition.V1 != r.decomposition.V1 and all(r2.block_diagonal.values())


def test_splitting_errors():
    _, F8, G = make_tower(2, 3, 1)
    with pytest.raises(SplittingError, match="scalar"):
        split_from_automorphism(Matrix.identity(F8, 3), TwistedAction.trivial(G, 3))
    # order 2 < 3!: h = diag(1, 1, -1) over F_3 has h^6 = 1
    _, F3, G3 = make_tower(3, 1, 1)
    with pytest.raises(SplittingError, match="scalar"):
        split_from_automorphism(Matrix.diag(F3, [1, 1, 2]), TwistedAction.trivial(G3, 3))
    # no eigenvalues in F_2: x -> companion of x^2 + x + 1
    _, F2, G2 = make_tower(2, 1, 1)
    with pytest.raises(SplittingError, match="eigenvalues"):
        split_from_automorphism(Matrix(F2, ((0, 1), (1, 1))), TwistedAction.trivial(G2, 2))
    # does not commute with the twisted action
    _, F4, G4 = make_tower(2, 1, 2)
    with pytest.raises(SplittingError, match="commute"):
        split_from_automorphism(Matrix.diag(F4, [1, 1, F4.generator]), TwistedAction.trivial(G4, 3))
