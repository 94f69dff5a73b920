from itertools import combinations, product

import pytest

from flagdescent.autgroup import (
    CocycleError,
    ProjectiveMap,
    TwistedAction,
    dual_flag,
    dump_cocycle,
    enumerate_pgl,
    fixed_flags,
    is_admissible,
    is_pgl_induced,
    lifts_satisfy_cocycle,
    load_cocycle,
    orbits,
    tau,
    validate_cocycle,
)
from flagdescent.fields import GF, make_tower
from flagdescent.flags import FlagSignature, SignatureError, enumerate_flags
from flagdescent.linalg import Matrix, Subspace

F2 = GF(2)
SIG = FlagSignature(3, (1, 2))


def perp_set(F, vectors, n):
    vs = list(vectors)
    return frozenset(w for w in product(range(F.q), repeat=n)
                     if all(_dot(F, v, w) == 0 for v in vs))


def _dot(F, u, v):
    s = 0
    for a, b in zip(u, v):
        s = F.add(s, F.mul(a, b))
    return s


def test_admissibility_spot_values():
    assert not is_admissible(FlagSignature(3, (1, 2)))
    assert not is_admissible(FlagSignature(4, (2,)))
    assert is_admissible(FlagSignature(3, (1,)))
    assert is_admissible(FlagSignature(2, (1,)))       # n = 2: P^1 is self-dual but Aut = PGL_2


def test_admissibility_exhaustive():
    for n in range(1, 9):
        for r in range(1, n):
            for dims in combinations(range(1, n), r):
                sig = FlagSignature(n, dims)
                self_dual = sorted(n - d for d in dims) == list(dims)
                assert is_admissible(sig) == (not (n >= 3 and self_dual))


def test_dual_flag_brute_force():
    for f in enumerate_flags(SIG, F2):
        d = dual_flag(f)
        assert [frozenset(Z.vectors()) for Z in d.chain] == [
            perp_set(F2, Z.vectors(), 3) for Z in reversed(f.chain)]
        assert tau(tau(f)) == f
    with pytest.raises(SignatureError):
        tau(next(enumerate_flags(FlagSignature(3, (1,)), F2)))


def test_tau_with_j0():
    j0 = Matrix(F2, ((0, 1, 0), (1, 0, 0), (0, 0, 1)))
    f = next(enumerate_flags(SIG, F2))
    assert tau(f, j0) == tau(f).map(lambda Z: Subspace(F2, 3, tuple(j0 @ v for v in Z.basis)))


def test_pgl_orders():
    assert len(list(enumerate_pgl(3, F2))) == 168          # |GL_3(F_2)| / 1
    assert len(list(enumerate_pgl(2, GF(3)))) == 24         # 48 / 2
    assert len(set(enumerate_pgl(2, GF(2, 2)))) == 60       # 180 / 3


def test_tau_not_induced_but_normalizes():
    assert is_pgl_induced(tau, SIG, F2) is None
    pgl = list(enumerate_pgl(3, F2))
    for g in pgl:
        h = is_pgl_induced(lambda f, g=g: tau(g.apply_flag(tau(f))), SIG, F2)
        assert h is not None
        # τ g τ acts as the inverse transpose
        assert h == ProjectiveMap(g.lift.T.inverse())
    g = pgl[5]
    assert is_pgl_induced({f: g.apply_flag(f) for f in enumerate_flags(SIG, F2)}, SIG, F2) == g


def test_projective_map_order():
    _, F8, _ = make_tower(2, 3, 1)
    g = ProjectiveMap(Matrix.diag(F8, [1, 1, F8.generator]))
    assert g.order() == 7
    assert ProjectiveMap(Matrix.identity(F8, 3).scale(5)) == ProjectiveMap(Matrix.identity(F8, 3))


def _tower4():
    return make_tower(2, 1, 2)


def test_trivial_action_fixes_rational_flags():
    base, F4, G = _tower4()
    T = TwistedAction.trivial(G, 3, signature=SIG)
    fixed = fixed_flags(T)
    rational = [f for f in enumerate_flags(SIG, F4)
                if all(x in (0, 1) for Z in f.chain for row in Z.basis for x in row)]
    assert fixed == rational and len(fixed) == 21


def test_failing_cocycle_has_witness():
    _, F4, G = _tower4()
    c = Matrix(F4, ((1, 2, 0), (0, 1, 0), (0, 0, 1)))
    T = TwistedAction(G, 3, {0: Matrix.identity(F4, 3), 1: c}, signature=SIG)
    check = validate_cocycle(T)
    assert not check and check.witness[:2] == (1, 1)
    assert not lifts_satisfy_cocycle(T)
    with pytest.raises(CocycleError):
        fixed_flags(T)
    with pytest.raises(CocycleError):
        TwistedAction(G, 3, {0: Matrix.identity(F4, 3)})


def test_identity_lift_must_be_scalar():
    base, F53, G = make_tower(53, 1, 1)
    swap = Matrix(F53, ((0, 1), (1, 0)))
    assert not validate_cocycle(TwistedAction(G, 2, {0: swap}))


def test_cocycles_validate_and_count():
    _, F4, G = _tower4()
    w = F4.generator
    T = TwistedAction.from_generator(G, Matrix.diag(F4, [w, 1, 1]), signature=SIG)
    assert validate_cocycle(T) and lifts_satisfy_cocycle(T)
    assert len(fixed_flags(T)) == 21
    g = Matrix(F4, ((1, w, 0), (0, 1, 1), (w, 0, 1)))
    C = TwistedAction.coboundary(G, g, signature=SIG)
    fixed = fixed_flags(C)
    assert len(fixed) == 21
    # coboundary fixed points are g-translates of rational flags
    rational = fixed_flags(TwistedAction.trivial(G, 3, signature=SIG))
    P = ProjectiveMap(g)
    assert set(fixed) == {P.apply_flag(f) for f in rational}


def test_swap_action_brute_force():
    _, F4, G = _tower4()
    T = TwistedAction.from_generator(G, Matrix.identity(F4, 3), swap=True, signature=SIG)
    assert validate_cocycle(T)
    fixed = fixed_flags(T)
    frob = G.frob_table(1)
    expected = []
    for f in enumerate_flags(SIG, F4):
        P, L = f.chain
        sP = {tuple(frob[x] for x in v) for v in P.vectors()}
        sL = {tuple(frob[x] for x in v) for v in L.vectors()}
        if perp_set(F4, sL, 3) == frozenset(P.vectors()) and perp_set(F4, sP, 3) == frozenset(L.vectors()):
            expected.append(f)
    assert fixed == expected and len(fixed) == 9
    with pytest.raises(CocycleError):
        T.apply_subspace(1, fixed[0].chain[0])


def test_orbits_partition():
    _, F4, G = _tower4()
    T = TwistedAction.trivial(G, 3, signature=SIG)
    orbs = orbits(T)
    assert sum(len(o) for o in orbs) == 105
    assert sum(1 for o in orbs if len(o) == 1) == 21


def test_json_round_trip(tmp_path):
    _, F4, G = _tower4()
    T = TwistedAction.from_generator(G, Matrix.diag(F4, [F4.generator, 1, 1]), signature=SIG)
    path = tmp_path / "c.json"
    dump_cocycle(T, path)
    U = load_cocycle(path)
    assert U.to_json() == T.to_json()
    for f in list(enumerate_flags(SIG, F4))[:20]:
        assert U(1, f) == T(1, f)
