"""Registry of verification checks.

Each check is a pure function of JSON-friendly parameters returning a
:class:`~flagdescent.bundles.Report`.  Suites pick checks and parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import factorial

from . import brauer as br
from .autgroup import (
    TwistedAction,
    enumerate_pgl,
    fixed_flags,
    flag_permutation,
    is_admissible,
    is_pgl_induced,
    tau,
    validate_cocycle,
)
from .bundles import (
    BundleContext,
    NonBlockLiftError,
    Report,
    SplittingError,
    F_map,
    base_points,
    coord_phi1,
    coord_phi2,
    coord_psi,
    descent_count_check,
    equivariance_check,
    fiber_action_check,
    fiber_points,
    in_U,
    in_U1,
    in_U2,
    param_phi1,
    param_phi2,
    param_psi,
    psi,
    split_from_automorphism,
    unflatten,
    zero_coords,
    zero_section,
)
from .fields import GF, make_tower, parse_element, parse_field, primitive_root_of_unity
from .flags import FlagSignature, enumerate_flags, enumerate_subspaces, flag_count, gaussian_binomial
from .linalg import Matrix, Subspace, annihilator, intersect, subspace_sum


@dataclass(frozen=True)
class Check:
    id: str
    statement: str
    topic: str
    defaults: dict
    smoke: dict = None
    fn: object = None

    @property
    def module(self):
        return self.id.split(".", 1)[0]


REGISTRY = {}


def check(id, statement, topic, defaults, smoke=None):
    def wrap(fn):
        REGISTRY[id] = Check(id, statement, topic, defaults, smoke, fn)
        return fn
    return wrap


def run_check(id, params=None):
    chk = REGISTRY[id]
    args = dict(chk.defaults)
    args.update(params or {})
    return chk.fn(**args)


# -- instance builders -------------------------------------------------------------

def cocycle_instance(name, tower=(2, 1, 2), n=3):
    """Named twisted actions used by the bundle checks."""
    _, top, G = make_tower(*tower)
    I = Matrix.identity(top, n)
    if name == "trivial":
        return TwistedAction.trivial(G, n)
    if name == "diag-omega":
        w = primitive_root_of_unity(top, top.q - 1).code
        return TwistedAction.from_generator(G, Matrix.diag(top, [w] + [1] * (n - 1)))
    rows = [list(r) for r in I.rows]
    if name == "swap12":
        rows[0], rows[1] = rows[1], rows[0]
        return TwistedAction.from_generator(G, Matrix(top, rows))
    if name == "off-block":
        rows[0][1] = 1
        return TwistedAction.from_generator(G, Matrix(top, rows))
    raise KeyError(f"unknown cocycle instance {name!r}")


def _ctx(field, n, n1, dims):
    return BundleContext.standard(field, n, n1, tuple(dims))


# -- fields ------------------------------------------------------------------------------

@check("fields.tower-fixed-field", "{x : Frob(x) = x} is exactly the embedded base field",
       "Galois tower", {"towers": [[2, 1, 2], [2, 1, 3], [3, 1, 2], [2, 2, 2], [3, 1, 3]]},
       {"towers": [[2, 1, 2], [2, 1, 3]]})
def _tower_fixed_field(towers):
    rep = Report("tower-fixed-field")
    for t in towers:
        base, top, G = make_tower(*t)
        gen = G.frob_table(1)
        fixed = {x for x in top.elements() if gen[x] == x}
        embedded = {G.lift(c) for c in base.elements()}
        rep.bump("towers")
        if fixed != embedded:
            rep.fail("fixed-field", tower=t, fixed=sorted(fixed))
        # generator has order exactly k
        if G.order > 1 and any(all(G.frob_table(e)[x] == x for x in top.elements()) for e in range(1, G.order)):
            rep.fail("generator-order", tower=t)
    return rep


@check("fields.frobenius-homomorphism", "every Frobenius power is additive and multiplicative",
       "Galois tower", {"towers": [[2, 1, 2], [3, 1, 2], [2, 2, 2], [2, 1, 4]]}, {"towers": [[2, 1, 2]]})
def _frob_hom(towers):
    rep = Report("frobenius-homomorphism")
    for t in towers:
        _, top, G = make_tower(*t)
        for e in range(G.order):
            s = G.frob_table(e)
            for x in top.elements():
                for y in top.elements():
                    rep.bump("pairs")
                    if s[top.add(x, y)] != top.add(s[x], s[y]) or s[top.mul(x, y)] != top.mul(s[x], s[y]):
                        rep.fail("homomorphism", tower=t, e=e, x=x, y=y)
    return rep


@check("fields.primitive-roots", "primitive_root_of_unity(F, m) has order exactly m",
       "roots of unity", {"fields": [[2, 2], [3, 1], [5, 1], [2, 3], [7, 1], [3, 2]]}, {"fields": [[2, 2], [5, 1]]})
def _prim_roots(fields):
    rep = Report("primitive-roots")
    for p, k in fields:
        F = GF(p, k)
        for m in range(1, F.q):
            if (F.q - 1) % m:
                continue
            w = primitive_root_of_unity(F, m)
            powers = [F.pow(w.code, d) for d in range(1, m + 1)]
            rep.bump("roots")
            if powers[-1] != 1 or 1 in powers[:-1]:
                rep.fail("order", field=(p, k), m=m)
    return rep


# -- linear algebra --------------------------------------------------------------------------

@check("linalg.dimension-formula",
       "dim(U+W) + dim(U∩W) = dim U + dim W; dim U^⊥ = n - dim U; U^⊥⊥ = U",
       "subspace lattice", {"field": [2, 1], "n": 3}, {"field": [2, 1], "n": 3})
def _dimension_formula(field, n):
    F = GF(*field)
    rep = Report("dimension-formula")
    subs = [U for d in range(n + 1) for U in enumerate_subspaces(n, d, F)]
    for U in subs:
        A = annihilator(U)
        if A.dim != n - U.dim or annihilator(A) != U:
            rep.fail("annihilator", U=U)
        for W in subs:
            rep.bump("pairs")
            if subspace_sum(U, W).dim + intersect(U, W).dim != U.dim + W.dim:
                rep.fail("grassmann", U=U, W=W)
    return rep


# -- flags ------------------------------------------------------------------------------------

@check("flags.subspace-counts", "enumerate_subspaces yields gaussian_binomial(n, d, q) distinct subspaces",
       "Grassmannian enumeration", {"max_n": 5, "qs": [2, 3]}, {"max_n": 3, "qs": [2]})
def _subspace_counts(max_n, qs):
    rep = Report("subspace-counts")
    for q in qs:
        F = GF(q)
        for n in range(1, max_n + 1):
            for d in range(n + 1):
                subs = list(enumerate_subspaces(n, d, F))
                rep.bump("cases")
                if len(subs) != len(set(subs)) or len(subs) != gaussian_binomial(n, d, q):
                    rep.fail("count", q=q, n=n, d=d, got=len(subs))
    return rep


@check("flags.flag-counts", "|Fl(1<2, F_q^3)| by nested exhaustion: 21 for q=2, 52 for q=3",
       "flag enumeration", {"cases": [[2, 3, [1, 2], 21], [3, 3, [1, 2], 52]]},
       {"cases": [[2, 3, [1, 2], 21]]})
def _flag_counts(cases):
    rep = Report("flag-counts")
    for q, n, dims, expected in cases:
        F = GF(q)
        sig = FlagSignature(n, tuple(dims))
        flags = list(enumerate_flags(sig, F))
        # oracle: count nested chains from independent subspace lists
        layers = [list(enumerate_subspaces(n, d, F)) for d in dims]
        chains = [[Z] for Z in layers[0]]
        for layer in layers[1:]:
            chains = [c + [W] for c in chains for W in layer if c[-1] <= W]
        rep.counts[f"q={q}"] = len(flags)
        if not len(flags) == len(set(flags)) == len(chains) == flag_count(sig, q) == expected:
            rep.fail("count", q=q, got=len(flags), oracle=len(chains), expected=expected)
    return rep


# -- automorphism groups --------------------------------------------------------------------

def _all_signatures(n):
    for r in range(1, n):
        for dims in combinations(range(1, n), r):
            yield FlagSignature(n, dims)


@check("autgroup.admissibility",
       "admissible unless n >= 3 and the signature is self-dual (then Aut = PGL ⋊ Z/2)",
       "automorphism group of flag varieties", {"max_n": 8}, {"max_n": 5})
def _admissibility(max_n):
    rep = Report("admissibility")
    for n in range(1, max_n + 1):
        for sig in _all_signatures(n):
            rep.bump("signatures")
            dual = {n - d for d in sig.dims}
            expected = not (n >= 3 and dual == set(sig.dims))
            if is_admissible(sig) != expected:
                rep.fail("classifier", sig=str(sig))
    spots = [((3, (1, 2)), False), ((4, (2,)), False), ((3, (1,)), True)]
    for (n, dims), want in spots:
        if is_admissible(FlagSignature(n, dims)) != want:
            rep.fail("spot", sig=(n, dims))
    return rep


def _tau_setup(field, n, dims):
    F = GF(*field)
    sig = FlagSignature(n, tuple(dims))
    return F, sig, list(enumerate_flags(sig, F))


@check("autgroup.tau-involution", "τ = j∘* satisfies τ² = id on every flag", "dual involution",
       {"field": [2, 1], "n": 3, "dims": [1, 2]})
def _tau_involution(field, n, dims):
    _, _, flags = _tau_setup(field, n, dims)
    rep = Report("tau-involution")
    for f in flags:
        rep.bump("flags")
        if tau(tau(f)) != f:
            rep.fail("involution", flag=f)
    if len({tau(f) for f in flags}) != len(flags):
        rep.fail("bijection")
    return rep


@check("autgroup.tau-not-pgl", "the permutation of τ is induced by no element of PGL_n(F_q)",
       "dual involution", {"field": [2, 1], "n": 3, "dims": [1, 2]})
def _tau_not_pgl(field, n, dims):
    F, sig, flags = _tau_setup(field, n, dims)
    rep = Report("tau-not-pgl")
    perm = flag_permutation(tau, sig, F)
    for g in enumerate_pgl(n, F):
        rep.bump("pgl")
        if flag_permutation(g.apply_flag, sig, F) == perm:
            rep.fail("induced", g=g)
    if is_pgl_induced(tau, sig, F) is not None:
        rep.fail("witness-search")
    return rep


@check("autgroup.tau-normalizes", "τ g τ^{-1} is PGL-induced for every g in PGL_n(F_q)",
       "dual involution", {"field": [2, 1], "n": 3, "dims": [1, 2]})
def _tau_normalizes(field, n, dims):
    F, sig, _ = _tau_setup(field, n, dims)
    rep = Report("tau-normalizes")
    for g in enumerate_pgl(n, F):
        rep.bump("pgl")
        conj = lambda f, g=g: tau(g.apply_flag(tau(f)))
        h = is_pgl_induced(conj, sig, F)
        if h is None:
            rep.fail("not-normalized", g=g)
    return rep


@check("autgroup.trivial-descent-counts",
       "trivial twisted action over F_{q^2}/F_q fixes exactly |Fl(F_q)| flags",
       "Galois descent", {"cases": [[2, 3, [1, 2]], [3, 3, [1, 2]]]}, {"cases": [[2, 3, [1, 2]]]})
def _trivial_descent(cases):
    rep = Report("trivial-descent-counts")
    for p, n, dims in cases:
        _, _, G = make_tower(p, 1, 2)
        sig = FlagSignature(n, tuple(dims))
        T = TwistedAction.trivial(G, n, signature=sig)
        fixed = fixed_flags(T, sig)
        rep.counts[f"q={p}"] = len(fixed)
        if len(fixed) != flag_count(sig, p):
            rep.fail("count", q=p, got=len(fixed), expected=flag_count(sig, p))
    return rep


# -- vector bundles ---------------------------------------------------------------------------

ROUND_TRIP_SHAPES = [[3, 2, [1]], [3, 1, [2]], [4, 2, [1, 3]]]


@check("bundles.round-trip",
       "param∘coord = id on U1, U2, U; coord∘param = id on base x fiber; |U| = |base|·q^rank",
       "vector bundle charts", {"qs": [2, 3], "shapes": ROUND_TRIP_SHAPES},
       {"qs": [2], "shapes": ROUND_TRIP_SHAPES})
def _round_trip(qs, shapes):
    rep = Report("round-trip")
    for q in qs:
        F = GF(q)
        for n, n1, dims in shapes:
            ctx = _ctx(F, n, n1, dims)
            tag = f"q={q},n={n},n1={n1},d={dims}"
            _round_trip_instance(rep, ctx, tag)
    return rep


def _round_trip_instance(rep, ctx, tag):
    F = ctx.field
    q = F.q
    full = list(enumerate_flags(ctx.split.full, F))
    # φ1 and φ2 charts on their own loci
    if ctx.p:
        lows = [f for f in enumerate_flags(ctx.lower_sig(), F) if in_U1(f, ctx)]
        n_base = flag_count(ctx.split.lower_signature(), q)
        if len(lows) != n_base * q ** (ctx.d_p * ctx.n2):
            rep.fail("card-U1", inst=tag, got=len(lows))
        for f in lows:
            c = coord_phi1(f, ctx)
            if param_phi1(c.S, c.f, ctx) != f:
                rep.fail("phi1-param-coord", inst=tag, flag=f)
    if ctx.q:
        ups = [f for f in enumerate_flags(ctx.upper_sig(), F) if in_U2(f, ctx)]
        n_base = flag_count(ctx.split.upper_signature(), q)
        if len(ups) != n_base * q ** (ctx.n1 * (ctx.n2 - ctx.t1)):
            rep.fail("card-U2", inst=tag, got=len(ups))
        for f in ups:
            c = coord_phi2(f, ctx)
            if param_phi2(c.T, c.g, ctx) != f:
                rep.fail("phi2-param-coord", inst=tag, flag=f)
    U = [f for f in full if in_U(f, ctx)]
    for f in U:
        pt = coord_psi(f, ctx)
        if param_psi(pt.S, pt.T, pt.f, pt.g, ctx) != f:
            rep.fail("psi-param-coord", inst=tag, flag=f)
    bases = base_points(ctx)
    seen = 0
    for S, T in bases:
        for f, g in fiber_points(S, T, ctx):
            seen += 1
            flag = param_psi(S, T, f, g, ctx)
            pt = coord_psi(flag, ctx)
            if (pt.S, pt.T, pt.f, pt.g) != (S, T, f, g):
                rep.fail("psi-coord-param", inst=tag, base=(S, T))
        z = zero_section(S, T, ctx)
        zc = coord_psi(z, ctx)
        if (zc.f, zc.g) != zero_coords(ctx, S, T) or psi(z, ctx) != (S, T):
            rep.fail("zero-section", inst=tag, base=(S, T))
    expected = len(bases) * q ** ctx.fiber_rank()
    rep.counts[tag] = {"U": len(U), "base": len(bases), "rank": ctx.fiber_rank(), "fiber_points": seen}
    if not len(U) == seen == expected:
        rep.fail("card-U", inst=tag, U=len(U), fiber_points=seen, expected=expected)


@check("bundles.kernel-equivalence", "Z_p ≤ W_1 iff F(f, g) = 0, so E = Ker F",
       "vector bundle charts", {"q": 2, "n": 4, "n1": 2, "dims": [1, 3]})
def _kernel_equivalence(q, n, n1, dims):
    F = GF(q)
    ctx = _ctx(F, n, n1, dims)
    rep = Report("kernel-equivalence")
    nf, ng = ctx.d_p * ctx.n2, ctx.n1 * (ctx.n2 - ctx.t1)
    for S, T in base_points(ctx):
        rep.bump("bases")
        for x in product(range(q), repeat=nf + ng):
            f, g = unflatten(ctx, x)
            rep.bump("pairs")
            Z = param_phi1(S, f, ctx).top
            W1 = param_phi2(T, g, ctx).chain[0]
            zero = not any(any(r) for r in F_map(S, T, f, g, ctx).rows)
            if (Z <= W1) != zero:
                rep.fail("equivalence", base=(S, T), f=f, g=g, contained=Z <= W1)
    return rep


CRIT6_INSTANCES = [["trivial", 1], ["trivial", 2], ["diag-omega", 1], ["diag-omega", 2], ["swap12", 2]]


def _bundle_instances(instances, tower, n, dims):
    for name, n1 in instances:
        T = cocycle_instance(name, tuple(tower), n)
        ctx = _ctx(T.field, n, n1, dims)
        yield f"{name},n1={n1}", T, ctx


@check("bundles.equivariance",
       "the cocycle validates, T(σ)U = U and φ1, φ2, ψ intertwine T(σ) with the block actions Q(σ)",
       "Galois equivariance", {"tower": [2, 1, 2], "n": 3, "dims": [1, 2], "instances": CRIT6_INSTANCES},
       {"tower": [2, 1, 2], "n": 3, "dims": [1, 2], "instances": [["diag-omega", 1]]})
def _equivariance(tower, n, dims, instances):
    rep = Report("equivariance")
    for tag, T, ctx in _bundle_instances(instances, tower, n, dims):
        if not validate_cocycle(T, ctx.split.full):
            rep.fail("cocycle", inst=tag)
            continue
        r = equivariance_check(T, ctx)
        rep.counts[tag] = r.counts
        for v in r.violations:
            rep.fail(v["check"], inst=tag)
    return rep


@check("bundles.fiber-action",
       "the fiber transport (c2 B2(σ)) f (c1 B1(σ))^{-1} matches T(σ), is additive and σ-semilinear",
       "semilinear fiber action", {"tower": [2, 1, 2], "n": 3, "dims": [1, 2], "instances": CRIT6_INSTANCES},
       {"tower": [2, 1, 2], "n": 3, "dims": [1, 2], "instances": [["diag-omega", 1]]})
def _fiber_action(tower, n, dims, instances):
    rep = Report("fiber-action")
    for tag, T, ctx in _bundle_instances(instances, tower, n, dims):
        r = fiber_action_check(T, ctx)
        rep.counts[tag] = r.counts
        for v in r.violations:
            rep.fail(v["check"], inst=tag)
    return rep


@check("bundles.negative-control", "a lift with an off-block entry is rejected and breaks equivariance",
       "Galois equivariance", {"tower": [2, 1, 2], "n": 3, "n1": 1, "dims": [1, 2]})
def _negative_control(tower, n, n1, dims):
    rep = Report("negative-control")
    T = cocycle_instance("off-block", tuple(tower), n)
    ctx = _ctx(T.field, n, n1, dims)
    if not validate_cocycle(T, ctx.split.full):
        rep.fail("control-is-not-a-cocycle")
    try:
        equivariance_check(T, ctx)
        rep.fail("strict-accepted")
    except NonBlockLiftError:
        rep.bump("strict-rejected")
    loose = equivariance_check(T, ctx, strict=False)
    rep.counts["loose-violations"] = len(loose.violations)
    if loose.ok:
        rep.fail("identities-survived")
    return rep


SPLIT_INSTANCES = ["F8", "F64/F8-swap", "F53^2-pair-swap"]


def split_instance(name):
    """(g, T, expected V1) for the named splitting instance."""
    if name == "F8":
        _, top, G = make_tower(2, 3, 1)
        lam = primitive_root_of_unity(top, 7).code
        T = TwistedAction.trivial(G, 3)
        return Matrix.diag(top, [1, 1, lam]), T, ((1, 0, 0), (0, 1, 0))
    if name == "F64/F8-swap":
        base, top, G = make_tower(2, 3, 2)
        lam = G.lift(primitive_root_of_unity(base, 7).code)
        c = Matrix(top, ((0, 1, 0), (1, 0, 0), (0, 0, 1)))
        return Matrix.diag(top, [1, 1, lam]), TwistedAction.from_generator(G, c), ((1, 0, 0), (0, 1, 0))
    if name == "F53^2-pair-swap":
        base, top, G = make_tower(53, 1, 2)
        mu = G.lift(primitive_root_of_unity(base, 52).code)
        m1 = top.neg(1)
        h = Matrix.diag(top, [1, m1, mu, top.neg(mu)])
        c = Matrix(top, ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0)))
        return h, TwistedAction.from_generator(G, c), ((1, 0, 0, 0), (0, 1, 0, 0))
    raise KeyError(f"unknown splitting instance {name!r}")


@check("bundles.splitting",
       "h c_σ = ν_σ c_σ h; V1 = first eigenspace of h^{n!}; every c_σ is block-diagonal; ord ν_σ ≤ n",
       "eigenspace splitting", {"instances": SPLIT_INSTANCES}, {"instances": ["F8"]})
def _splitting(instances):
    rep = Report("splitting")
    for name in instances:
        g, T, V1 = split_instance(name)
        F = T.field
        r = split_from_automorphism(g, T)
        n = g.nrows
        D = r.decomposition
        rep.counts[name] = {"n1": D.n1, "nu_orders": {str(e): o for e, o in r.nu_orders.items()},
                            "condition": r.condition}
        if D.V1 != Subspace(F, n, V1):
            rep.fail("V1", inst=name, got=D.V1)
        for e in range(T.group.order):
            nu = r.nu[e]
            if not r.block_diagonal[e]:
                rep.fail("block-diagonal", inst=name, sigma=e)
            if F.pow(nu, factorial(n)) != 1 or F.order(nu) > n:
                rep.fail("nu-order", inst=name, sigma=e, nu=nu)
            # the re-expressed lifts describe the same action
            if r.action.semilinear(e).matrix != T.semilinear(e).matrix:
                rep.fail("same-action", inst=name, sigma=e)
            lhs = r.h @ T.semilinear(e).matrix
            rhs = T.semilinear(e).matrix.scale(nu) @ r.h.map_entries(T.group.frob_table(e))
            if lhs != rhs:
                rep.fail("commutation", inst=name, sigma=e)
    # a scalar h cannot split anything
    _, top, G = make_tower(2, 3, 1)
    try:
        split_from_automorphism(Matrix.identity(top, 3).scale(top.generator), TwistedAction.trivial(G, 3))
        rep.fail("scalar-accepted")
    except SplittingError as exc:
        rep.counts["scalar-error"] = str(exc)
    return rep


@check("bundles.descent-count",
       "|T-fixed flags in U| = Σ over Q-fixed base points of q^rank",
       "Galois descent", {"tower": [2, 1, 2], "n": 3, "dims": [1, 2], "instances": CRIT6_INSTANCES,
                          "case3": True},
       {"tower": [2, 1, 2], "n": 3, "dims": [1, 2], "instances": [["diag-omega", 1]], "case3": False})
def _descent(tower, n, dims, instances, case3):
    rep = Report("descent-count")
    runs = list(_bundle_instances(instances, tower, n, dims))
    if case3:
        T = cocycle_instance("trivial", tuple(tower), 4)
        runs.append(("trivial,n=4,n1=2,d=(1),e=(3)", T, _ctx(T.field, 4, 2, (1, 3))))
    for tag, T, ctx in runs:
        r = descent_count_check(T, ctx)
        rep.counts[tag] = r.counts
        for v in r.violations:
            rep.fail(v["check"], inst=tag)
    return rep


# -- Brauer ------------------------------------------------------------------------------------

CYCLIC_INSTANCES = [["5^1", 2, "1", "1"], ["2^2", 3, "0,1", "0,1"], ["Q", 2, "-1", "-1"]]


def cyclic_instance(field, m, a, b):
    if field == "Q":
        return br.make_cyclic(br.QQ, m, int(a), int(b))
    K = parse_field(field)
    return br.make_cyclic(K, m, parse_element(K, a), parse_element(K, b))


@check("brauer.cyclic-algebras",
       "x1^m = a, x2^m = b, x1 x2 = ω x2 x1; associative on all basis triples; center is 1-dimensional",
       "cyclic algebras", {"instances": CYCLIC_INSTANCES}, {"instances": CYCLIC_INSTANCES[:1]})
def _cyclic(instances):
    rep = Report("cyclic-algebras")
    for inst in instances:
        A = cyclic_instance(*inst)
        x1, x2 = A.x1, A.x2
        tag = "/".join(map(str, inst))
        rep.counts[tag] = {"dim": A.dim, "center": len(A.center_basis())}
        if x1 ** A.m != A.one * A.a or x2 ** A.m != A.one * A.b or x1 * x2 != (x2 * x1) * A.omega:
            rep.fail("relations", inst=tag)
        if not A.is_associative() or len(A.center_basis()) != 1:
            rep.fail("structure", inst=tag)
    H = cyclic_instance("Q", 2, "-1", "-1")
    i, j = H.x1, H.x2
    if not (i * i == -1 and j * j == -1 and i * j == -(j * i)):
        rep.fail("hamilton")
    return rep


@check("brauer.zero-divisors",
       "finite-field cyclic algebras (m = 2, 3; q ≤ 5) and A ⊗ A^op have zero divisors",
       "splitting over finite fields", {"qs": [2, 3, 4, 5], "ms": [2, 3], "tensor": True},
       {"qs": [5], "ms": [2], "tensor": False})
def _zero_divisors(qs, ms, tensor):
    rep = Report("zero-divisors")
    fields = {2: GF(2), 3: GF(3), 4: GF(2, 2), 5: GF(5)}
    for q in qs:
        K = fields[q]
        for m in ms:
            if (K.q - 1) % m:
                continue
            for a in K.nonzero():
                for b in K.nonzero():
                    A = br.make_cyclic(K, m, a, b)
                    res = br.zero_divisor_search(A)
                    rep.bump("algebras")
                    if not res.found:
                        rep.fail("no-zero-divisor", q=q, m=m, a=a, b=b, status=res.status)
                        continue
                    u, v = res.pair
                    if not u or not v or (u * v):
                        rep.fail("bad-pair", q=q, m=m, a=a, b=b)
    A = br.make_cyclic(GF(5), 2, 1, 1)
    x1 = A.x1
    if (x1 - 1) * (x1 + 1):
        rep.fail("x1-pair")
    H = cyclic_instance("Q", 2, "-1", "-1")
    if br.zero_divisor_search(H).status != "not-exhaustible":
        rep.fail("rational-search")
    if tensor:
        AA = br.tensor_table(A, br.opposite(A))
        res = br.zero_divisor_search(AA)
        rep.counts["tensor-dim"] = AA.dim
        if not res.found or not AA.is_associative():
            rep.fail("tensor", status=res.status)
    return rep


@check("brauer.norms", "the norm of F_{q^m}/F_q hits every nonzero base element",
       "norm criterion", {"towers": [[2, 1, 2], [3, 1, 2], [2, 1, 3], [5, 1, 2], [2, 2, 2]]},
       {"towers": [[2, 1, 2]]})
def _norms(towers):
    rep = Report("norms")
    for t in towers:
        base, top, G = make_tower(*t)
        for b in base.nonzero():
            res = br.is_norm_finite(G, b)
            rep.bump("targets")
            if not res.is_norm or not res.always_norm or br.norm(G, res.witness) != G.lift(b):
                rep.fail("norm", tower=t, b=b)
    return rep


@check("brauer.quaternion",
       "(a, b)_Q splits iff every local symbol is +1; product formula; (-1, -1) ramifies at ∞ and 2",
       "Hilbert symbols", {"bound": 50}, {"bound": 12})
def _quaternion(bound):
    rep = Report("quaternion")
    v = br.quaternion_splits_Q(-1, -1)
    if v.splits or v.local.get("inf") != -1 or v.local.get(2) != -1:
        rep.fail("hamilton", local=v.local)
    for a in range(-bound, bound + 1):
        if not a:
            continue
        if not br.quaternion_splits_Q(1, a).splits or not br.quaternion_splits_Q(a, -a).splits:
            rep.fail("trivial-split", a=a)
        for b in range(-bound, bound + 1):
            if not b:
                continue
            rep.bump("pairs")
            v = br.quaternion_splits_Q(a, b)  # raises if the product formula fails
            if v.product != 1:
                rep.fail("product", a=a, b=b)
    return rep


@check("brauer.bs2-chain",
       "non-trivial and ruled forces ind(X^⊗m) = 2 dividing ind(X) = 3: contradiction",
       "index arithmetic", {})
def _bs2_chain():
    rep = Report("bs2-chain")
    for t, c, ct in ((t, c, ct) for t in (False, True) for c in (False, True) for ct in (False, True)):
        v = br.index_chain_bs_surface(t, c, ct)
        rep.bump("branches")
        contradiction = v.contradiction is not None
        if contradiction != ((not t) and c):
            rep.fail("branch", inputs=(t, c, ct), branch=v.branch)
    v = br.index_chain_bs_surface(False, True, False)
    values = {f.subject: f.value for f in v.facts}
    if values.get("X") != 3 or values.get("Q") != 2 or v.contradiction != "2 does not divide 3":
        rep.fail("index-facts", facts=values)
    if not br.index_chain_bs_surface(True, False, False).ruled:
        rep.fail("trivial-ruled")
    return rep


# -- suites ----------------------------------------------------------------------------------

def suite(name):
    """Plan descriptors for a named suite."""
    if name == "paper":
        return [{"id": c.id, "params": dict(c.defaults)} for c in REGISTRY.values()]
    if name == "smoke":
        return [{"id": c.id, "params": dict(c.smoke if c.smoke is not None else c.defaults)}
                for c in REGISTRY.values()]
    raise KeyError(f"unknown suite {name!r}; choose paper or smoke")
