"""Command line: ``flagdescent verify|explain|enumerate|brauer|bundles|autgroup``.

Exit codes: 0 all pass, 1 any failure or error, 2 plan/config error,
3 budget skips without failures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import __version__
from . import budget as budget_mod
from .budget import BudgetExceeded

SCHEMA = "flagdescent.report/1"

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_SKIP = 0, 1, 2, 3


class PlanError(ValueError):
    pass


@dataclass
class VerificationPlan:
    checks: list
    budget: int = None
    jobs: int = 1
    output: str = None
    source: str = "inline"

    def echo(self):
        return {"checks": self.checks, "budget": self.budget, "jobs": self.jobs, "source": self.source}


def _registry():
    from .checks import REGISTRY
    return REGISTRY


def validate_plan(plan):
    reg = _registry()
    if plan.budget is not None and (not isinstance(plan.budget, int) or plan.budget <= 0):
        raise PlanError("budget: must be a positive integer")
    if not isinstance(plan.jobs, int) or plan.jobs < 1:
        raise PlanError("jobs: must be a positive integer")
    for i, d in enumerate(plan.checks):
        if not isinstance(d, dict) or "id" not in d:
            raise PlanError(f"checks[{i}]: expected an object with an 'id' field")
        if d["id"] not in reg:
            raise PlanError(f"checks[{i}].id: unknown check {d['id']!r}")
        params = d.get("params", {})
        if not isinstance(params, dict):
            raise PlanError(f"checks[{i}].params: expected an object")
        extra = set(params) - set(reg[d["id"]].defaults)
        if extra:
            raise PlanError(f"checks[{i}].params: unknown parameter(s) {sorted(extra)}")
    return plan


def load_plan(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise PlanError(f"{path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlanError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise PlanError(f"{path}: top level must be an object")
    unknown = set(data) - {"checks", "suite", "budget", "jobs", "output"}
    if unknown:
        raise PlanError(f"{path}: unknown field(s) {sorted(unknown)}")
    checks = list(data.get("checks", []))
    if "suite" in data:
        checks = _suite(data["suite"]) + checks
    plan = VerificationPlan(checks, data.get("budget"), data.get("jobs", 1), data.get("output"), path)
    return validate_plan(plan)


def _suite(name):
    from .checks import suite
    try:
        return suite(name)
    except KeyError as exc:
        raise PlanError(str(exc.args[0])) from exc


# -- running -----------------------------------------------------------------------------

def _init_worker(budget):
    if budget is not None:
        budget_mod.set_default_budget(budget)


def _execute(desc):
    from .checks import REGISTRY
    chk = REGISTRY[desc["id"]]
    params = dict(chk.defaults)
    params.update(desc.get("params", {}))
    t0 = time.perf_counter()
    entry = {"id": chk.id, "module": chk.module, "params": params}
    try:
        rep = chk.fn(**params)
        entry.update(status="pass" if rep.ok else "fail", counts=rep.counts, witnesses=rep.violations)
    except BudgetExceeded as exc:
        entry.update(status="skipped-budget", counts={}, witnesses=[str(exc)])
    except Exception as exc:  # a crashing check is reported, not fatal to the run
        entry.update(status="error", counts={}, witnesses=[f"{type(exc).__name__}: {exc}"])
    entry["seconds"] = round(time.perf_counter() - t0, 4)
    return entry


def run(plan):
    """Execute every check of the plan; returns the report dict."""
    validate_plan(plan)
    if plan.jobs > 1 and len(plan.checks) > 1:
        with ProcessPoolExecutor(plan.jobs, initializer=_init_worker, initargs=(plan.budget,)) as pool:
            results = list(pool.map(_execute, plan.checks))
    else:
        old = budget_mod.current_budget()
        _init_worker(plan.budget)
        try:
            results = [_execute(d) for d in plan.checks]
        finally:
            budget_mod.set_default_budget(old)
    statuses = [r["status"] for r in results]
    summary = {s: statuses.count(s) for s in ("pass", "fail", "error", "skipped-budget")}
    return {
        "schema": SCHEMA,
        "version": __version__,
        "plan": plan.echo(),
        "results": results,
        "summary": summary,
        "exit_code": exit_code(statuses),
    }


def exit_code(statuses):
    if any(s in ("fail", "error") for s in statuses):
        return EXIT_FAIL
    if any(s == "skipped-budget" for s in statuses):
        return EXIT_SKIP
    return EXIT_PASS


def mask_timing(report):
    """Copy of a report with wall-clock fields removed (for determinism checks)."""
    out = json.loads(json.dumps(report))
    for r in out["results"]:
        r.pop("seconds", None)
    return out


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=True, default=str)


def summary_lines(report):
    lines = []
    for r in report["results"]:
        lines.append(f"{r['status'].upper():15s} {r['id']:35s} {r['seconds']:8.2f}s")
    s = report["summary"]
    lines.append(f"{s['pass']} passed, {s['fail']} failed, {s['error']} errors, "
                 f"{s['skipped-budget']} skipped (budget)")
    return lines


def explain(check_id):
    reg = _registry()
    if check_id not in reg:
        raise KeyError(f"unknown check {check_id!r}; valid ids: {', '.join(sorted(reg))}")
    c = reg[check_id]
    lines = [
        f"{c.id}  [{c.topic}]",
        f"  checks: {c.statement}",
        f"  instance: {json.dumps(c.defaults, sort_keys=True)}",
    ]
    if c.smoke is not None and c.smoke != c.defaults:
        lines.append(f"  smoke instance: {json.dumps(c.smoke, sort_keys=True)}")
    return "\n".join(lines)


# -- argument handling ----------------------------------------------------------------------

def _env(name, default=None):
    return os.environ.get(f"FLAGDESCENT_{name}", default)


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "y"):
        return True
    if t in ("0", "false", "no", "n"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def _ints(text):
    return tuple(int(x) for x in text.replace("|", ",").split(",") if x.strip())


def build_parser():
    p = argparse.ArgumentParser(prog="flagdescent", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"flagdescent {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    v = sub.add_parser("verify", help="run a verification plan or suite")
    v.add_argument("--plan", help="plan file (JSON)")
    v.add_argument("--suite", choices=["paper", "smoke"], help="built-in suite")
    v.add_argument("--only", nargs="+", metavar="ID", help="restrict to these check ids")
    v.add_argument("--json", dest="json_out", help="write the JSON report here")
    v.add_argument("--budget", type=int, help="enumeration budget")
    v.add_argument("--jobs", type=int, help="worker processes")
    v.add_argument("--quiet", action="store_true")

    e = sub.add_parser("explain", help="describe a check")
    e.add_argument("check_id", nargs="?")
    e.add_argument("--list", action="store_true", help="list check ids")

    en = sub.add_parser("enumerate", help="enumerate subspaces or flags")
    en.add_argument("what", choices=["subspaces", "flags"])
    en.add_argument("--field", default="2", help="p or p^k")
    en.add_argument("--n", type=int, required=True)
    en.add_argument("--d", type=int, help="subspace dimension")
    en.add_argument("--sig", help="flag dimensions, e.g. 1,2")
    en.add_argument("--count", action="store_true", help="only print the number")
    en.add_argument("--budget", type=int)

    b = sub.add_parser("brauer", help="cyclic algebras, quaternion splitting, index chain")
    bsub = b.add_subparsers(dest="action", required=True)
    bq = bsub.add_parser("quaternion")
    bq.add_argument("--a", type=int, required=True)
    bq.add_argument("--b", type=int, required=True)
    bc = bsub.add_parser("cyclic")
    bc.add_argument("--field", required=True, help="p^k or Q")
    bc.add_argument("--m", type=int, required=True)
    bc.add_argument("--a", required=True, help="element as coefficient list, e.g. 0,1")
    bc.add_argument("--b", required=True)
    bc.add_argument("--search-zero-divisor", action="store_true")
    bc.add_argument("--budget", type=int)
    bb = bsub.add_parser("bs2-chain")
    bb.add_argument("--trivial", type=_bool, required=True)
    bb.add_argument("--curve", choices=["none", "trivial", "nontrivial"], default="none")

    bu = sub.add_parser("bundles", help="bundle checks for one instance")
    busub = bu.add_subparsers(dest="action", required=True)
    bv = busub.add_parser("verify")
    bv.add_argument("--tower", required=True, help="p,b,k")
    bv.add_argument("--n", type=int, required=True)
    bv.add_argument("--n1", type=int, required=True)
    bv.add_argument("--sig", required=True, help="dimensions, e.g. 1|2 or 1,3")
    bv.add_argument("--cocycle", help="twisted action JSON (default: trivial)")
    bv.add_argument("--report", help="write the JSON report here")
    bv.add_argument("--budget", type=int)

    a = sub.add_parser("autgroup", help="automorphism group tools")
    asub = a.add_subparsers(dest="action", required=True)
    af = asub.add_parser("fixed")
    af.add_argument("--cocycle", required=True)
    af.add_argument("--tower", help="p,b,k; must match the cocycle file")
    af.add_argument("--sig", help="dimensions (default: the cocycle's signature)")
    af.add_argument("--list", action="store_true", help="print the fixed flags")
    af.add_argument("--budget", type=int)
    aa = asub.add_parser("admissible")
    aa.add_argument("--n", type=int, required=True)
    aa.add_argument("--sig", required=True)
    return p


def _print_json(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True, default=str)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_verify(args):
    budget = args.budget if args.budget is not None else _env("BUDGET")
    jobs = args.jobs if args.jobs is not None else _env("JOBS", 1)
    suite_name = args.suite or _env("SUITE")
    out = args.json_out or _env("JSON")
    try:
        budget = int(budget) if budget is not None else None
        jobs = int(jobs)
    except ValueError as exc:
        raise PlanError(f"budget/jobs must be integers: {exc}") from exc
    if args.plan:
        plan = load_plan(args.plan)
        if suite_name:
            plan.checks = _suite(suite_name) + plan.checks
        plan.budget = budget if budget is not None else plan.budget
        plan.jobs = jobs if args.jobs is not None or _env("JOBS") else plan.jobs
        out = out or plan.output
    else:
        plan = VerificationPlan(_suite(suite_name) if suite_name else [], budget, jobs,
                                source=f"suite:{suite_name}" if suite_name else "empty")
    if args.only:
        reg = _registry()
        bad = [i for i in args.only if i not in reg]
        if bad:
            raise PlanError(f"--only: unknown check(s) {bad}")
        plan.checks = [d for d in plan.checks if d["id"] in args.only]
    validate_plan(plan)
    report = run(plan)
    if out:
        with open(out, "w") as fh:
            fh.write(dumps(report) + "\n")
    if not args.quiet:
        print("\n".join(summary_lines(report)))
    return report["exit_code"]


def _cmd_enumerate(args):
    from .fields import parse_field
    from .flags import FlagSignature, enumerate_flags, enumerate_subspaces, format_flag
    from .linalg import format_subspace
    F = parse_field(args.field)
    if args.what == "subspaces":
        if args.d is None:
            raise PlanError("enumerate subspaces needs --d")
        items = (format_subspace(U) for U in enumerate_subspaces(args.n, args.d, F, budget=args.budget))
    else:
        if not args.sig:
            raise PlanError("enumerate flags needs --sig")
        sig = FlagSignature(args.n, _ints(args.sig))
        items = (format_flag(f) for f in enumerate_flags(sig, F, budget=args.budget))
    if args.count:
        print(sum(1 for _ in items))
    else:
        for line in items:
            print(line)
    return EXIT_PASS


def _cmd_brauer(args):
    from . import brauer as br
    if args.action == "quaternion":
        v = br.quaternion_splits_Q(args.a, args.b)
        _print_json({"a": args.a, "b": args.b, "squarefree": [v.a, v.b], "splits": v.splits,
                     "local": {str(k): s for k, s in v.local.items()}, "product": v.product,
                     "rule": "hilbert-symbols"})
        return EXIT_PASS
    if args.action == "cyclic":
        from .checks import cyclic_instance
        A = cyclic_instance(args.field, args.m, args.a, args.b)
        out = {"field": args.field, "m": args.m, "a": str(A.a), "b": str(A.b), "omega": str(A.omega),
               "dim": A.dim, "associative": True, "center_dim": len(A.center_basis())}
        if args.search_zero_divisor:
            res = br.zero_divisor_search(A, args.budget)
            out["zero_divisor"] = {"status": res.status, "tried": res.tried, "note": res.note,
                                   "pair": [list(map(str, x.coeffs)) for x in res.pair] if res.pair else None}
        _print_json(out)
        return EXIT_PASS
    curve_exists = args.curve != "none"
    v = br.index_chain_bs_surface(args.trivial, curve_exists, args.curve == "trivial")
    _print_json(v.to_json())
    return EXIT_PASS


def _cmd_bundles(args):
    from .autgroup import TwistedAction, load_cocycle, validate_cocycle
    from .bundles import BundleContext, descent_count_check, equivariance_check, fiber_action_check
    from .fields import make_tower
    from .linalg import Decomposition
    from .flags import FlagSignature, SplitSignature
    tower = _ints(args.tower)
    if len(tower) != 3:
        raise PlanError("--tower must be p,b,k")
    if args.cocycle:
        T = load_cocycle(args.cocycle)
        if (T.group.top.p, T.group.base.k, T.group.order) != tower:
            raise PlanError("--tower disagrees with the cocycle file")
    else:
        _, _, G = make_tower(*tower)
        T = TwistedAction.trivial(G, args.n)
    if T.n != args.n:
        raise PlanError("--n disagrees with the cocycle file")
    ctx = BundleContext(Decomposition(T.basis, args.n1), SplitSignature(FlagSignature(args.n, _ints(args.sig)), args.n1))
    old = budget_mod.current_budget()
    _init_worker(args.budget)
    try:
        reports = []
        cyc = validate_cocycle(T, ctx.split.full)
        reports.append({"name": "cocycle", "ok": cyc.ok,
                        "counts": {}, "violations": [] if cyc.ok else [repr(cyc.witness)]})
        for fn in (equivariance_check, fiber_action_check, descent_count_check):
            reports.append(fn(T, ctx).to_json())
    finally:
        budget_mod.set_default_budget(old)
    ok = all(r["ok"] for r in reports)
    out = {"schema": SCHEMA, "version": __version__, "tower": list(tower), "n": args.n, "n1": args.n1,
           "signature": list(_ints(args.sig)), "case": ctx.split.case, "rank": ctx.fiber_rank(),
           "checks": reports, "ok": ok}
    if args.report:
        _print_json(out, args.report)
    for r in reports:
        print(f"{'PASS' if r['ok'] else 'FAIL':5s} {r['name']:16s} {json.dumps(r['counts'], sort_keys=True)}")
    return EXIT_PASS if ok else EXIT_FAIL


def _cmd_autgroup(args):
    from .autgroup import fixed_flags, is_admissible, load_cocycle
    from .flags import FlagSignature, format_flag
    if args.action == "admissible":
        sig = FlagSignature(args.n, _ints(args.sig))
        print(json.dumps({"signature": str(sig), "admissible": is_admissible(sig)}))
        return EXIT_PASS
    T = load_cocycle(args.cocycle)
    if args.tower and _ints(args.tower) != (T.group.top.p, T.group.base.k, T.group.order):
        raise PlanError("--tower disagrees with the cocycle file")
    sig = FlagSignature(T.n, _ints(args.sig)) if args.sig else T.probe_signature()
    fixed = fixed_flags(T, sig, budget=args.budget)
    print(f"{len(fixed)} fixed flags of signature {sig}")
    if args.list:
        for f in fixed:
            print(format_flag(f))
    return EXIT_PASS


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verb == "verify":
            return _cmd_verify(args)
        if args.verb == "explain":
            if args.list or not args.check_id:
                print("\n".join(sorted(_registry())))
                return EXIT_PASS
            print(explain(args.check_id))
            return EXIT_PASS
        if args.verb == "enumerate":
            return _cmd_enumerate(args)
        if args.verb == "brauer":
            return _cmd_brauer(args)
        if args.verb == "bundles":
            return _cmd_bundles(args)
        return _cmd_autgroup(args)
    except BudgetExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_SKIP
    except (PlanError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
