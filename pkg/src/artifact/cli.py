"""Command-line front door.

Every command builds a Report, prints one status line per entry and exits
0 (pass), 1 (verification failure) or 2 (bad input or usage).  Commands with
a single computed value also print it as JSON first.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import doldkan, fixtures, mackey, opcat, operad, passi, spans, suite
from .errors import BudgetExceeded, DegreeViolation, FlavorMismatch, NotStabilized, ObjectBoundExceeded
from .functorlab import CONTRAVARIANT, COVARIANT, OmegaCat, SpanCat, functoriality_check
from .report import Report, timed

BUDGET_ENV = "ARTIFACT_BUDGET"


class UsageError(Exception):
    def __init__(self, flag: str, message: str) -> None:
        super().__init__(f"{flag}: {message}")
        self.flag = flag


# ---------------------------------------------------------------------------
# shared input handling


def _default_budget() -> int | None:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(BUDGET_ENV, f"not an integer: {raw!r}") from None


def _budget(args, fallback: int) -> int:
    if args.budget is not None:
        return args.budget
    env = _default_budget()
    return fallback if env is None else env


def _load_json(path: str, flag: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(flag, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(flag, f"invalid JSON in {path}: {exc.msg}") from None


def _operad(args, max_arity: int):
    """``--operad`` names a built-in or points at a JSON table."""
    spec = args.operad
    if spec == "ternary":
        return fixtures.ternary_operad()
    if spec.lower() in operad.BUILTINS:
        return operad.builtin(spec, max_arity)
    if Path(spec).exists():
        try:
            return operad.from_json(_load_json(spec, "--operad"))
        except (KeyError, ValueError) as exc:
            raise UsageError("--operad", f"bad operad table: {exc}") from None
    raise UsageError("--operad", f"unknown operad {spec!r}")


FIXTURES: dict[str, Callable[[SpanCat], Any]] = {
    "lin": fixtures.lin,
    "tensor-square": fixtures.tensor_square,
    "sym-square": fixtures.sym_square,
    "gamma-square": fixtures.gamma_square,
    "p2": lambda cat: fixtures.passi_functor(cat, 2),
    "tensor-cube": fixtures.tensor_cube,
    "p3": lambda cat: fixtures.passi_functor(cat, 3),
}


def _fixture_functor(args, bound: int):
    if args.fixture not in FIXTURES:
        raise UsageError("--fixture", f"unknown fixture {args.fixture!r}; choose from {', '.join(FIXTURES)}")
    op = _operad(args, bound + 1)
    max_apex = min(op.max_arity, bound + 1)
    cat = SpanCat(op, bound + 1, max_apex=max_apex, budget=_budget(args, 200_000))
    return FIXTURES[args.fixture](cat)


def _presentation(args, default_bound: int) -> mackey.JanusPresentation:
    bound = args.bound or default_bound
    if args.presentation:
        op = _operad(args, bound + 1)
        try:
            return mackey.JanusPresentation.from_json(_load_json(args.presentation, "--presentation"), op)
        except (KeyError, ValueError) as exc:
            raise UsageError("--presentation", f"bad presentation: {exc}") from None
    return mackey.from_functor(_fixture_functor(args, bound), bound)


# ---------------------------------------------------------------------------
# commands; each returns (report, value or None)


def cmd_operad_validate(args):
    op = _operad(args, args.bound or 3)
    vr = operad.validate(op, full_equivariance=not args.fast)
    rep = Report("operad-validate", {"operad": op.name, "max_arity": op.max_arity})
    rep.witnesses["checked"] = dict(sorted(vr.checked.items()))
    for v in vr.violations:
        rep.fail("violation", v)
    return rep, None


def _file_operad(args, head: dict, morphisms: list[dict]):
    """One operad for every morphism in a file, truncated high enough to compose them."""
    arity = args.bound or max(2, *(len(m["map"]) for m in morphisms))
    if args.operad_given:
        return _operad(args, arity)
    return operad.builtin(head["operad"], arity)


def cmd_cat_compose(args):
    if args.preset == "may-t-example":
        return suite.composition_example(), None
    if not args.file:
        raise UsageError("--file", "give a morphism file or --preset may-t-example")
    data = _load_json(args.file, "--file")
    try:
        op = _file_operad(args, data["outer"], [data["outer"], data["inner"]])
        outer = opcat.morphism_from_json(data["outer"], op)
        inner = opcat.morphism_from_json(data["inner"], op)
        if outer.source_size != inner.target_size:
            raise UsageError("--file", "inner target differs from outer source")
        c = opcat.compose(outer, inner)
    except (KeyError, ValueError, FlavorMismatch) as exc:
        raise UsageError("--file", str(exc)) from None
    rep = Report("cat-compose", {"outer": outer.to_json(), "inner": inner.to_json()})
    rep.witnesses["composite"] = c.to_json()
    return rep, c.to_json()


def cmd_cat_enum(args):
    flavor = opcat.flavor_of(args.flavor)
    op = _operad(args, args.bound or max(2, args.source))
    budget = _budget(args, opcat.DEFAULT_BUDGET)
    rep = Report("cat-enum", {"operad": op.name, "flavor": args.flavor, "source": args.source, "target": args.target})
    with timed(rep):
        homs = opcat.enumerate_hom(flavor, op, args.source, args.target, budget)
        want = opcat.hom_size(flavor, op, args.source, args.target)
        rep.witnesses["count"] = len(homs)
        rep.expect(len(homs) == want == len(set(homs)), "count differs from closed form", want)
        if args.list:
            rep.witnesses["morphisms"] = [str(m) for m in homs]
    return rep, {"count": len(homs)}


def _span_from_json(data: dict, op):
    vertical = opcat.morphism_from_json(data["vertical"], op)
    return spans.make_span(vertical, data["horizontal"], int(data["target"]))


def cmd_span_compose(args):
    data = _load_json(args.file, "--file")
    try:
        op = _file_operad(args, data["first"]["vertical"],
                          [data["first"]["vertical"], data["second"]["vertical"]])
        first = _span_from_json(data["first"], op)
        second = _span_from_json(data["second"], op)
        if first.target != second.source:
            raise UsageError("--file", "first target differs from second source")
        c = spans.compose_spans(second, first)
    except (KeyError, ValueError, FlavorMismatch) as exc:
        raise UsageError("--file", str(exc)) from None
    rep = Report("span-compose", {"first": first.to_json(), "second": second.to_json()})
    rep.witnesses["composite"] = c.to_json()
    return rep, c.to_json()


def cmd_span_adm(args):
    if args.preset != "presentation-square":
        raise UsageError("--preset", f"unknown preset {args.preset!r}")
    if args.k < 1:
        raise UsageError("--k", "k must be positive")
    op = _operad(args, args.bound or args.k + 1)
    alpha = None
    if args.alpha:
        try:
            alpha = op.parse(args.alpha, args.k + 1)
        except (KeyError, ValueError) as exc:
            raise UsageError("--alpha", str(exc)) from None
    rep = Report("span-adm", {"operad": op.name, "n": args.n, "i": args.i, "k": args.k})
    with timed(rep):
        sq = spans.presentation_square(op, args.n, args.i, args.k, alpha)
        rep.expect(sq.is_valid(), "square is not a pullback")
        adm = spans.admissible_subsets(sq)
        rep.witnesses["count"] = len(adm)
        rep.expect(len(adm) == 3 ** (args.k + 1) - 2, "count differs from 3^(k+1)-2", len(adm))
    return rep, {"count": len(adm)}


def cmd_doldkan_idempotents(args):
    op = _operad(args, args.bound or max(args.n, 1))
    system = doldkan.idempotents(op, args.n, _budget(args, 50_000))
    return system.report, {"supports": system.report.witnesses["supports"]}


def cmd_doldkan_roundtrip(args):
    op = _operad(args, args.bound or 3)
    oc = OmegaCat(op, args.objects, budget=_budget(args, 20_000))
    rep = Report("doldkan-roundtrip", {"operad": op.name, "count": args.count, "seed": args.seed})
    with timed(rep):
        for t in range(args.count):
            variance = args.variance or (COVARIANT if t % 2 == 0 else CONTRAVARIANT)
            G = fixtures.random_omega_functor(oc, args.seed + t, variance)
            rep.expect(functoriality_check(G).ok, "fixture is not a functor", G.name)
            rep.add(doldkan.roundtrip_omega(G))
            rep.add(doldkan.roundtrip_gamma(doldkan.i_shriek(G)))
    return rep, None


def cmd_mackey_check(args):
    j = _presentation(args, 3)
    rep = mackey.check_all(j)
    if args.squares:
        rep.add(mackey.check_all_squares(j, args.squares))
    return rep, {"ranks": [j.rank(n) for n in range(1, j.bound + 1)]}


def cmd_mackey_from_functor(args):
    bound = args.bound or 3
    F = _fixture_functor(args, bound)
    rep = Report("mackey-from-functor", {"functor": F.name, "bound": bound})
    with timed(rep):
        j = mackey.from_functor(F, bound)
        rep.witnesses["ranks"] = [j.rank(n) for n in range(1, bound + 1)]
        rep.add(mackey.check_all(j))
        if args.roundtrip:
            rep.add(mackey.presentation_roundtrip(j))
    if args.out:
        Path(args.out).write_text(j.dumps())
    return rep, {"ranks": rep.witnesses["ranks"]}


def cmd_mackey_quadratic(args):
    if not args.presentation and not args.fixture:
        args.fixture = "tensor-square"
    j = _presentation(args, 2)
    q = mackey.quadratic_presentation(j)
    return q.report, q.to_json()


def _monoid_input(args) -> tuple[passi.MonoidSpec, int]:
    if args.input:
        data = _load_json(args.input, "--input")
        try:
            return passi.MonoidSpec.from_json(data["monoid"]), int(data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError("--input", f"bad Passi input: {exc}") from None
    if not args.monoid or args.n is None:
        raise UsageError("--monoid", "give --monoid and --n, or --input")
    try:
        return passi.MonoidSpec.parse(args.monoid), args.n
    except ValueError as exc:
        raise UsageError("--monoid", str(exc)) from None


def cmd_passi_rank(args):
    spec, n = _monoid_input(args)
    rep = Report("passi-rank", {"monoid": args.monoid or args.input, "n": n})
    with timed(rep):
        g = passi.passi_group(spec, n, _budget(args, passi.DEFAULT_BUDGET)).group
        rep.witnesses["group"] = g.to_json()
        if spec.kind == "free":
            want = passi.free_rank_formula(spec.rank, n)
            rep.expect(g.rank == want and not g.torsion, "rank differs from the geometric sum", want)
    return rep, {"rank": g.rank, "torsion": list(g.torsion)}


def cmd_passi_compare(args):
    rep = Report("passi-compare-mon-gr", {"k": args.k, "l": args.l, "n": args.n})
    with timed(rep):
        for r in sorted({args.l, args.k * args.l}):
            rep.add(passi.groupification_iso_check(r, args.n, _budget(args, passi.DEFAULT_BUDGET)))
        rep.add(passi.compare_mon_gr(args.k, args.l, args.n, samples=args.samples, seed=args.seed))
    return rep, None


def cmd_passi_tn(args):
    if args.operad.lower() not in ("com", "as"):
        raise UsageError("--operad", "tn-check supports com and as")
    return passi.tn_universal_check(args.operad.lower(), args.m, args.l, args.n), None


def cmd_report_all(args):
    if args.config is None:
        config: Any = {"criteria": "all"}
    else:
        config = _load_json(args.config, "--config")
        if not isinstance(config, dict) or not config:
            raise UsageError("--config", "configuration is empty")
        unknown = set(config) - {"criteria", "fault"}
        if unknown:
            raise UsageError("--config", f"unknown keys {sorted(unknown)}")
        crit = config.get("criteria", "all")
        if crit != "all" and (not isinstance(crit, list) or any(c not in suite.CRITERIA for c in crit)):
            raise UsageError("--config", f"criteria must be 'all' or a list drawn from {sorted(suite.CRITERIA)}")
    return suite.report_all(config), None


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", metavar="PATH", help="write the full report as JSON ('-' for stdout)")
    p.add_argument("--operad", default=None, help="built-in name (i, com, as, ternary) or a JSON table")
    p.add_argument("--bound", type=int, default=None, help="object or arity bound N")
    p.add_argument("--budget", type=int, default=None, help=f"enumeration budget (default from ${BUDGET_ENV})")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="artifact", description="Operadic categories, spans and polynomial functors.")
    groups = parser.add_subparsers(dest="group", required=True, metavar="GROUP")

    def sub(group_parser, name, func, helptext):
        p = group_parser.add_parser(name, parents=[common], help=helptext)
        p.set_defaults(func=func)
        return p

    g = groups.add_parser("operad", help="operad tables").add_subparsers(dest="action", required=True, metavar="ACTION")
    p = sub(g, "validate", cmd_operad_validate, "check the operad axioms")
    p.add_argument("--fast", action="store_true", help="check equivariance on generators only")

    g = groups.add_parser("cat", help="operad-decorated categories").add_subparsers(dest="action", required=True, metavar="ACTION")
    p = sub(g, "compose", cmd_cat_compose, "compose two decorated maps")
    p.add_argument("--preset", choices=["may-t-example"])
    p.add_argument("--file", help="JSON with 'outer' and 'inner' morphisms")
    p = sub(g, "enum", cmd_cat_enum, "enumerate a hom-set")
    p.add_argument("--flavor", default="s", choices=["s", "gamma", "omega"])
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--list", action="store_true", help="include every morphism in the report")

    g = groups.add_parser("span", help="span calculus").add_subparsers(dest="action", required=True, metavar="ACTION")
    p = sub(g, "compose", cmd_span_compose, "compose two spans")
    p.add_argument("--file", required=True, help="JSON with 'first' and 'second' spans")
    p = sub(g, "adm", cmd_span_adm, "count admissible apex subsets")
    p.add_argument("--preset", default="presentation-square")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--alpha", help="decoration of arity k+1")

    g = groups.add_parser("doldkan", help="Gamma/Omega equivalence").add_subparsers(dest="action", required=True, metavar="ACTION")
    p = sub(g, "idempotents", cmd_doldkan_idempotents, "orthogonal idempotents in the endomorphism ring")
    p.add_argument("--n", type=int, required=True)
    p = sub(g, "roundtrip", cmd_doldkan_roundtrip, "natural isomorphisms on random functors")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objects", type=int, default=2)
    p.add_argument("--variance", choices=[COVARIANT, CONTRAVARIANT])

    g = groups.add_parser("mackey", help="pseudo-Mackey presentations").add_subparsers(dest="action", required=True, metavar="ACTION")
    for name, func, helptext in (("check", cmd_mackey_check, "check every relation family"),
                                 ("from-functor", cmd_mackey_from_functor, "extract a presentation from a fixture"),
                                 ("quadratic", cmd_mackey_quadratic, "degree-two specialization")):
        p = sub(g, name, func, helptext)
        p.add_argument("--fixture", help=", ".join(FIXTURES))
        if name != "from-functor":
            p.add_argument("--presentation", help="presentation JSON")
    g.choices["check"].add_argument("--squares", type=int, default=0, help="also check this many pullback squares")
    g.choices["from-functor"].add_argument("--out", help="write the presentation JSON here")
    g.choices["from-functor"].add_argument("--roundtrip", action="store_true")

    g = groups.add_parser("passi", help="Passi groups").add_subparsers(dest="action", required=True, metavar="ACTION")
    p = sub(g, "rank", cmd_passi_rank, "invariant factors of P_n(M)")
    p.add_argument("--monoid", help="free:r, freecomm:r, group:r, cyclic:m or trivial")
    p.add_argument("--n", type=int)
    p.add_argument("--input", help='JSON {"monoid": {...}, "n": n}')
    p = sub(g, "compare-mon-gr", cmd_passi_compare, "monoid and group Passi categories agree")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--samples", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p = sub(g, "tn-check", cmd_passi_tn, "Taylor truncation matches the Passi category")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--n", type=int, default=1)

    g = groups.add_parser("report", help="acceptance suite").add_subparsers(dest="action", required=True, metavar="ACTION")
    p = sub(g, "all", cmd_report_all, "run every acceptance check")
    p.add_argument("--config", help='JSON such as {"criteria": "all"} or {"criteria": [1, 5], "fault": true}')
    return parser


def _validate_flags(args) -> None:
    args.operad_given = args.operad is not None
    if args.operad is None:
        args.operad = "com"
    for flag in ("bound", "budget"):
        val = getattr(args, flag)
        if val is not None and val < 1:
            raise UsageError(f"--{flag}", "must be positive")
    for flag in ("n", "k", "l", "m", "source", "target", "count", "objects"):
        val = getattr(args, flag, None)
        if val is not None and val < 0:
            raise UsageError(f"--{flag}", "must be non-negative")


def _print_tree(rep: Report, out, depth: int = 0, max_depth: int = 2) -> None:
    print("  " * depth + rep.line(), file=out)
    if depth < max_depth:
        for c in rep.children:
            _print_tree(c, out, depth + 1, max_depth)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate_flags(args)
        rep, value = args.func(args)
    except UsageError as exc:
        print(f"artifact: error: {exc}", file=err)
        return 2
    except (ObjectBoundExceeded, BudgetExceeded, operad.ArityOverflow, operad.OperadError) as exc:
        flag = "--budget" if isinstance(exc, BudgetExceeded) else "--bound"
        print(f"artifact: error: {flag}: {exc}", file=err)
        return 2
    except (DegreeViolation, NotStabilized) as exc:
        rep, value = Report(f"{args.group}-{args.action}"), None
        rep.fail(type(exc).__name__, str(exc))
    if value is not None:
        print(json.dumps(value, sort_keys=True, ensure_ascii=False), file=out)
    _print_tree(rep, out)
    if args.json == "-":
        print(rep.dumps(), file=out)
    elif args.json:
        Path(args.json).write_text(rep.dumps() + "\n")
    return 0 if rep.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
