"""The acceptance checks as report-producing functions."""

from __future__ import annotations

from typing import Callable

from . import doldkan, fixtures, mackey, opcat, passi, spans
from .functorlab import CONTRAVARIANT, COVARIANT, OmegaCat, SpanCat, functoriality_check
from .operad import Sym, SymbolicOperad, builtin
from .report import Report, timed


def composition_example() -> Report:
    """The worked composition 6 -> 3 -> 2 in S(P) with symbolic decorations."""
    rep = Report("s-composition-example")
    with timed(rep):
        op = SymbolicOperad()
        f = opcat.make(opcat.S, op, (2, 1, 2), (Sym(1, "ω_1"), Sym(2, "ω_2")))
        g = opcat.make(opcat.S, op, (1, 2, 3, 3, 1, 3), (Sym(2, "α_1"), Sym(1, "α_2"), Sym(3, "α_3")))
        c = opcat.compose(f, g)
        sigma = opcat.block_permutation(g, f, 2)
        labels = c.labels()
        rep.witnesses.update({"map": list(c.map), "decoration": labels, "sigma": list(sigma)})
        rep.expect(sigma == (1, 3, 4, 2, 5), "sigma", sigma)
        rep.expect(labels == ["γ(ω_1,α_2)", "γ(ω_2;α_1,α_3)·(1,3,4,2,5)"], "decorations", labels)
        rep.expect(c.map == (2, 1, 2, 2, 2, 2), "map", c.map)
    return rep


def idempotent_systems(n_max: int = 3) -> Report:
    rep = Report("doldkan-idempotents-all", {"n_max": n_max})
    with timed(rep):
        for name in ("i", "com", "as"):
            op = builtin(name, max(n_max, 1))
            for n in range(n_max + 1):
                rep.add(doldkan.idempotents(op, n).report)
    return rep


def hom_counts(n_max: int = 3) -> Report:
    rep = Report("doldkan-hom-counts", {"n_max": n_max})
    with timed(rep):
        table = {}
        for name in ("com", "as"):
            op = builtin(name, max(n_max, 1))
            for m in range(n_max + 1):
                for n in range(n_max + 1):
                    lhs, rhs = doldkan.hom_count_identity(op, m, n)
                    table[f"{name}:{m},{n}"] = [lhs, rhs]
                    rep.expect(lhs == rhs, "count mismatch", {"operad": name, "m": m, "n": n, "gamma": lhs, "omega": rhs})
        rep.witnesses["counts"] = table
    return rep


def doldkan_roundtrips(count: int = 10, seed: int = 0) -> Report:
    rep = Report("doldkan-roundtrips", {"functors_per_operad": count, "seed": seed})
    with timed(rep):
        for name in ("com", "as"):
            op = builtin(name, 3)
            oc = OmegaCat(op, 2)
            for t in range(count):
                variance = COVARIANT if t % 2 == 0 else CONTRAVARIANT
                G = fixtures.random_omega_functor(oc, seed + t, variance)
                rep.expect(functoriality_check(G).ok, "fixture is not a functor", G.name)
                rep.add(doldkan.roundtrip_omega(G))
                rep.add(doldkan.roundtrip_gamma(doldkan.i_shriek(G)))
    return rep


def admissible_counts(ks=(1, 2, 3)) -> Report:
    rep = Report("span-admissible-counts", {"k": list(ks)})
    with timed(rep):
        op = builtin("com", max(ks) + 1)
        counts = {}
        for k in ks:
            sq = spans.presentation_square(op, 2, 1, k)
            rep.expect(sq.is_valid(), "square is not a pullback", k)
            c = len(spans.admissible_subsets(sq))
            counts[str(k)] = c
            rep.expect(c == 3 ** (k + 1) - 2, "count", {"k": k, "count": c})
        rep.witnesses["counts"] = counts
    return rep


def presentation_fixtures(cat: SpanCat) -> list:
    return fixtures.span_fixture_set(cat) + [fixtures.tensor_cube(cat), fixtures.passi_functor(cat, 3)]


def pseudo_mackey_presentations(N: int = 3) -> Report:
    rep = Report("mackey-presentations", {"N": N})
    with timed(rep):
        for name in ("com", "as"):
            op = builtin(name, N + 1)
            cat = SpanCat(op, N + 1)
            for F in presentation_fixtures(cat):
                j = mackey.from_functor(F, N)
                child = mackey.check_all(j)
                child.params["functor"] = F.name
                rep.add(child)
        op = fixtures.ternary_operad()
        cat = SpanCat(op, 4, max_apex=3)
        j = mackey.from_functor(fixtures.tensor_cube(cat), 3)
        cert = mackey.check_pseudo_mackey(j)
        k2 = [v for v in cert.verified if v["family"] == "(5)" and v["k"] == 2]
        rep.expect(bool(k2) and all(v["terms"] == 25 for v in k2), "k=2 family missing", k2)
        rep.add(cert.report)
    return rep


def passi_ranks() -> Report:
    rep = Report("passi-ranks")
    with timed(rep):
        table = {}
        for r in (1, 2, 3):
            for n in (1, 2, 3):
                g = passi.passi_group(passi.MonoidSpec.parse(f"free:{r}"), n).group
                table[f"free:{r},n={n}"] = g.to_json()
                want = passi.free_rank_formula(r, n)
                rep.expect(g.rank == want and not g.torsion, "free rank", {"r": r, "n": n, "group": g.to_json()})
        for m in range(1, 7):
            g = passi.passi_group(passi.MonoidSpec.parse(f"cyclic:{m}"), 1).group
            table[f"cyclic:{m},n=1"] = g.to_json()
            want = () if m == 1 else (m,)
            rep.expect(g.rank == 0 and g.torsion == want, "P_1(Z/m)", {"m": m, "group": g.to_json()})
        rep.witnesses["groups"] = table
    return rep


MON_GR_CASES = ((1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 1, 2))


def mon_gr() -> Report:
    rep = Report("passi-mon-gr")
    with timed(rep):
        for r, n in sorted({(l, n) for _, l, n in MON_GR_CASES} | {(k * l, n) for k, l, n in MON_GR_CASES}):
            rep.add(passi.groupification_iso_check(r, n))
        for k, l, n in MON_GR_CASES:
            rep.add(passi.compare_mon_gr(k, l, n))
    return rep


def tn_universal() -> Report:
    rep = Report("passi-tn-universal-all")
    with timed(rep):
        for name in ("com", "as"):
            for n in (1, 2):
                rep.add(passi.tn_universal_check(name, 1, 1, n))
    return rep


def quadratic() -> Report:
    rep = Report("mackey-quadratic")
    with timed(rep):
        op = builtin("com", 3)
        q = mackey.quadratic_presentation(mackey.from_functor(fixtures.tensor_square(SpanCat(op, 3)), 2))
        rep.add(q.report)
        rep.expect(q.P.to_rows() == [[1, 1]] and q.H["*"].to_rows() == [[1], [1]], "tensor square data",
                   {"P": q.P, "H": q.H["*"]})
        for key in ("PHP=2P", "HPH=2H"):
            rep.expect(q.report.witnesses["reduced"].get(key) is True, key)
        op = builtin("as", 3)
        for F in (fixtures.tensor_square(SpanCat(op, 3)), fixtures.passi_functor(SpanCat(op, 3), 2)):
            q = mackey.quadratic_presentation(mackey.from_functor(F, 2))
            q.report.params["functor"] = F.name
            rep.add(q.report)
            for key in ("PHP=2P", "H^tau=H^1PH^1-H^1"):
                rep.expect(q.report.witnesses["reduced"].get(key) is True, key, F.name)
    return rep


def injected_fault() -> Report:
    """A corrupted quadratic presentation; this entry is expected to fail."""
    op = builtin("com", 3)
    j = mackey.from_functor(fixtures.tensor_square(SpanCat(op, 3)), 2)
    rep = mackey.check_horizontal_relations(mackey.corrupt(j, ("T", 2, 1)))
    rep.check = "injected-fault"
    return rep


CRITERIA: dict[int, tuple[str, Callable[[], Report]]] = {
    1: ("S(P) composition example", composition_example),
    2: ("idempotent system", idempotent_systems),
    3: ("hom-count identity", hom_counts),
    4: ("Dold-Kan roundtrips", doldkan_roundtrips),
    5: ("admissible-subset counts", admissible_counts),
    6: ("pseudo-Mackey presentations", pseudo_mackey_presentations),
    7: ("Passi ranks", passi_ranks),
    8: ("monoid/group isomorphism", mon_gr),
    9: ("universality bridge", tn_universal),
    10: ("quadratic specializations", quadratic),
}


def report_all(config: dict) -> Report:
    """Run the selected criteria; ``fault`` appends one entry that must fail."""
    if not config:
        raise ValueError("empty configuration")
    selected = config.get("criteria", "all")
    numbers = sorted(CRITERIA) if selected == "all" else sorted(int(c) for c in selected)
    rep = Report("report-all", {"criteria": numbers, "fault": bool(config.get("fault"))})
    with timed(rep):
        for num in numbers:
            title, fn = CRITERIA[num]
            try:
                child = fn()
            except Exception as exc:  # partial results are still reported
                child = Report(title)
                child.fail("error", f"{type(exc).__name__}: {exc}")
            child.params["criterion"] = num
            rep.add(child)
        if config.get("fault"):
            rep.add(injected_fault())
    return rep
