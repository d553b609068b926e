"""The ten acceptance criteria; each prints one PASS/FAIL line."""

import pytest

from artifact import suite


def _verdict(capsys, number, rep, extra=True):
    ok = rep.ok and extra
    title = suite.CRITERIA[number][0]
    with capsys.disabled():
        print(f"\nCRITERION {number:2d} {'PASS' if ok else 'FAIL'} {title} ({rep.wall_time:.2f}s)")
    return ok


def test_criterion_01_composition_example(capsys):
    rep = suite.composition_example()
    w = rep.witnesses
    exact = (w["sigma"] == [1, 3, 4, 2, 5]
             and w["decoration"] == ["γ(ω_1,α_2)", "γ(ω_2;α_1,α_3)·(1,3,4,2,5)"])
    assert _verdict(capsys, 1, rep, exact), w


def test_criterion_02_idempotent_system(capsys):
    rep = suite.idempotent_systems(3)
    assert len(rep.children) == 12
    assert _verdict(capsys, 2, rep), rep.witnesses


def test_criterion_03_hom_counts(capsys):
    rep = suite.hom_counts(3)
    exact = all(lhs == rhs for lhs, rhs in rep.witnesses["counts"].values()) and len(rep.witnesses["counts"]) == 32
    assert _verdict(capsys, 3, rep, exact), rep.witnesses


def test_criterion_04_doldkan_roundtrips(capsys):
    rep = suite.doldkan_roundtrips(count=10)
    # two roundtrips per functor, ten functors per operad, two operads
    assert _verdict(capsys, 4, rep, len(rep.children) == 40), rep.witnesses


def test_criterion_05_admissible_counts(capsys):
    rep = suite.admissible_counts((1, 2, 3))
    assert _verdict(capsys, 5, rep, rep.witnesses["counts"] == {"1": 7, "2": 25, "3": 79}), rep.witnesses


def test_criterion_06_pseudo_mackey(capsys):
    rep = suite.pseudo_mackey_presentations(3)
    per_operad = [c for c in rep.children if c.check == "janus presentation"]
    enough = sum(c.params["operad"] == "com" for c in per_operad) >= 5 and \
        sum(c.params["operad"] == "as" for c in per_operad) >= 5
    mackey_parts = [g for c in per_operad for g in c.children if g.check == "pseudo-Mackey relations"]
    term_for_term = all(g.witnesses["by_family"].get("(5) binary term matching", 0) > 0 for g in mackey_parts)
    assert _verdict(capsys, 6, rep, enough and term_for_term), [c.line() for c in rep.children]


def test_criterion_07_passi_ranks(capsys):
    rep = suite.passi_ranks()
    groups = rep.witnesses["groups"]
    exact = all(groups[f"free:{r},n={n}"] == {"rank": sum(r ** k for k in range(1, n + 1)), "torsion": []}
                for r in (1, 2, 3) for n in (1, 2, 3))
    exact &= all(groups[f"cyclic:{m},n=1"] == {"rank": 0, "torsion": [m] if m > 1 else []} for m in range(1, 7))
    assert _verdict(capsys, 7, rep, exact), groups


def test_criterion_08_mon_gr(capsys):
    rep = suite.mon_gr()
    compared = {(c.params["k"], c.params["l"], c.params["n"]) for c in rep.children if "k" in c.params}
    assert _verdict(capsys, 8, rep, compared == set(suite.MON_GR_CASES)), rep.witnesses


def test_criterion_09_tn_universal(capsys):
    rep = suite.tn_universal()
    assert _verdict(capsys, 9, rep, len(rep.children) == 4), [c.witnesses for c in rep.children]


def test_criterion_10_quadratic(capsys):
    rep = suite.quadratic()
    assert _verdict(capsys, 10, rep), [c.witnesses for c in rep.children]


def test_report_all_injected_fault_yields_one_failure():
    rep = suite.report_all({"criteria": [1], "fault": True})
    assert [c.ok for c in rep.children] == [True, False]


def test_report_all_rejects_empty_config():
    with pytest.raises(ValueError):
        suite.report_all({})
