import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from artifact import cli
from artifact.report import Report


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_passi_rank_prints_the_group():
    code, out, _ = run("passi", "rank", "--monoid", "free:2", "--n", "2")
    assert code == 0
    assert json.loads(out.splitlines()[0]) == {"rank": 6, "torsion": []}


def test_passi_rank_from_json(tmp_path):
    path = tmp_path / "in.json"
    path.write_text(json.dumps({"monoid": {"kind": "free", "rank": 2}, "n": 3}))
    code, out, _ = run("passi", "rank", "--input", str(path))
    assert code == 0 and json.loads(out.splitlines()[0]) == {"rank": 14, "torsion": []}


@pytest.mark.parametrize("k,count", [(1, 7), (2, 25), (3, 79)])
def test_span_adm(k, count):
    code, out, _ = run("span", "adm", "--preset", "presentation-square", "--k", str(k))
    assert code == 0 and json.loads(out.splitlines()[0]) == {"count": count}


def test_idempotents_list_supports():
    code, out, _ = run("doldkan", "idempotents", "--operad", "as", "--n", "2")
    assert code == 0
    supports = json.loads(out.splitlines()[0])["supports"]
    assert sorted(supports) == ["0", "01", "012", "02"]


@pytest.mark.parametrize("argv", [
    ["operad", "validate", "--operad", "as", "--bound", "3"],
    ["cat", "compose", "--preset", "may-t-example"],
    ["cat", "enum", "--operad", "as", "--flavor", "gamma", "--source", "2", "--target", "2"],
    ["doldkan", "roundtrip", "--operad", "com", "--count", "2"],
    ["mackey", "check", "--fixture", "tensor-square", "--operad", "as"],
    ["mackey", "from-functor", "--fixture", "p2", "--bound", "2"],
    ["mackey", "quadratic", "--operad", "com"],
    ["passi", "compare-mon-gr", "--k", "1", "--l", "2", "--n", "2"],
    ["passi", "tn-check", "--operad", "com", "--n", "1"],
])
def test_commands_pass(argv):
    code, out, err = run(*argv)
    assert code == 0, out + err
    assert "FAIL" not in out


@pytest.mark.parametrize("argv,flag", [
    (["passi", "rank", "--monoid", "bogus:1", "--n", "1"], "--monoid"),
    (["doldkan", "idempotents", "--n", "-1"], "--n"),
    (["doldkan", "idempotents", "--operad", "nope", "--n", "1"], "--operad"),
    (["span", "adm", "--k", "1", "--bound", "0"], "--bound"),
    (["span", "adm", "--k", "1", "--preset", "other"], "--preset"),
    (["mackey", "check", "--fixture", "nope"], "--fixture"),
    (["cat", "enum", "--operad", "as", "--source", "9", "--target", "9", "--budget", "10"], "--budget"),
    (["passi", "tn-check", "--operad", "i"], "--operad"),
])
def test_usage_errors_name_the_flag(argv, flag):
    code, _, err = run(*argv)
    assert code == 2
    assert flag in err


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        cli.build_parser().parse_args(["span", "adm"])
    assert exc.value.code == 2
    assert run("nonsense")[0] == 2


def test_budget_environment_override(monkeypatch):
    monkeypatch.setenv(cli.BUDGET_ENV, "10")
    code, _, err = run("cat", "enum", "--operad", "as", "--source", "9", "--target", "9")
    assert code == 2 and "--budget" in err
    monkeypatch.setenv(cli.BUDGET_ENV, "ten")
    code, _, err = run("cat", "enum", "--source", "1", "--target", "1")
    assert code == 2 and cli.BUDGET_ENV in err


def test_verification_failure_exits_one(tmp_path):
    from artifact import fixtures, mackey, operad
    from artifact.functorlab import SpanCat
    j = mackey.from_functor(fixtures.tensor_square(SpanCat(operad.builtin("com", 3), 3)), 2)
    path = tmp_path / "bad.json"
    path.write_text(mackey.corrupt(j, ("T", 2, 1)).dumps())
    code, out, _ = run("mackey", "check", "--presentation", str(path), "--bound", "2")
    assert code == 1 and "FAIL" in out


def test_presentation_file_roundtrip(tmp_path):
    path = tmp_path / "pres.json"
    assert run("mackey", "from-functor", "--fixture", "tensor-cube", "--out", str(path))[0] == 0
    code, out, _ = run("mackey", "check", "--presentation", str(path))
    assert code == 0 and json.loads(out.splitlines()[0]) == {"ranks": [1, 6, 6]}


def test_cat_compose_from_file(tmp_path):
    path = tmp_path / "maps.json"
    path.write_text(json.dumps({
        "outer": {"flavor": "s", "operad": "as", "map": [1, 1], "target": 1, "decoration": {"1": "(12)"}},
        "inner": {"flavor": "s", "operad": "as", "map": [2, 1, 2], "target": 2,
                  "decoration": {"1": "id_1", "2": "(12)"}},
    }))
    code, out, _ = run("cat", "compose", "--file", str(path))
    assert code == 0
    assert json.loads(out.splitlines()[0])["map"] == [1, 1, 1]


def test_report_all_config_handling(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("{}")
    code, _, err = run("report", "all", "--config", str(empty))
    assert code == 2 and "--config" in err
    fault = tmp_path / "fault.json"
    fault.write_text(json.dumps({"criteria": [1, 5], "fault": True}))
    out_json = tmp_path / "report.json"
    code, _, _ = run("report", "all", "--config", str(fault), "--json", str(out_json))
    assert code == 1
    data = json.loads(out_json.read_text())
    assert [c["status"] for c in data["children"]] == ["pass", "pass", "fail"]


def test_json_report_is_canonical(tmp_path):
    path = tmp_path / "r.json"
    assert run("span", "adm", "--k", "2", "--json", str(path))[0] == 0
    text = path.read_text().rstrip("\n")
    assert json.dumps(json.loads(text), sort_keys=True, indent=2) == text


reports = st.recursive(
    st.builds(
        lambda name, params, status, count: Report(name, params, status, {"count": count}),
        st.text(min_size=1, max_size=8),
        st.dictionaries(st.text(max_size=5), st.integers() | st.text(max_size=5), max_size=3),
        st.sampled_from(["pass", "fail", "warning"]),
        st.integers(0, 100),
    ),
    lambda children: st.tuples(children, st.lists(children, max_size=3)).map(
        lambda t: Report(t[0].check, t[0].params, t[0].status, t[0].witnesses, 0.0, t[1])),
    max_leaves=6,
)


@settings(max_examples=60)
@given(reports)
def test_report_json_roundtrips_byte_identically(rep):
    text = rep.dumps(timing=False)
    assert json.dumps(json.loads(text), sort_keys=True, indent=2) == text
