import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

import cases
from matcert.cli import degree_fit, main
from matcert.errors import InputError
from matcert.formats import (
    certificate_from_dict,
    certificate_to_dict,
    parse_certificate,
    parse_trs,
    print_certificate,
    print_trs,
)
from matcert.terms import App, Rule, Trs, Var, term_vars
from matcert.verdict import Verdict


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


# -- TRS format ----------------------------------------------------------------


def test_parse_trs_examples():
    R = parse_trs("(VAR x) (RULES f(x) -> x)")
    assert R.rules == (Rule(App("f", (Var("x"),)), Var("x")),)
    R = parse_trs("(VAR x) (RULES f(x) -> g(x, x))")
    assert R.signature == {"f": 1, "g": 2}
    with pytest.raises(InputError, match="variable left-hand side"):
        parse_trs("(VAR x) (RULES x -> f(x))")


def test_parse_trs_details():
    text = """
    ; comment
    (VAR x y)
    (RULES
      plus(zero(), y) -> y   ; constants may carry ()
      plus(s(x), y) -> s(plus(x, y))
    )
    """
    R = parse_trs(text)
    assert R == cases.trs("plus.trs")
    assert parse_trs("(RULES a -> b)").signature == {"a": 0, "b": 0}


@pytest.mark.parametrize(
    "text,msg",
    [
        ("(VAR x) (RULES f(x) -> f(x, x))", "arity"),
        ("(VAR x y) (RULES f(x) -> y)", "do not occur"),
        ("(VAR x) (RULES f(x) -> x(a))", "variable"),
        ("(VAR x) (RULES f(x) -> )", None),
        ("(VAR x) (RULES f(x -> x)", None),
        ("(RULES f(x) => x)", None),
    ],
)
def test_parse_trs_errors(text, msg):
    with pytest.raises(InputError, match=msg) as e:
        parse_trs(text)
    assert e.value.where


def test_syntax_errors_carry_line_and_column():
    with pytest.raises(InputError) as e:
        parse_trs("(VAR x)\n(RULES\n  f(x) -> ]\n)")
    assert e.value.where.startswith("3:")


SIG = [("f", 1), ("g", 2), ("a", 0), ("b", 0)]


@st.composite
def terms(draw, depth=3, variables=("x", "y")):
    if depth == 0 or draw(st.booleans()):
        return draw(st.sampled_from([Var(v) for v in variables] + [App("a"), App("b")]))
    s, k = draw(st.sampled_from(SIG[:2]))
    return App(s, tuple(draw(terms(depth - 1, variables)) for _ in range(k)))


@st.composite
def rule_lists(draw):
    out = []
    for _ in range(draw(st.integers(0, 4))):
        lhs = draw(terms())
        if isinstance(lhs, Var):
            lhs = App("f", (lhs,))
        vs = tuple(sorted(term_vars(lhs)))
        rhs = draw(terms(variables=vs)) if vs else draw(terms(variables=()))
        out.append(Rule(lhs, rhs))
    return out


@given(rule_lists())
def test_trs_round_trip(rules):
    R = Trs(rules)
    assert parse_trs(print_trs(R)) == R


@pytest.mark.parametrize("name", ["collapse.trs", "bubble.trs", "plus.trs", "loop.trs", "empty.trs"])
def test_trs_fixture_round_trip(name):
    R = cases.trs(name)
    assert parse_trs(print_trs(R)) == R


# -- certificate format ----------------------------------------------------------


def test_parse_certificate_example():
    C = parse_certificate(
        '{"dimension":1,"goal":"complexity","interpretation":'
        '{"f":{"const":[[1]],"args":[[[1]]]},"c":{"const":[[0]],"args":[]}}}'
    )
    assert C == cases.cert("collapse.json")
    assert C.interpretation["f"].arity == 1


@pytest.mark.parametrize(
    "data,where",
    [
        ({"dimension": 1, "goal": "termination", "interpretation": {"f": {"const": [[-1]], "args": []}}},
         "$.interpretation.f.const[0][0]"),
        ({"dimension": 2, "goal": "termination", "interpretation": {"f": {"const": [[0, 0], [0]], "args": []}}},
         "$.interpretation.f.const[1]"),
        ({"dimension": 1, "goal": "termination", "interpretation": {"f": {"const": [[0.5]], "args": []}}},
         "$.interpretation.f.const[0][0]"),
        ({"dimension": 1, "goal": "proof", "interpretation": {}}, "$.goal"),
        ({"dimension": 0, "goal": "termination", "interpretation": {}}, "$.dimension"),
        ({"dimension": 1, "goal": "termination", "interpretation": {}, "extra": 1}, "$"),
        ({"dimension": 1, "goal": "termination", "interpretation": {"f": {"const": [[0]], "args": [[[1]], [[-2]]]}}},
         "$.interpretation.f.args[1][0][0]"),
    ],
)
def test_certificate_schema_errors(data, where):
    with pytest.raises(InputError) as e:
        certificate_from_dict(data)
    assert e.value.where.startswith(where)


def test_malformed_json_is_located():
    with pytest.raises(InputError) as e:
        parse_certificate('{"dimension": 1,\n "goal": }')
    assert e.value.where.startswith("2:")


@pytest.mark.parametrize(
    "name",
    ["collapse.json", "bubble.json", "bubble_identity.json", "plus.json", "alternating.json", "identity_only.json"],
)
def test_certificate_round_trip(name):
    C = cases.cert(name)
    assert parse_certificate(print_certificate(C)) == C
    assert certificate_from_dict(certificate_to_dict(C)) == C


# -- check ---------------------------------------------------------------------


def test_check_collapse(capsys, tmp_path):
    out_json = tmp_path / "v.json"
    code, out = run(capsys, "check", cases.path("collapse.trs"), cases.path("collapse.json"), "--json", out_json)
    assert code == 0
    assert "status: CERTIFIED" in out and "O(n^1)" in out and "criterion: triangular" in out
    assert "non-certified diagnostic" in out
    v = Verdict.from_json(out_json.read_text())
    assert v.certified and v.degree == 1 and v.exit_code == 0


def test_check_weak_constant(capsys, tmp_path):
    out_json = tmp_path / "v.json"
    code, out = run(capsys, "check", cases.path("collapse.trs"), cases.path("collapse_weak.json"), "--json", out_json)
    assert code == 1
    assert "constant not strictly decreased at (0,0)" in out
    v = json.loads(out_json.read_text())
    assert v["status"] == "rejected" and v["witnesses"]


def test_check_malformed_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    out_json = tmp_path / "v.json"
    code, out = run(capsys, "check", cases.path("collapse.trs"), bad, "--json", out_json)
    assert code == 2 and "INPUT-ERROR" in out
    assert json.loads(out_json.read_text())["status"] == "input-error"


def test_check_missing_symbol(capsys, tmp_path):
    code, out = run(capsys, "check", cases.path("bubble.trs"), cases.path("collapse.json"))
    assert code == 2 and "'a'" in out


def test_check_negative_entry(capsys, tmp_path):
    bad = tmp_path / "neg.json"
    bad.write_text(json.dumps(
        {"dimension": 1, "goal": "termination", "interpretation": {"f": {"const": [[1]], "args": [[[-1]]]}}}
    ))
    code, out = run(capsys, "check", cases.path("collapse.trs"), bad)
    assert code == 2 and "negative" in out


def test_check_variable_lhs(capsys, tmp_path):
    bad = tmp_path / "bad.trs"
    bad.write_text("(VAR x) (RULES x -> f(x))")
    code, out = run(capsys, "check", bad, cases.path("collapse.json"))
    assert code == 2 and "variable left-hand side" in out


def test_check_missing_file(capsys, tmp_path):
    code, _ = run(capsys, "check", tmp_path / "nope.trs", cases.path("collapse.json"))
    assert code == 2


def test_check_with_oracle(capsys, tmp_path):
    out_json = tmp_path / "v.json"
    code, out = run(capsys, "check", cases.path("bubble.trs"), cases.path("bubble.json"),
                    "--oracle", 7, "--json", out_json)
    assert code == 0
    assert "derivation-bound violations: 0" in out
    o = json.loads(out_json.read_text())["oracle"]
    assert o["dc"] == [0, 0, 1, 2, 4, 6, 9]


def test_check_termination_goal(capsys):
    code, out = run(capsys, "check", cases.path("plus.trs"), cases.path("plus.json"))
    assert code == 0 and "claim: termination" in out
    code, out = run(capsys, "check", cases.path("plus.trs"), cases.path("plus_complexity.json"))
    assert code == 1


@pytest.mark.parametrize(
    "trs,cert",
    [
        ("collapse.trs", "collapse.json"),
        ("collapse.trs", "collapse_weak.json"),
        ("bubble.trs", "bubble.json"),
        ("bubble.trs", "bubble_identity.json"),
        ("bubble.trs", "collapse.json"),
        ("plus.trs", "plus_complexity.json"),
    ],
)
def test_exit_code_matches_json_status_and_is_deterministic(capsys, tmp_path, trs, cert):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    codes = [run(capsys, "check", cases.path(trs), cases.path(cert), "--json", p)[0] for p in paths]
    assert codes[0] == codes[1] and codes[0] in (0, 1, 2)
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    status = json.loads(a)["status"]
    assert {"certified": 0, "rejected": 1, "input-error": 2}[status] == codes[0]
    assert a.decode().rstrip("\n") == json.dumps(json.loads(a), sort_keys=True, indent=2)


def test_verdict_round_trip():
    v = Verdict("certified", "complexity", degree=2, criterion="triangular", details={"c": 1})
    assert Verdict.from_json(v.to_json()) == v
    with pytest.raises(ValueError):
        Verdict("rejected", "termination")


# -- oracle --------------------------------------------------------------------


def test_oracle_collapse(capsys):
    code, out = run(capsys, "oracle", cases.path("collapse.trs"), "--max-size", 4, "--step-cap", 100)
    assert code == 0
    rows = [line.split() for line in out.splitlines() if line.strip()[:1].isdigit()]
    assert rows == [["1", "0"], ["2", "1"], ["3", "2"], ["4", "3"]]
    assert "fresh constant added for enumeration: c" in out


def test_oracle_loop(capsys):
    code, out = run(capsys, "oracle", cases.path("loop.trs"), "--max-size", 2, "--step-cap", 100)
    assert code == 1 and "a -> a" in out and "cycle" in out


def test_oracle_empty(capsys):
    code, out = run(capsys, "oracle", cases.path("empty.trs"), "--max-size", 3, "--step-cap", 10)
    assert code == 0
    rows = [line.split() for line in out.splitlines() if line.strip()[:1].isdigit()]
    assert [r[1] for r in rows] == ["0", "0", "0"]


def test_oracle_degree_fit(capsys):
    code, out = run(capsys, "oracle", cases.path("bubble.trs"), "--max-size", 8, "--step-cap", 1000, "--degree", 2)
    assert code == 0 and "consistent" in out
    code, out = run(capsys, "oracle", cases.path("bubble.trs"), "--max-size", 8, "--step-cap", 1000, "--degree", 0)
    assert code == 1 and "outgrowing" in out


def test_degree_fit_heuristic():
    assert degree_fit([n - 1 for n in range(1, 9)], 1)[1]
    assert not degree_fit([2 ** n for n in range(1, 9)], 3)[1]
    c0, ok = degree_fit([n * n for n in range(1, 9)], 2)
    assert c0 == 1 and ok


def test_oracle_bad_arguments(capsys):
    assert run(capsys, "oracle", cases.path("collapse.trs"), "--max-size", 0, "--step-cap", 10)[0] == 2
    assert main(["oracle", str(cases.path("collapse.trs"))]) == 2
    capsys.readouterr()


# -- analyze -------------------------------------------------------------------


def test_analyze_bubble(capsys, tmp_path):
    out_json = tmp_path / "a.json"
    code, out = run(capsys, "analyze", cases.path("bubble.json"), "--json", out_json)
    assert code == 0
    a = json.loads(out_json.read_text())
    assert a["m_max"] == [[1, 1], [0, 1]]
    assert a["triangular"]["degree"] == 2
    assert a["m"] == 2
    assert a["exact_growth_degree"] == "1"
    assert "max product norm" in out and "norm of M_max^k" in out


def test_analyze_doubling(capsys, tmp_path):
    out_json = tmp_path / "a.json"
    code, out = run(capsys, "analyze", cases.path("doubling.json"), "--json", out_json)
    a = json.loads(out_json.read_text())
    assert not a["spectral"]["accepted"]
    assert a["growth"]["unbounded"]
    assert "unbounded" in out


def test_analyze_identity_only(capsys, tmp_path):
    out_json = tmp_path / "a.json"
    run(capsys, "analyze", cases.path("identity_only.json"), "--json", out_json)
    a = json.loads(out_json.read_text())
    assert a["growth"]["degree_estimate"] == 0
    assert a["m"] == a["dimension"] == 3


def test_analyze_budget_truncates(capsys, tmp_path):
    out_json = tmp_path / "a.json"
    code, out = run(capsys, "analyze", cases.path("bubble.json"), "--max-len", 12, "--budget", 64, "--json", out_json)
    assert code == 0 and "PARTIAL" in out
    a = json.loads(out_json.read_text())
    assert a["truncated"] and a["growth"]["max_len"] == 6


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "matcert.cli", "check", str(cases.path("collapse.trs")), str(cases.path("collapse.json"))],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0 and "CERTIFIED" in r.stdout
