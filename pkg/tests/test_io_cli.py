import io as stdio
import json
from fractions import Fraction
from pathlib import Path

import pytest

from stochauto import catalog, io
from stochauto.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*argv):
    out = stdio.StringIO()
    code = main(list(map(str, argv)), stdout=out)
    return code, out.getvalue()


# ---------------------------------------------------------------- file format


@pytest.mark.parametrize("name", sorted({**catalog.TRANSDUCERS, **catalog.ACCEPTORS}))
def test_round_trip(name):
    obj = {**catalog.TRANSDUCERS, **catalog.ACCEPTORS}[name]()
    text = io.dumps(obj)
    again = io.loads(text)
    assert again == obj
    assert io.dumps(again) == text


def test_shipped_data_matches_catalog(tmp_path):
    written = catalog.export(tmp_path)
    assert sorted(p.name for p in written) == sorted(p.name for p in DATA.glob("*.json"))
    for p in written:
        assert (DATA / p.name).read_bytes() == p.read_bytes(), p.name


def test_bad_mass_names_the_pair():
    doc = io.to_dict(catalog.two_state_drift())
    doc["kernels"]["a"]["b"][0] = ["9/8", "0"]
    with pytest.raises(io.ParseError, match=r"a=a, s=s1"):
        io.loads(json.dumps(doc))


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d["kernels"]["a"]["b"][0].__setitem__(0, "1/x"), r"kernels\.a\.b\[0\]\[0\]"),
        (lambda d: d["kernels"]["a"]["b"][0].__setitem__(0, 0.5), r"expected a rational string"),
        (lambda d: d["kernels"]["a"].__setitem__("q", [["1", "0"], ["0", "1"]]), r"unknown output symbol"),
        (lambda d: d["kernels"].__setitem__("z", {}), r"unknown input symbol"),
        (lambda d: d.__setitem__("kind", "robot"), r"kind"),
        (lambda d: d.pop("states"), r"states"),
        (lambda d: d["kernels"]["a"]["b"].pop(), r"expected 2 rows"),
    ],
)
def test_parse_errors_carry_context(mutate, message):
    doc = io.to_dict(catalog.two_state_drift())
    mutate(doc)
    with pytest.raises(io.ParseError, match=message):
        io.loads(json.dumps(doc))


def test_json_syntax_error_has_line():
    with pytest.raises(io.ParseError, match="line 3, column 1"):
        io.loads('{\n  "kind": \n}')


def test_acceptor_vectors_checked():
    doc = io.to_dict(catalog.parity_acceptor())
    doc["final"] = ["1/2", "0"]
    with pytest.raises(io.ParseError, match="final entry"):
        io.loads(json.dumps(doc))
    assert io.loads(json.dumps(doc), check=False).final == (Fraction(1, 2), 0)


# ---------------------------------------------------------------- CLI


def test_equiv_and_isomorphic_exit_codes():
    code, out = run("equiv", DATA / "evenA.json", DATA / "evenB.json")
    assert code == 0 and "S-equivalent: true" in out
    code, out = run("isomorphic", DATA / "evenA.json", DATA / "evenB.json")
    assert code == 1 and "isomorphic: false" in out
    code, _ = run("equiv", DATA / "evenA.json", DATA / "evenB.json", "--covering")
    assert code == 0


def test_equiv_states():
    assert run("equiv", DATA / "four_state_reducible.json", "--states", "s3,s4")[0] == 0
    assert run("equiv", DATA / "four_state_reducible.json", "--states", "1,2")[0] == 1
    code, out = run("equiv", DATA / "four_state_reducible.json")
    assert "{s3,s4}" in out
    assert run("equiv", DATA / "evenA.json", "--dists", "1/2,0,1/2,0,0;0,1/2,0,1/2,0")[0] == 0


def test_lang_matches_enumeration_oracle():
    code, out = run("--json", "lang", DATA / "padic3.json", "--cutpoint", "1/2", "--maxlen", "3")
    assert code == 0
    got = json.loads(out)["members"]
    want = []
    for L in range(4):
        for n in range(3**L):
            digits = "".join("012"[(n // 3**k) % 3] for k in reversed(range(L)))
            value = sum((Fraction(int(d), 3 ** (L + 1 - i)) for i, d in enumerate(digits, 1)), Fraction(0))
            if value > Fraction(1, 2):
                want.append(digits)
    assert got == want


def test_hmatrix_json_and_decimal():
    code, out = run("hmatrix", DATA / "four_state_reducible.json", "--json")
    doc = json.loads(out)
    assert doc["labels"] == ["(ε|ε)", "(b|a)"]
    assert doc["H"] == [["1", "1/3"], ["1", "2/3"], ["1", "1/2"], ["1", "1/2"]]
    code, out = run("--decimal", "2", "hmatrix", DATA / "four_state_reducible.json")
    assert "1.00 0.33" in out


def test_reduce_writes_canonical_file(tmp_path):
    target = tmp_path / "b4.json"
    code, _ = run("reduce", DATA / "four_state_reducible.json", "--representatives", "s4", "-o", target)
    assert code == 0
    assert target.read_bytes() == (DATA / "reduced_by_s4.json").read_bytes()
    code, out = run("reduce", DATA / "four_state_reducible.json")
    assert out == (DATA / "reduced_by_s3.json").read_text()


def test_transform_verbs():
    code, out = run("minimize", DATA / "convex_three_state.json", "--json")
    assert json.loads(out)["states"] == ["s2", "s3"]
    code, out = run("classify", DATA / "observable_funnel.json", "--json")
    doc = json.loads(out)
    assert doc["observable"] and doc["reduced"] and not doc["minimal"]
    code, out = run("to-moore", DATA / "reduced_by_s3.json", "--json")
    assert len(json.loads(out)["automaton"]["states"]) == 6
    assert run("check-hom", DATA / "hom_source.json", DATA / "hom_target.json", "--map", "s1>t1,s2>t2,s3>t3,s4>t3")[0] == 0
    assert run("check-hom", DATA / "hom_source.json", DATA / "hom_target.json", "--map", "s1>t2,s2>t1,s3>t3,s4>t3")[0] == 1
    assert run("check-hom", DATA / "hom_source.json", DATA / "hom_target.json", "--map", "s1>t1")[0] == 2
    assert run("covers", DATA / "four_state_reducible.json", DATA / "reduced_by_s4.json")[0] == 0


def test_acceptor_verbs(tmp_path):
    code, out = run("accept", DATA / "drifting_acceptor.json", "--word", "aaa")
    assert code == 0 and out.strip() == "probability: 7/8"
    assert run("accept", DATA / "halving_acceptor.json", "--word", "a", "--cutpoint", "1/2")[0] == 1
    code, out = run("determinize0", DATA / "halving_acceptor.json", "--full-powerset", "--json")
    assert json.loads(out)["automaton"]["final"] == ["0", "0", "1", "1"]
    code, out = run("rescale", DATA / "halving_acceptor.json", "--from", "1/2", "--to", "1/4", "--json")
    assert json.loads(out)["automaton"]["initial"] == ["1/2", "0", "1/2"]
    code, out = run("normalize-init", DATA / "halving_acceptor.json", "--cutpoint", "1/2", "--json")
    assert json.loads(out)["automaton"]["states"][0] == "s0"
    code, out = run("padic", "--base", "3")
    assert out == (DATA / "padic3.json").read_text()
    code, out = run("isolation", DATA / "halving_acceptor.json", "--cutpoint", "1/2", "--maxlen", "4")
    assert code == 1 and "gap: 0" in out
    code, out = run("nerode", DATA / "nonregular_acceptor.json", "--cutpoint", "1/2", "--prefix", "2", "--suffix", "4")
    assert code == 0 and "classes:" in out


def test_eta_and_simulate():
    code, out = run("eta", DATA / "two_input_channel.json", "--input", "a", "--output", "c", "--start", "s1")
    assert "eta: 3/8 1/2" in out and "probability: 3/8" in out
    code, out = run("simulate", DATA / "drifting_acceptor.json", "--word", "aaa", "--samples", 20000, "--seed", 4)
    assert code == 0 and "exact: 7/8" in out
    again = run("simulate", DATA / "drifting_acceptor.json", "--word", "aaa", "--samples", 20000, "--seed", 4)[1]
    assert again == out
    code, out = run("simulate", DATA / "two_input_channel.json", "--word", "a", "--output", "c", "--samples", 20000, "--seed", 4)
    assert "exact: 3/8" in out


def test_channel_verbs(tmp_path):
    code, out = run("channel", "bsc", "--p", "1/4")
    assert code == 0 and io.loads(out).n == 1
    spec = {
        "states": ["g", "b"],
        "input": ["0", "1"],
        "output": ["0", "1"],
        "emission": {
            "0": {"g": {"0": "1", "1": "0"}, "b": {"0": "1/2", "1": "1/2"}},
            "1": {"g": {"0": "0", "1": "1"}, "b": {"0": "1/2", "1": "1/2"}},
        },
        "drift": [["1/2", "1/2"], ["1/2", "1/2"]],
    }
    path = tmp_path / "avc.json"
    path.write_text(json.dumps(spec))
    code, out = run("channel", "avc", "--spec", path)
    assert code == 0 and io.loads(out).states == ("g", "b")
    assert run("channel", "bsc")[0] == 2


def test_validate_verb(tmp_path):
    doc = io.to_dict(catalog.two_state_drift())
    doc["kernels"]["a"]["b"][0] = ["9/8", "0"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out = run("validate", bad)
    assert code == 1 and "a=a, s=s1" in out
    assert run("validate", DATA / "evenA.json")[0] == 0


def test_usage_errors(tmp_path):
    assert run()[0] == 2
    assert run("nosuchverb")[0] == 2
    assert run("hmatrix", tmp_path / "missing.json")[0] == 2
    assert run("accept", DATA / "evenA.json", "--word", "a")[0] == 2
    assert run("lang", DATA / "padic3.json", "--cutpoint", "1/2", "--maxlen", "12", "--budget", "100")[0] == 2


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("STOCHAUTO_BUDGET", "10")
    assert run("lang", DATA / "padic3.json", "--cutpoint", "1/2", "--maxlen", "3")[0] == 2
    monkeypatch.delenv("STOCHAUTO_BUDGET")
    assert run("lang", DATA / "padic3.json", "--cutpoint", "1/2", "--maxlen", "3")[0] == 0
