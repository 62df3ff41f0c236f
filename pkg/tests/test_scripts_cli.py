import json
import subprocess
import sys

import pytest

from folproof.cli import main
from folproof.corpus import VARIABLES
from folproof.scripts import (
    Script, ScriptError, dumps_json, format_script, load_script, parse_script,
    script_from_json, script_to_json,
)

MP_SCRIPT = """\
# modus ponens from two theory members
relations: P/0, Q/0
theory: P
theory: P -> Q
0. P [theory 0]
1. P -> Q [theory 1]
2. Q [mp 0 1]
"""

HYP_SCRIPT = """\
theory: A -> Q
hypothesis: A
0. A [hyp]
1. A -> Q [theory 0]
2. Q [mp 0 1]
"""

BROKEN = MP_SCRIPT.replace("[mp 0 1]", "[mp 1 0]")


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in (("mp", MP_SCRIPT), ("hyp", HYP_SCRIPT), ("broken", BROKEN)):
        p = tmp_path / f"{name}.proof"
        p.write_text(text)
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_parse_script_inferred_signature():
    s = parse_script(HYP_SCRIPT)
    assert [n for n, _ in s.signature.relations] == ["A", "Q"]
    assert s.deduction.conclusion.rel == "Q"


@pytest.mark.parametrize("bad", [
    "0. P [theory]\n", "1. P [hyp]\n", "relations: P\n", "nonsense\n",
    "0. P [mp 0]\n", "0. P [theory 0]\ntheory: P\n",
])
def test_script_errors(bad):
    with pytest.raises(ScriptError):
        parse_script(bad)


def test_round_trips(dgen, corpus_sig):
    for _ in range(100):
        d = dgen.deduction()
        s = Script.of(d, corpus_sig, VARIABLES)
        text = format_script(s)
        back = parse_script(text)
        assert back.lines == d.lines and back.theory.formulas == d.theory.formulas
        assert back.hypothesis == d.hypothesis and format_script(back) == text
        js = script_from_json(json.loads(dumps_json(s)))
        assert script_to_json(js) == script_to_json(s)
        assert load_script(dumps_json(s)).lines == d.lines


def test_verify(capsys, files):
    code, out = run(capsys, "verify", files["mp"])
    assert code == 0 and out.out == "ok: Q\n"
    code, out = run(capsys, "--json", "verify", files["broken"])
    doc = json.loads(out.out)
    assert code == 1 and doc["first_failure"]["code"] == "MP_MISMATCH" and doc["schema"] == 1


def test_usage_errors(capsys, files, tmp_path):
    assert run(capsys, "verify", str(tmp_path / "missing"))[0] == 2
    bad = tmp_path / "bad.proof"
    bad.write_text("0. P -> [hyp]\n")
    assert run(capsys, "verify", str(bad))[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["search", "P"])
    assert e.value.code == 2


def test_json_is_deterministic(capsys, files):
    first = run(capsys, "--json", "dt", files["hyp"])[1].out
    second = run(capsys, "--json", "dt", files["hyp"])[1].out
    assert first == second
    doc = json.loads(first)
    assert doc["ok"] and [r["case"] for r in doc["trace"]][:1] == ["ii-hypothesis"]


def test_dt_pipes_into_verify(files):
    exe = [sys.executable, "-m", "folproof.cli"]
    dt = subprocess.run(exe + ["dt", files["hyp"]], capture_output=True, text=True, check=True)
    v = subprocess.run(exe + ["verify", "-"], input=dt.stdout, capture_output=True, text=True)
    assert v.returncode == 0 and v.stdout == "ok: (A -> Q)\n"


def test_concat_and_weaken(capsys, files, tmp_path):
    a = tmp_path / "a.proof"
    a.write_text("relations: A/0, Q/0\ntheory: A -> Q\ntheory: A\n0. A [theory 1]\n")
    b = tmp_path / "b.proof"
    b.write_text("relations: A/0, Q/0\ntheory: A -> Q\ntheory: A\nhypothesis: A\n"
                 "0. A [hyp]\n1. A -> Q [theory 0]\n2. Q [mp 0 1]\n")
    out = tmp_path / "c.proof"
    assert run(capsys, "concat", str(a), str(b), "-o", str(out))[0] == 0
    assert run(capsys, "verify", str(out))[1].out == "ok: Q\n"
    code, o = run(capsys, "weaken", files["mp"], "--hyp", "Q")
    assert code == 0 and "hypothesis: Q" in o.out
    # R is not declared in the script: a usage error, not a proof error
    assert run(capsys, "weaken", files["mp"], "--hyp", "R(x)")[0] == 2
    wide = tmp_path / "wide.proof"
    wide.write_text("relations: P/0, R/1\ntheory: P\n0. P [theory 0]\n")
    code, o = run(capsys, "weaken", str(wide), "--hyp", "R(x)")
    assert code == 1 and "HYP_OPEN" in o.out


def test_goedelize_and_check_b(capsys, files, tmp_path):
    code, o = run(capsys, "goedelize", files["mp"])
    x = o.out.strip()
    y = run(capsys, "goedelize", "Q", "--theory", files["mp"])[1].out.strip()
    wrong = run(capsys, "goedelize", "P", "--theory", files["mp"])[1].out.strip()
    assert run(capsys, "check-b", x, y, "--theory", files["mp"])[1].out == "true\n"
    code, o = run(capsys, "check-b", x, wrong, "--theory", files["mp"])
    assert code == 1 and o.out == "false: CONCLUSION_MISMATCH\n"
    big = tmp_path / "x.txt"
    big.write_text(x + "\n")
    assert run(capsys, "check-b", "@" + str(big), y, "--theory", files["mp"])[0] == 0
    pp = run(capsys, "goedelize", "P", "--codec", "prime-power")[1].out
    assert pp == "512\n"


def test_search_cli(capsys, files):
    code, o = run(capsys, "search", "Q", "--theory", files["mp"], "--max-len", "3")
    assert code == 0 and "[mp" in o.out and parse_script(o.out).deduction.conclusion.rel == "Q"
    code, o = run(capsys, "--json", "search", "Q", "--max-len", "3")
    assert code == 1 and json.loads(o.out)["status"] == "bounds-exhausted"


def test_models_check(capsys, files):
    code, o = run(capsys, "--json", "models-check", files["mp"], "--max-domain", "2")
    assert code == 0 and json.loads(o.out)["counterexamples"] == []
    code, o = run(capsys, "models-check", files["broken"])
    assert code == 1 and o.out.startswith("not a verified deduction")


def test_dt_lone_hypothesis(capsys, tmp_path):
    p = tmp_path / "a.proof"
    p.write_text("hypothesis: A\n0. A [hyp]\n")
    code, o = run(capsys, "dt", str(p))
    s = parse_script(o.out)
    assert code == 0 and len(s.lines) == 5 and s.hypothesis is None
    assert o.out.splitlines()[-1] == "4. (A -> A) [mp 3 2]"
