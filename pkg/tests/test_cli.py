import json
import subprocess
import sys

import pytest

from typika.cli import main

from conftest import GOLDEN, KBS, SET3_TEXT

SET3 = str(KBS / "set3.kb")
SET1 = str(KBS / "set1.kb")
SET3_QUERIES = str(KBS / "set3_queries.txt")
SET1_QUERIES = str(KBS / "set1_queries.txt")


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, argv):
    code, out, err = run(capsys, argv)
    return code, json.loads(out), err


# ------------------------------------------------------------- check


def test_check_consistent(capsys):
    code, out, err = run(capsys, ["check", SET3])
    assert (code, out, err) == (0, "consistent\n", "")


def test_check_inconsistent(capsys, tmp_path):
    bad = tmp_path / "bad.kb"
    bad.write_text("A => bot\ntop => A\n")
    code, out, _ = run(capsys, ["check", str(bad)])
    assert (code, out) == (1, "inconsistent\n")


def test_check_json_keys(capsys):
    code, doc, _ = run_json(capsys, ["check", "--json", SET3])
    assert code == 0
    assert set(doc) == {"command", "kb", "consistent", "timingMs"}
    assert doc["command"] == "check" and doc["kb"] == SET3
    assert doc["consistent"] is True
    assert isinstance(doc["timingMs"], (int, float))


def test_check_abox(capsys, tmp_path):
    ok = tmp_path / "ok.kb"
    ok.write_text(SET3_TEXT + "T(Penguin)(pingu)\n")
    assert run(capsys, ["check", str(ok)])[0] == 0
    clash = tmp_path / "clash.kb"
    clash.write_text(SET3_TEXT + "T(Penguin)(pingu)\nFly(pingu)\n")
    code, out, _ = run(capsys, ["check", str(clash)])
    assert (code, out) == (1, "inconsistent\n")


# -------------------------------------------------------------- rank


def test_rank_golden_bytes(capsys):
    code, out, err = run(capsys, ["rank", SET1])
    assert code == 0 and err == ""
    assert out == (GOLDEN / "set1_rank.txt").read_text()


def test_rank_json(capsys):
    code, doc, _ = run_json(capsys, ["rank", "--json", SET3])
    assert code == 0
    assert set(doc) == {"command", "kb", "ranks", "timingMs"}
    assert doc["ranks"]["levels"] == [
        ["T(Bird) => HasNiceFeather", "T(Bird) => Fly", "T(Penguin) => not Fly"],
        ["T(Penguin) => not Fly"],
        [],
    ]
    assert doc["ranks"]["values"] == {"Bird": 0, "Penguin": 1}


def test_rank_infinite_value(capsys, tmp_path):
    kb = tmp_path / "odd.kb"
    kb.write_text("T(A) => C\nT(A) => not C\n")
    code, doc, _ = run_json(capsys, ["rank", "--json", str(kb)])
    assert code == 0
    assert doc["ranks"]["values"] == {"A": "inf"}
    assert doc["ranks"]["levels"] == [["T(A) => C", "T(A) => not C"]]


# ------------------------------------------------------------- query


def test_query_exit_codes(capsys):
    for sem, expect in (("rc", 1), ("single-pref", 1), ("enriched", 0)):
        code, out, _ = run(
            capsys,
            ["query", "--semantics", sem, SET3, "T(Penguin) => HasNiceFeather"])
        assert code == expect, sem
        assert out == ("entailed\n" if expect == 0 else "not entailed\n")


def test_query_json_keys(capsys):
    code, doc, _ = run_json(
        capsys,
        ["query", "--json", "--semantics", "rc", SET3, "T(Bird) => Fly"])
    assert code == 0
    assert set(doc) == {"command", "kb", "query", "semantics", "entailed", "timingMs"}
    assert doc["query"] == "T(Bird) => Fly"
    assert doc["entailed"] is True and doc["semantics"] == "rc"


def test_query_emit_model_witness(capsys):
    code, doc, _ = run_json(
        capsys,
        ["query", "--json", "--semantics", "enriched", "--emit-model",
         SET3, "T(Penguin) => HasNiceFeather"])
    assert code == 0
    w = doc["witness"]
    assert set(w) == {"domain", "roleEdges", "aspectRanks", "globalRanks"}
    assert w["roleEdges"] == {}
    assert len(w["domain"]) == 12
    # re-derive the verdict from the emitted document alone
    concepts = {e["id"]: set(e["concepts"]) for e in w["domain"]}
    penguins = [i for i in concepts if "Penguin" in concepts[i]]
    lo = min(w["globalRanks"][i] for i in penguins)
    best = [i for i in penguins if w["globalRanks"][i] == lo]
    assert best and all("HasNiceFeather" in concepts[i] for i in best)
    assert set(w["aspectRanks"]) == {"Bird", "Fly", "HasNiceFeather", "Penguin", "not Fly"}


def test_query_emit_countermodel(capsys):
    code, doc, _ = run_json(
        capsys,
        ["query", "--json", "--semantics", "single-pref", "--emit-model",
         SET3, "T(Penguin) => HasNiceFeather"])
    assert code == 1
    w = doc["witness"]
    assert "aspectRanks" in w and w["aspectRanks"] == {}
    concepts = {e["id"]: set(e["concepts"]) for e in w["domain"]}
    penguins = [i for i in concepts if "Penguin" in concepts[i]]
    lo = min(w["globalRanks"][i] for i in penguins)
    offenders = [i for i in penguins
                 if w["globalRanks"][i] == lo and "HasNiceFeather" not in concepts[i]]
    assert offenders


def test_query_human_never_prints_timing(capsys):
    _, out, _ = run(capsys, ["query", "--semantics", "enriched", "--emit-model",
                             SET3, "T(Penguin) => not Fly"])
    assert "timing" not in out.lower()
    assert out.startswith("entailed\nwitness model:\n")


def test_query_role_kb(capsys, tmp_path):
    kb = tmp_path / "role.kb"
    kb.write_text("T(A) => exists r. B\n")
    code, doc, _ = run_json(
        capsys,
        ["query", "--json", "--semantics", "enriched", "--emit-model",
         str(kb), "T(A) => exists r. B"])
    assert code == 0
    assert doc["witness"]["roleEdges"].keys() == {"r"}
    assert doc["witness"]["roleEdges"]["r"], "at least one r edge"


# ------------------------------------------------------ error handling


def test_missing_file_is_an_error(capsys):
    code, out, err = run(capsys, ["check", "no_such.kb"])
    assert code == 2 and out == "" and "cannot read input" in err


def test_syntax_error_in_query(capsys):
    code, _, err = run(
        capsys, ["query", "--semantics", "rc", SET3, "T(T(Bird)) => Fly"])
    assert code == 2 and "syntax error" in err


def test_syntax_error_reports_position(capsys, tmp_path):
    kb = tmp_path / "bad.kb"
    kb.write_text("Bird => Fly\nFly => ?\n")
    code, _, err = run(capsys, ["check", str(kb)])
    assert code == 2
    assert "line 2" in err and "column 8" in err


def test_rank_bound_zero_overflows(capsys):
    code, _, err = run(
        capsys,
        ["query", "--semantics", "single-pref", "--rank-bound", "0",
         SET3, "T(Bird) => Fly"])
    assert code == 2 and "rank" in err


def test_inconsistent_kb_by_semantics(capsys, tmp_path):
    kb = tmp_path / "bad.kb"
    kb.write_text("A => bot\ntop => A\nT(A) => B\n")
    # rank-based entailment answers vacuously; model semantics refuse
    code, out, _ = run(capsys, ["query", "--semantics", "rc", str(kb), "T(A) => B"])
    assert (code, out) == (0, "entailed\n")
    for sem in ("single-pref", "enriched"):
        code, _, err = run(capsys, ["query", "--semantics", sem, str(kb), "T(A) => B"])
        assert code == 2 and "consistent" in err


def test_env_rank_bound(capsys, monkeypatch):
    monkeypatch.setenv("TYPIKA_RANK_BOUND", "0")
    code, _, err = run(
        capsys, ["query", "--semantics", "single-pref", SET3, "T(Bird) => Fly"])
    assert code == 2 and "rank" in err
    # an explicit flag beats the environment
    code, out, _ = run(
        capsys,
        ["query", "--semantics", "single-pref", "--rank-bound", "4",
         SET3, "T(Bird) => Fly"])
    assert (code, out) == (0, "entailed\n")


def test_env_rank_bound_must_be_integer(capsys, monkeypatch):
    monkeypatch.setenv("TYPIKA_RANK_BOUND", "lots")
    code, _, err = run(
        capsys, ["query", "--semantics", "single-pref", SET3, "T(Bird) => Fly"])
    assert code == 2 and "TYPIKA_RANK_BOUND" in err


def test_unknown_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", SET3])
    assert exc.value.code == 2


# ----------------------------------------------------------- compare


def test_compare_set3_rows(capsys):
    code, doc, _ = run_json(capsys, ["compare", "--json", SET3, SET3_QUERIES])
    assert code == 0
    assert set(doc) == {"command", "kb", "rows", "timingMs"}
    assert doc["timingMs"] == 0
    assert doc["rows"] == [
        {"query": "T(Penguin) => not Fly", "rc": True, "singlePref": True,
         "enriched": True, "violation": False},
        {"query": "T(Penguin) => HasNiceFeather", "rc": False, "singlePref": False,
         "enriched": True, "violation": False},
        {"query": "T(Bird) => Fly", "rc": True, "singlePref": True,
         "enriched": True, "violation": False},
    ]


def test_compare_human_output(capsys):
    code, out, _ = run(capsys, ["compare", SET3, SET3_QUERIES])
    assert code == 0
    assert out.splitlines() == [
        "[ok] T(Penguin) => not Fly | rc=yes single-pref=yes enriched=yes",
        "[ok] T(Penguin) => HasNiceFeather | rc=no single-pref=no enriched=yes",
        "[ok] T(Bird) => Fly | rc=yes single-pref=yes enriched=yes",
        "queries=3 rc=2 single-pref=2 enriched=3 violations=0 errors=0",
    ]


def test_compare_set1_all_entailed(capsys):
    code, doc, _ = run_json(capsys, ["compare", "--json", SET1, SET1_QUERIES])
    assert code == 0
    assert len(doc["rows"]) == 4
    for row in doc["rows"]:
        assert row["rc"] and row["singlePref"] and row["enriched"]
        assert not row["violation"]


def test_compare_byte_identical(capsys):
    _, first, _ = run(capsys, ["compare", "--json", SET3, SET3_QUERIES])
    _, second, _ = run(capsys, ["compare", "--json", SET3, SET3_QUERIES])
    assert first == second
    _, third, _ = run(capsys, ["compare", "--json", SET1, SET1_QUERIES])
    _, fourth, _ = run(capsys, ["compare", "--json", SET1, SET1_QUERIES])
    assert third == fourth


def test_compare_bad_line_is_isolated(capsys, tmp_path):
    qf = tmp_path / "queries.txt"
    qf.write_text("T(Bird) => Fly\nBird and Fly\n# comment\n\nT(Penguin) => not Fly\n")
    code, doc, _ = run_json(capsys, ["compare", "--json", SET3, str(qf)])
    assert code == 0
    assert len(doc["rows"]) == 3
    assert doc["rows"][0]["rc"] is True
    assert set(doc["rows"][1]) == {"query", "error"}
    assert doc["rows"][2]["rc"] is True
    code, out, _ = run(capsys, ["compare", SET3, str(qf)])
    assert "[error] Bird and Fly:" in out
    assert out.splitlines()[-1].endswith("violations=0 errors=1")


# -------------------------------------------------------- entry points


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "typika", "check", SET3],
        capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "consistent\n"


def test_console_script():
    proc = subprocess.run(
        ["typika", "query", "--semantics", "enriched", SET3,
         "T(Penguin) => HasNiceFeather"],
        capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "entailed\n"
