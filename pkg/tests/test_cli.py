"""CLI contract: golden outputs, exit codes and end-to-end agreement with the library."""

import json
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from asw_moduli import components, enumerate_partitions, irreducible
from asw_moduli.cli import main

from corpus import nonempty_tuples

HERE = os.path.dirname(__file__)
DATA = os.path.join(HERE, "data")
GOLDEN = os.path.join(HERE, "golden")


def data(name):
    return os.path.join(DATA, name)


# name -> argv
GOLDEN_CASES = {
    "analyze_z25": ["analyze", data("z25.json")],
    "analyze_k2": ["analyze", data("k2_m.json")],
    "analyze_z25_table": ["analyze", data("z25.json"), "--format", "table"],
    "enumerate_4_8": ["enumerate", "4,8", "-p", "2"],
    "enumerate_4_8_table": ["enumerate", "4,8", "-p", "2", "--components", "--format", "table"],
    "enumerate_2": ["enumerate", "2", "-p", "3"],
    "enumerate_4_8_strata": ["enumerate", "4,8", "-p", "2", "--strata", "2,3"],
    "components_4_8": ["components", "4,8", "-p", "2"],
    "irreducible_3_8": ["irreducible", "3,8", "-p", "3"],
    "split_9_53": ["split-pop", "9,53", "-p", "5"],
    "verify_order4": ["verify-deformation", data("order4_special.json"), data("order4_family.json")],
    "verify_order4_table": ["verify-deformation", data("order4_special.json"), data("order4_family.json"),
                            "--format", "table"],
    "exactness_17_18_5": ["exactness", "17", "18", "5"],
    "exactness_17_18_5_table": ["exactness", "17", "18", "5", "--format", "table"],
    "graph_4_8": ["graph", "4,8", "-p", "2"],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name, capsys):
    code, out, _ = run(GOLDEN_CASES[name], capsys)
    assert code == 0
    path = os.path.join(GOLDEN, name + ".txt")
    if os.environ.get("ASW_UPDATE_GOLDEN"):
        with open(path, "w") as fh:
            fh.write(out)
    with open(path) as fh:
        assert out == fh.read()


def test_golden_values(capsys):
    rep = json.loads(run(GOLDEN_CASES["analyze_z25"], capsys)[1])
    assert rep["format_version"] == 1
    assert rep["datum"] == {"rows": [[2, 6], [2, 8], [0, 13]], "points": ["0", "1", "2"]}
    assert rep["levels"][0]["datum"] == [[2], [2]]
    assert json.loads(run(GOLDEN_CASES["analyze_k2"], capsys)[1])["genus"] == [3, 30]
    rep = json.loads(run(GOLDEN_CASES["enumerate_4_8"], capsys)[1])
    assert len(rep["vertices"]) == 3 and not rep["irreducible"]
    assert sorted(c["dim_cov"] for c in rep["components"]) == [8, 8]
    assert json.loads(run(GOLDEN_CASES["enumerate_2"], capsys)[1])["irreducible"]
    rep = json.loads(run(GOLDEN_CASES["verify_order4"], capsys)[1])
    assert rep["valid"] and rep["type"] == "[4,8] -> [[2,3],[2,3],[0,2]]"
    assert json.loads(run(GOLDEN_CASES["split_9_53"], capsys)[1])["rows"] == [[4, 18], [5, 25], [0, 5], [0, 5]]
    assert run(GOLDEN_CASES["exactness_17_18_5_table"], capsys)[1] == "no a; closure-certified\n"


def test_large_enumeration_lists_pop_matrix(capsys):
    code, out, _ = run(["enumerate", "9,53", "-p", "5", "--components", "--format", "table"], capsys)
    assert code == 0
    assert "[[5,25],[4,18],[0,5],[0,5]]" in out


@pytest.mark.parametrize("argv,code,needle", [
    (["analyze", data("constant.json")], 1, "order drop"),
    (["analyze", data("unsplit.json")], 3, "x^2+1"),
    (["analyze", '{"p": 3, "entries": ["1/(x-"]}'], 2, "parse error"),
    (["analyze", "/nonexistent.json"], 2, "parse error"),
    (["enumerate", "3,3", "-p", "2"], 4, "inadmissible"),
    (["enumerate", "4,x", "-p", "2"], 2, "parse error"),
    (["verify-deformation", '{"p":2,"field":"F2","entries":["1/x^3","1/x^5"]}', data("order4_family.json")],
     5, "special fiber"),
])
def test_exit_codes(argv, code, needle, capsys):
    got, out, err = run(argv, capsys)
    assert got == code
    assert needle in err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["enumerate", "4,8"])
    assert info.value.code == 2


def test_jobs_do_not_change_output(capsys):
    a = run(["enumerate", "6,14", "-p", "2"], capsys)[1]
    b = run(["enumerate", "6,14", "-p", "2", "--jobs", "2"], capsys)[1]
    assert a == b


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "asw_moduli.cli", "exactness", "17", "18", "5", "--format", "table"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "no a; closure-certified\n"


@settings(max_examples=60)
@given(st.sampled_from(nonempty_tuples()))
def test_cli_agrees_with_library(dp):
    d, p = dp
    arg = ",".join(map(str, d))
    rep = json.loads(_capture(["irreducible", arg, "-p", str(p)]))
    assert rep["irreducible"] == irreducible(d, p)
    assert rep["component_count"] == len(components(d, p))
    if len(enumerate_partitions(d, p)) <= 150:
        rep = json.loads(_capture(["enumerate", arg, "-p", str(p)]))
        assert [v["rows"] for v in rep["vertices"]] == [[list(r) for r in M.rows] for M in enumerate_partitions(d, p)]


def _capture(argv):
    import io
    from contextlib import redirect_stdout
    buf = io.StringIO()
    with redirect_stdout(buf):
        assert main(argv) == 0
    return buf.getvalue()
