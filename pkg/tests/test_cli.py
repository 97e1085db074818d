import csv
import json
import subprocess
import sys

import pytest

from sagauss.bench import CSV_HEADER
from sagauss.cli import main

from support import CYCLE3_TEXT, PAIR_F3_TEXT

SAT_TEXT = "field 2\nvars 2\nx1 + x2 = 1\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def refute_to(files, text, name="sys.txt", *extra):
    src = files(name, text)
    out = src + ".proof"
    return main(["refute", src, "-o", out, *extra]), src, out


def test_refute_and_check(files, capsys):
    code, src, out = refute_to(files, CYCLE3_TEXT)
    assert code == 0
    assert "degree=4" in capsys.readouterr().out
    with open(out) as fh:
        last = json.loads(fh.read().splitlines()[-1])
    assert last["poly"] == "-1"
    assert main(["check", out, "--system", src]) == 0
    assert capsys.readouterr().out.startswith("OK refutation")
    assert main(["stats", out]) == 0
    assert "refutation=true" in capsys.readouterr().out


def test_refute_fp_mode_and_pair(files):
    code, src, out = refute_to(files, CYCLE3_TEXT, "c.txt", "--mode", "fp")
    assert code == 0 and main(["check", out, "--system", src]) == 0
    code, src, out = refute_to(files, PAIR_F3_TEXT, "p.txt")
    assert code == 0 and main(["check", out, "--system", src]) == 0


def test_refute_sat_and_bad_input(files, capsys):
    code, _, _ = refute_to(files, SAT_TEXT)
    assert code == 1
    assert capsys.readouterr().out.strip() == "SAT x=(1,0)"
    assert refute_to(files, "field 4\nvars 1\n", "bad.txt")[0] == 2
    assert main(["refute", "/nonexistent/sys.txt", "-o", "/tmp/x"]) == 2
    assert refute_to(files, PAIR_F3_TEXT, "p.txt", "--mode", "f2")[0] == 2


def test_check_mismatch_and_tamper(files, capsys):
    _, src, out = refute_to(files, CYCLE3_TEXT)
    other = files("other.txt", CYCLE3_TEXT.replace("1*x1 + 1*x3 = 1", "1*x1 + 1*x3 = 0"))
    assert main(["check", out, "--system", other]) == 4
    pair = files("pair.txt", PAIR_F3_TEXT)
    assert main(["check", out, "--system", pair]) == 4

    lines = open(out).read().splitlines()
    obj = json.loads(lines[20])
    obj["poly"] = obj["poly"] + " + x1" if obj["poly"] != "0" else "x1"
    lines[20] = json.dumps(obj)
    bad = files("bad.proof", "\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["check", bad, "--system", src]) == 5
    assert f"line {obj['id']}" in capsys.readouterr().err

    truncated = files("trunc.proof", "\n".join(open(out).read().splitlines()[:-1]) + "\n")
    assert main(["check", truncated, "--system", src]) == 5
    assert main(["check", files("junk.proof", "{"), "--system", src]) == 2


def test_solve_and_oracle(files, capsys):
    assert main(["solve", files("c.txt", CYCLE3_TEXT)]) == 0
    assert capsys.readouterr().out.strip() == "UNSAT certificate J={1,2,3} y=(1,1,1)"
    assert main(["solve", files("p.txt", PAIR_F3_TEXT)]) == 0
    assert "y=(2,2)" in capsys.readouterr().out
    assert main(["solve", files("s.txt", SAT_TEXT)]) == 1
    assert capsys.readouterr().out.startswith("SAT")

    assert main(["oracle", files("c2.txt", CYCLE3_TEXT)]) == 0
    assert capsys.readouterr().out.strip() == "UNSAT after 8 assignments"
    assert main(["oracle", files("s2.txt", SAT_TEXT)]) == 1
    assert main(["oracle", files("c3.txt", CYCLE3_TEXT), "--cap", "4"]) == 2


def test_bench_csv(tmp_path):
    path = tmp_path / "bench.csv"
    assert main(["bench", "--family", "tseitin-cycle", "--n", "4:5", "--field", "2", "--csv", str(path)]) == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == CSV_HEADER == ["family", "n", "p", "w", "length", "size", "degree", "lines", "ms"]
    assert [r[:4] for r in rows[1:]] == [["tseitin-cycle", "4", "2", "2"], ["tseitin-cycle", "5", "2", "2"]]
    assert main(["bench", "--family", "tseitin-cycle", "--n", "4:4", "--field", "3", "--csv", str(path)]) == 2


def test_bench_random_record_frozen(tmp_path):
    # frozen from the first run; ms is wall time and not compared
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        assert main(["bench", "--family", "random", "--n", "6:6", "--field", "3", "--w", "3", "--seed", "42", "--csv", str(path)]) == 0
    a, b = (list(csv.DictReader(path.open())) for path in paths)
    strip = [{k: v for k, v in r.items() if k != "ms"} for r in a]
    assert strip == [{k: v for k, v in r.items() if k != "ms"} for r in b]
    assert strip == [{"family": "random", "n": "6", "p": "3", "w": "3", "length": "1598", "size": "185233", "degree": "8", "lines": "1648"}]


def test_module_entry_point(tmp_path):
    src = tmp_path / "c.txt"
    src.write_text(CYCLE3_TEXT)
    res = subprocess.run([sys.executable, "-m", "sagauss", "solve", str(src)], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("UNSAT")
