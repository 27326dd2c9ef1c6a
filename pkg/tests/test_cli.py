import csv
import io
import json
import subprocess
import sys

import pytest

from pwindex.cli import main

from conftest import DATA

WORKED = str(DATA / "worked_example.txt")
WALTMAN = str(DATA / "waltman.txt")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def chain(tmp_path):
    p = tmp_path / "chain.txt"
    p.write_text("PT\tAU\tUT\nJ\tW, W; A, A\tP1\nJ\tA, A; B, B\tP2\n")
    w = tmp_path / "w.txt"
    w.write_text("W, W\n")
    return str(p), str(w)


class TestListAuthors:
    def test_worked_example(self, capsys):
        code, out, _ = run(capsys, "list-authors", "--input", WORKED)
        assert code == 0
        assert out.splitlines() == [
            "author,papers,coauthors",
            "BOEKHOUT H,1,2",
            "MAHLCK P,1,0",
            "VAN DER WEIJDEN I,1,2",
            "WALTMAN L,1,2",
        ]

    def test_no_inputs(self, capsys):
        code, _, err = run(capsys, "list-authors")
        assert code == 2 and "no input" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "list-authors", "--input", str(tmp_path / "nope.txt"))
        assert code == 2

    def test_format_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("PT\tTI\nJ\tx\n")
        assert run(capsys, "list-authors", "--input", str(bad))[0] == 3
        assert run(capsys, "list-authors", "--input", str(bad), "--format", "plaintext")[0] == 0

    def test_merge_map(self, capsys, tmp_path):
        data = tmp_path / "d.txt"
        data.write_text(
            "PT\tAU\tUT\n"
            "J\tvan Raan, AFJ; Moed, HF\tW1\n"
            "J\tVanRaan, AFJ\tW2\n"
            "J\tvan Raan, A; Egghe, L\tW3\n"
        )
        mm = tmp_path / "m.csv"
        mm.write_text("variant,canonical\nVANRAAN AFJ,VAN RAAN AFJ\n")
        code, out, _ = run(capsys, "list-authors", "--input", str(data), "--merge-map", str(mm))
        assert code == 0
        assert [r["author"] for r in _csv(out)] == ["EGGHE L", "MOED HF", "VAN RAAN A", "VAN RAAN AFJ"]
        mm.write_text("VANRAAN AFJ,VAN RAAN AFJ\nVAN RAAN A,VAN RAAN AFJ\n")
        code, out, _ = run(capsys, "list-authors", "--input", str(data), "--merge-map", str(mm))
        assert [(r["author"], r["papers"], r["coauthors"]) for r in _csv(out)] == [
            ("EGGHE L", "1", "1"), ("MOED HF", "1", "1"), ("VAN RAAN AFJ", "3", "2"),
        ]

    def test_cyclic_merge_map(self, capsys, tmp_path):
        mm = tmp_path / "m.csv"
        mm.write_text("A X,B X\nB X,A X\n")
        code, _, err = run(capsys, "list-authors", "--input", WORKED, "--merge-map", str(mm))
        assert code == 3 and "cyclic" in err


class TestCompute:
    def test_worked_example(self, capsys):
        code, out, err = run(capsys, "compute", "--input", WORKED, "--laureates", WALTMAN)
        assert code == 0
        rows = [(r["author"], r["pwi"], r["papers"], r["coauthors"], r["laureate"]) for r in _csv(out)]
        assert rows == [
            ("WALTMAN L", "1.00", "1", "2", "yes"),
            ("BOEKHOUT H", "0.50", "1", "2", "no"),
            ("VAN DER WEIJDEN I", "0.50", "1", "2", "no"),
            ("MAHLCK P", "0.00", "1", "0", "no"),
        ]
        assert "laureates matched: 1 of 1" in err

    def test_json(self, capsys):
        code, out, _ = run(capsys, "compute", "--input", WORKED, "--laureates", WALTMAN,
                           "--out-format", "json")
        data = json.loads(out)
        assert [(d["author"], d["pwi"]) for d in data] == [
            ("WALTMAN L", 1.0), ("BOEKHOUT H", 0.5), ("VAN DER WEIJDEN I", 0.5), ("MAHLCK P", 0.0)]

    def test_nobody_matched(self, capsys, tmp_path):
        lst = tmp_path / "l.txt"
        lst.write_text("Garfield, Eugene\n")
        code, out, err = run(capsys, "compute", "--input", WORKED, "--laureates", str(lst))
        assert code == 0
        assert all(r["pwi"] == "0.00" for r in _csv(out))
        assert "WARNING" in err

    def test_default_laureates(self, capsys):
        code, out, _ = run(capsys, "compute", "--input", WORKED)
        assert code == 0
        assert _csv(out)[0]["author"] == "WALTMAN L"

    def test_chain_modes(self, capsys, chain):
        data, w = chain
        res = {}
        for mode in ("realized", "global"):
            code, out, _ = run(capsys, "compute", "--input", data, "--laureates", w,
                               "--mode", mode, "--out-format", "json")
            res[mode] = {d["author"]: d["pwi"] for d in json.loads(out)}
        assert res["realized"] == {"W W": 1.0, "A A": 0.625, "B B": 0.25}
        assert res["global"] == {"W W": 1.0, "A A": 1.0, "B B": 0.25}

    def test_out_file_and_side_outputs(self, capsys, tmp_path):
        out = tmp_path / "o.csv"
        edges = tmp_path / "e.csv"
        rep = tmp_path / "r.json"
        code, stdout, _ = run(capsys, "compute", "--input", WORKED, "--laureates", WALTMAN,
                              "--out", str(out), "--edges", str(edges), "--ingest-report", str(rep))
        assert code == 0 and stdout == ""
        assert out.read_text().startswith("author,pwi,papers")
        assert edges.read_text().splitlines()[0] == "author_a,author_b"
        assert json.loads(rep.read_text())["records_kept"] == 2

    def test_plaintext_input_same_result(self, capsys):
        a = run(capsys, "compute", "--input", WORKED, "--laureates", WALTMAN)[1]
        b = run(capsys, "compute", "--input", str(DATA / "sample_plaintext.txt"), "--laureates", WALTMAN)[1]
        assert a == b


@pytest.fixture
def six_authors(tmp_path):
    # Six authors, all co-authoring with laureate L on varying numbers of papers.
    lines = ["PT\tAU\tUT"]
    n = 0
    for name, k in [("Aa, A", 1), ("Bb, B", 2), ("Cc, C", 3), ("Dd, D", 4)]:
        for _ in range(k):
            n += 1
            lines.append(f"J\tLl, L; {name}\tW{n}")
    n += 1
    lines.append(f"J\tEe, E\tW{n}")
    data = tmp_path / "d.txt"
    data.write_text("\n".join(lines) + "\n")
    lau = tmp_path / "l.txt"
    lau.write_text("Ll, L\n")
    return str(data), str(lau)


class TestCorrelate:
    def test_hand_rows(self, capsys, tmp_path, six_authors):
        data, lau = six_authors
        # PWI: A .5, B 1, C 1.5, D 2, E 0, L 10 (10 own papers).
        scores = tmp_path / "s.csv"
        scores.write_text("author,score\nAA A,1\nBB B,3\nCC C,2\nDD D,4\nEE E,0\nLL L,5\n")
        code, out, _ = run(capsys, "correlate", "--input", data, "--laureates", lau,
                           "--scores", str(scores), "--thresholds", "1,2,3,10")
        assert code == 0
        rows = _csv(out)
        assert [r["n_authors"] for r in rows] == ["6", "4", "3", "1"]
        # t=1: pwi ranks 2,3,4,5,1,6 vs score ranks 2,4,3,5,1,6 -> 1 - 6*2/210
        assert float(rows[0]["rho"]) == pytest.approx(1 - 12 / 210, abs=1e-12)
        # t=2: B, C, D, L -> pwi ranks 1,2,3,4 vs 2,1,3,4 -> 1 - 6*2/60
        assert float(rows[1]["rho"]) == pytest.approx(0.8, abs=1e-12)
        # t=3: C, D, L -> perfectly concordant
        assert float(rows[2]["rho"]) == pytest.approx(1.0, abs=1e-12)
        assert rows[3]["rho"] == ""

    def test_scores_equal_pwi(self, capsys, tmp_path, six_authors):
        data, lau = six_authors
        scores = tmp_path / "s.csv"
        scores.write_text("AA A,0.5\nBB B,1\nCC C,1.5\nDD D,2\nEE E,0\nLL L,10\n")
        code, out, _ = run(capsys, "correlate", "--input", data, "--laureates", lau,
                           "--scores", str(scores), "--out-format", "json")
        rows = json.loads(out)["rows"]
        assert [r["threshold"] for r in rows] == [1, 10, 20, 30, 40, 50]
        for r in rows:
            assert r["rho"] == 1.0 if r["n_authors"] >= 2 else r["rho"] is None

    def test_single_threshold(self, capsys, tmp_path, six_authors):
        data, lau = six_authors
        scores = tmp_path / "s.csv"
        scores.write_text("AA A,1\nBB B,2\n")
        code, out, _ = run(capsys, "correlate", "--input", data, "--laureates", lau,
                           "--scores", str(scores), "--thresholds", "1")
        assert code == 0 and len(_csv(out)) == 1

    def test_empty_join(self, capsys, tmp_path):
        scores = tmp_path / "s.csv"
        scores.write_text("NOBODY X,1\n")
        code, _, _ = run(capsys, "correlate", "--input", WORKED, "--scores", str(scores))
        assert code == 4

    def test_bad_thresholds(self, capsys):
        with pytest.raises(SystemExit):
            main(["correlate", "--input", WORKED, "--thresholds", "10,1"])


class TestDistribution:
    def test_worked_example(self, capsys):
        code, out, _ = run(capsys, "distribution", "--input", WORKED, "--laureates", WALTMAN)
        assert code == 0
        assert out.splitlines() == [
            "group,pwi,cum_prob", "laureate,1.0,1.0",
            "non_laureate,0.0,0.3333333333333333", "non_laureate,0.5,1.0",
        ]

    def test_single_author(self, capsys, tmp_path):
        p = tmp_path / "one.txt"
        p.write_text("PT\tAU\tUT\nJ\tEgghe, L\tW1\n")
        code, out, _ = run(capsys, "distribution", "--input", str(p), "--laureates", WALTMAN)
        assert out.splitlines()[1:] == ["non_laureate,0.0,1.0"]

    def test_no_laureates_warns(self, capsys, tmp_path):
        lst = tmp_path / "l.txt"
        lst.write_text("# nobody\n")
        code, out, err = run(capsys, "distribution", "--input", WORKED, "--laureates", str(lst))
        assert code == 0
        assert not any(l.startswith("laureate,") for l in out.splitlines())
        assert "laureate series is empty" in err


def test_regress(capsys, six_authors):
    data, lau = six_authors
    code, out, _ = run(capsys, "regress", "--input", data, "--laureates", lau, "--out-format", "json")
    assert code == 0
    assert json.loads(out)["n"] == 6


def test_subprocess_exit_codes_and_determinism(tmp_path):
    exe = [sys.executable, "-m", "pwindex.cli"]
    a = subprocess.run(exe + ["compute", "--input", WORKED, "--laureates", WALTMAN], capture_output=True)
    b = subprocess.run(exe + ["compute", "--input", WORKED, "--laureates", WALTMAN], capture_output=True)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stdout
    c = subprocess.run(exe + ["compute"], capture_output=True)
    assert c.returncode == 2
