import subprocess
import sys

import mpmath

from yokota.cli import main, parse_n_list


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def fields(text):
    return dict(line.split("\t", 1) for line in text.splitlines() if "\t" in line)


def test_parse_n_list():
    assert parse_n_list("5..8,10") == (5, 6, 7, 8, 10)
    assert parse_n_list("24, 48") == (24, 48)
    assert parse_n_list("") == ()


def test_sixj_all_threes(capsys):
    code, out, _ = run(["sixj", "--n", "8", "--colors", "3,3,3,3,3,3"], capsys)
    assert code == 0
    f = fields(out)
    with mpmath.workdps(40):
        tet = mpmath.mpf(f["tet"].split()[0])
        integer = mpmath.mpf(f["integer"].split()[0])
        assert abs(tet - integer) < mpmath.mpf(10) ** -20
        assert abs(tet - mpmath.mpf("-79.8475883767879131")) < mpmath.mpf(10) ** -15
    assert "sixj" in f


def test_sixj_missing_color_is_usage_error(capsys):
    code, _, err = run(["sixj", "--n", "8", "--colors", "3,3,3,3,3"], capsys)
    assert code == 2 and "six" in err


def test_sixj_strict_rejects(capsys):
    code, _, err = run(["sixj", "--n", "8", "--strict", "--colors", "1,1,1,7,7,7"], capsys)
    assert code == 3 and "NotAdmissible" in err


def test_eval_builtin(capsys):
    code, out, _ = run(["eval", "--builtin", "gamma4", "--n", "10"], capsys)
    assert code == 0
    f = fields(out)
    assert f["graph"] == "gamma4" and f["n"] == "10"
    assert abs(mpmath.mpf(f["growth"]) - mpmath.mpf("2.5883206638")) < 1e-6


def test_eval_graph_file(tmp_path, capsys):
    from yokota.graph import serialize_graph
    from yokota.pyramids import builtin

    p = tmp_path / "g.txt"
    p.write_text(serialize_graph(builtin("gamma4")))
    code, out, _ = run(["eval", "--graph", str(p), "--n", "10"], capsys)
    assert code == 0
    assert abs(mpmath.mpf(fields(out)["growth"]) - mpmath.mpf("2.5883206638")) < 1e-6


def test_eval_missing_file(capsys):
    code, _, err = run(["eval", "--graph", "/nonexistent/graph.txt", "--n", "10"], capsys)
    assert code == 1 and err


def test_eval_unknown_builtin(capsys):
    code, _, _ = run(["eval", "--builtin", "gamma9", "--n", "10"], capsys)
    assert code == 2


def test_verify_passes(capsys):
    code, out, _ = run(["verify", "--n", "7", "--suite", "symmetry,orthogonality", "--count", "2"], capsys)
    assert code == 0
    assert sum(l.startswith("symmetry") for l in out.splitlines()) == 23  # worst case per relation
    assert out.splitlines()[-1].endswith("residuals below threshold")


def test_verify_inject_error(capsys):
    code, out, _ = run(["verify", "--n", "7", "--suite", "bar-product", "--count", "2", "--inject-error"], capsys)
    assert code == 4 and "FAIL" in out


def test_verify_unknown_suite(capsys):
    code, _, _ = run(["verify", "--suite", "nope"], capsys)
    assert code == 2


def test_table_to_file(tmp_path, capsys):
    p = tmp_path / "t.tsv"
    code, _, _ = run(["table", "--builtin", "gamma4", "--n", "10,20", "-o", str(p)], capsys)
    assert code == 0
    lines = p.read_text().splitlines()
    assert lines[0].startswith("n\tlog_abs_value") and len(lines) == 3
    assert abs(mpmath.mpf(lines[1].split("\t")[2]) - mpmath.mpf("2.5883206638")) < 1e-6


def test_table_empty_and_failed_rows(capsys):
    code, out, _ = run(["table", "--builtin", "gamma4", "--n", ""], capsys)
    assert code == 0 and out.count("\n") == 1
    code, out, err = run(["table", "--builtin", "gamma1", "--n", "12"], capsys)
    assert code == 3 and "NA" in out and "gamma1 n=12" in err


def test_bad_precision_env(monkeypatch, capsys):
    monkeypatch.setenv("YOKOTA_PRECISION", "20")
    code, _, _ = run(["sixj", "--n", "8", "--colors", "3,3,3,3,3,3"], capsys)
    assert code == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "yokota.cli", "sixj", "--n", "6", "--colors", "2,2,2,2,2,2"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and r.stdout.startswith("colors")
