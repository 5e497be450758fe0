import subprocess
import sys

import pytest

from foldcover import foldseq as fs
from foldcover.cli import main
from foldcover.covering import parse_covering
from foldcover.lattice import parse_curve


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_seq_star_power(capsys):
    code, out, _ = run(["gen-seq", "--kind", "star", "--base", "+--", "--power", "2"], capsys)
    assert code == 0
    assert fs.parse_sequence(out).prefix(15) == fs.unfold((1, -1, 1, -1), 4)


def test_gen_seq_dragon_prefix(capsys):
    code, out, _ = run(["gen-seq", "--kind", "dragon", "--n", "4"], capsys)
    assert code == 0 and out.splitlines()[2] == "++-++--+++--+--"


def test_trace_pipeline(tmp_path, capsys, monkeypatch):
    seq = tmp_path / "s.seq"
    assert main(["gen-seq", "--kind", "dragon", "--n", "3", "-o", str(seq)]) == 0
    code, out, _ = run(["trace", str(seq)], capsys)
    assert code == 0
    assert parse_curve(out).turns == fs.dragon().prefix(7)
    code, svg, _ = run(["render", "-"], capsys, stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and svg.startswith("<svg")


def test_cover_count_and_derive(tmp_path, capsys):
    cov = tmp_path / "d.cov"
    assert main(["cover", "--kind", "dragon", "--depth", "5", "-o", str(cov)]) == 0
    code, out, _ = run(["count-curves", str(cov), "--expect", "2"], capsys)
    assert (code, out.strip()) == (0, "2")
    code, out, _ = run(["count-curves", str(cov), "--expect", "3"], capsys)
    assert code == 1
    code, out, _ = run(["derive", str(cov)], capsys)
    assert code == 0 and parse_covering(out).is_complete()
    code, out, _ = run(["antiderive", str(cov), "--choice", "-1"], capsys)
    assert code == 0 and parse_covering(out).edges


def test_classify_and_recenter(tmp_path, capsys):
    cov = tmp_path / "d.cov"
    assert main(["cover", "--kind", "dragon", "--depth", "6", "-o", str(cov)]) == 0
    code, out, _ = run(["classify", str(cov), "--max-n", "3", "--core", "8"], capsys)
    assert code == 0 and out.splitlines()[1] == "E_0 289"
    code, out, err = run(["recenter", str(cov), "--depth", "4"], capsys)
    assert code == 0 and "center" in err
    assert fs.is_folding_prefix(fs.parse_sequence(out).prefix(15))


def test_density(tmp_path, capsys):
    cov = tmp_path / "d.cov"
    pat = tmp_path / "edge.cov"
    pat.write_text("covering v1\nwindow 0 0 1 0\nparity 0\nE 0 0 R 0 0\n")
    assert main(["cover", "--kind", "dragon", "--depth", "6", "-o", str(cov)]) == 0
    code, out, _ = run(["density", str(cov), "--pattern", str(pat), "--sizes", "8", "16",
                        "--anchor=-8,-8"], capsys)
    assert code == 0
    assert "s=16 z=-8,-8 count=272" in out and out.strip().endswith("stable=True")


def test_search_seed(tmp_path, capsys):
    cov = tmp_path / "a.cov"
    assert main(["cover", "--kind", "star", "--base", "+--", "--depth", "4", "--core", "6",
                 "-o", str(cov)]) == 0
    code, out, _ = run(["search-seed", str(cov), "--target", "6", "--p-max", "2",
                        "--limit", "1"], capsys)
    assert code == 0 and "found 1" in out and "segments=8" in out


def test_verify_single_check(capsys):
    code, out, _ = run(["verify", "--suite", "alternating_identity"], capsys)
    assert code == 0 and out.startswith("CHECK alternating_identity PASS")


@pytest.mark.parametrize("argv", [
    ["gen-seq", "--kind", "star", "--base", "+x-"],
    ["trace", "/nonexistent/file"],
    ["verify", "--suite", "no_such_check"],
    ["cover", "--construction", "six", "--kind", "dragon"],
])
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_unknown_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen-seq", "--bogus"])
    assert exc.value.code == 2


def test_maxmem_cap(capsys, monkeypatch):
    monkeypatch.setenv("FOLDCOVER_MAXMEM", "100")
    monkeypatch.setattr(fs, "MAX_TERMS", fs.MAX_TERMS)
    code, _, _ = run(["gen-seq", "--kind", "dragon", "--n", "10"], capsys)
    assert code == 2


def test_six_curve_pipe_subprocess():
    cmd = [sys.executable, "-m", "foldcover.cli"]
    made = subprocess.run(cmd + ["cover", "--construction", "six", "--base", "+--", "--steps", "2"],
                          capture_output=True, text=True, check=True)
    counted = subprocess.run(cmd + ["count-curves"], input=made.stdout,
                             capture_output=True, text=True)
    assert counted.returncode == 0 and counted.stdout.strip() == "6"
