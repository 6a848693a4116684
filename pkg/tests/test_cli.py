import os
import random
import subprocess
import sys

import pytest
from gmpy2 import mpfr

from waring.cli import EXIT_CERT, EXIT_OK, EXIT_USAGE, main, split_batch
from waring.synthetic import random_quintic


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decompose_power(capsys):
    code, out, _ = run(["decompose", "vars=3 deg=5;5 0 0 = 1"], capsys)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "vars=3 deg=5 terms=1"


def test_rank_of_binary_monomial(capsys):
    code, out, _ = run(["rank", "vars=2 deg=5;4 1 = 1"], capsys)
    assert code == EXIT_OK and out.strip() == "5"


def test_rank_rejects_ternary_input(capsys):
    code, _, err = run(["rank", "vars=3 deg=5;4 1 0 = 1"], capsys)
    assert code == EXIT_USAGE and "binary" in err


def test_parse_error_exit_code(capsys):
    code, _, _ = run(["decompose", "vars=3 deg=5;4 1 1 = 1"], capsys)
    assert code == EXIT_USAGE


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["rank"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["rank", "x", "--precision", "32"])
    assert exc.value.code == EXIT_USAGE


def test_decompose_then_verify(tmp_path, capsys):
    form = tmp_path / "f.txt"
    form.write_text("vars=3 deg=5\n1 2 2 = 1\n")
    dec = tmp_path / "d.txt"
    assert main(["decompose", str(form), "-o", str(dec)]) == EXIT_OK
    code, out, _ = run(["verify", str(form), str(dec)], capsys)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "terms = 10"


def test_verify_flags_wrong_decomposition(tmp_path, capsys):
    dec = tmp_path / "d.txt"
    dec.write_text("vars=3 deg=5 terms=1\n1 : 1 0 0\n")
    code, _, _ = run(["verify", "vars=3 deg=5;0 5 0 = 1", str(dec)], capsys)
    assert code == EXIT_CERT


def test_lines_prints_certificate(capsys):
    code, out, _ = run(["lines", "vars=3 deg=5;5 0 0 = 1;0 5 0 = 2;1 1 3 = 3;2 2 1 = -1"], capsys)
    assert code == EXIT_OK
    assert "kind = 4" in out and out.count(": true") == 6


def test_pencil_lists_exceptional_set(capsys):
    code, out, _ = run(["pencil", "vars=3 deg=5;5 0 0 = 1;0 5 0 = 2;1 1 3 = 3;2 2 1 = -1",
                        "--precision", "64"], capsys)
    assert code == EXIT_OK
    assert out.count("X = ") == 5 and out.count("a") >= 3


def test_batch_of_ten(tmp_path, capsys):
    rng = random.Random(0)
    path = tmp_path / "batch.txt"
    path.write_text("\n".join(random_quintic(rng).to_text() for _ in range(10)))
    code, out, _ = run(["batch", str(path), "--jobs", "2"], capsys)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 10
    for ln in lines:
        tokens = ln.split()
        fields = dict(zip(tokens[0::3], tokens[2::3]))
        assert fields["status"] == "ok"
        assert mpfr(fields["residual"]) <= mpfr(2) ** -128


def test_split_batch():
    assert split_batch("a\nb\n\nc\n---\nd\n") == ["a\nb", "c", "d"]


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("WARING_SEED", "7")
    _, a, _ = run(["decompose", "vars=3 deg=5;1 2 2 = 1"], capsys)
    _, b, _ = run(["decompose", "vars=3 deg=5;1 2 2 = 1", "--seed", "7"], capsys)
    monkeypatch.delenv("WARING_SEED")
    _, c, _ = run(["decompose", "vars=3 deg=5;1 2 2 = 1", "--seed", "7"], capsys)
    assert a == b == c


def test_identical_runs_are_byte_identical(capsys):
    outs = [run(["decompose", "vars=3 deg=5;1 2 2 = 1;0 0 5 = 3", "--seed", "3"], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_output_identical_across_processes():
    outs = []
    for hashseed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        proc = subprocess.run([sys.executable, "-m", "waring.cli", "decompose", "vars=3 deg=5;1 2 2 = 1;2 2 1 = -4",
                               "--seed", "5"], capture_output=True, env=env, check=True)
        outs.append(proc.stdout)
    assert outs[0] == outs[1] and outs[0]
