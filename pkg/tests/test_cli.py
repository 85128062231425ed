import subprocess
import sys

import pytest

from jacobsthal.ancillary import MODULI, PERMUTATIONS, REMAINDERS, check_consistency
from jacobsthal.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_omega(capsys):
    code, out, _ = run(capsys, "omega", "--k", "12")
    assert code == 0
    assert "Omega = 32" in out


def test_omega_primorial_pool_with_enumeration(capsys):
    code, out, _ = run(capsys, "--deterministic", "omega", "--k", "8", "--pool", "primorial", "--enumerate")
    assert code == 0
    assert "Omega = 16" in out and "n_cov = 0" in out


def test_h_and_bigh(capsys):
    assert run(capsys, "h", "--k", "8")[1].strip() == "h(8) = 34"
    assert run(capsys, "h", "--k", "5", "--method", "brute")[1].strip() == "h(5) = 14"
    code, out, _ = run(capsys, "bigh", "--k", "11")
    assert code == 0 and out.startswith("H(11) = 58")
    assert run(capsys, "bigh", "--k", "1")[1].strip() == "H(1) = 2"


def test_table_prints_known_rows(capsys):
    code, out, _ = run(capsys, "table", "--from", "5", "--to", "9")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[:3] == ["k", "p_k", "q_k"]
    assert lines[1].split()[:6] == ["5", "11", "11", "14", "14", "6"]
    assert len(lines) == 6


def test_conjectures(capsys):
    code, out, _ = run(capsys, "conjectures")
    assert code == 0
    assert "24, 27, 30" in out


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--k", "4")
    assert code == 0
    assert "Omega = 4" in out


def test_enumerate_then_verify(tmp_path, capsys):
    code, _, _ = run(capsys, "enumerate", "--k", "9", "--out-dir", str(tmp_path))
    assert code == 0
    paths = [tmp_path / name for name in (REMAINDERS, MODULI, PERMUTATIONS)]
    assert all(p.exists() for p in paths)
    assert check_consistency(*paths) == []
    code, out, _ = run(capsys, "verify", "--file", str(paths[0]))
    assert code == 0 and "0 failures" in out


def test_enumerate_only_large_writes_empty_sections(tmp_path, capsys):
    code, _, _ = run(capsys, "enumerate", "--k", "6", "--out-dir", str(tmp_path), "--only-large")
    assert code == 0
    assert (tmp_path / REMAINDERS).read_text() == ""


def test_verify_failure_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("k = 4\n1/3 2/5 1/7\n")
    code, out, _ = run(capsys, "verify", "--file", str(path))
    assert code == 1
    assert "line 2" in out


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("k = 4\n1/3 x\n")
    code, _, err = run(capsys, "verify", "--file", str(path))
    assert code == 2
    assert "line 2" in err


def test_input_error_exit_code(capsys):
    code, _, err = run(capsys, "omega", "--k", "2")
    assert code == 2 and err.startswith("error:")


def test_size_guard_exit_code(capsys):
    code, _, err = run(capsys, "oracle", "--k", "8")
    assert code == 3 and "error:" in err


def test_certify(tmp_path, capsys):
    out_file = tmp_path / "cert.txt"
    code, out, _ = run(capsys, "certify", "--k", "10", "--length", "20", "--out", str(out_file))
    assert code == 0
    assert "H(10) >= 42" in out
    assert out_file.read_text().startswith("k = 10\n")


def test_certify_impossible_length(capsys):
    code, out, _ = run(capsys, "certify", "--k", "6", "--length", "11")
    assert code == 1 and "no covering" in out


def test_argparse_rejects_missing_arguments():
    with pytest.raises(SystemExit) as info:
        main(["omega"])
    assert info.value.code == 2


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "jacobsthal", "h", "--k", "4"],
                            capture_output=True, text=True, check=False)
    assert result.returncode == 0
    assert result.stdout.strip() == "h(4) = 10"


def test_oracle_max_prime(capsys):
    code, out, _ = run(capsys, "oracle", "--k", "5", "--max-prime", "17")
    assert code == 0
    assert out.startswith("k = 5, pool = [3, 5, 7, 11, 13, 17]")
    assert "Omega = 6" in out
