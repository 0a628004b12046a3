import csv
import io
import json
import subprocess

import pytest

from slecoef.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kappa6_diagonal_all_one(capsys, tmp_path):
    out_path = tmp_path / "m.json"
    code, out, _ = run(capsys, "moments", "--mode", "interior", "--q", "2", "--kappa", "6", "--nmax", "10",
                       "--out", str(out_path))
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "n,moment"
    assert [r.split(",")[1] for r in rows[1:11]] == ["1"] * 10
    assert rows[-1] == "bandwidth: 1"
    doc = json.loads(out_path.read_text())
    assert doc["nmax"] == 10


def test_exterior_first_entry(capsys, tmp_path):
    out_path = tmp_path / "m.json"
    code, _, _ = run(capsys, "moments", "--mode", "exterior", "--q", "2", "--kappa", "2", "--nmax", "2",
                     "--out", str(out_path))
    assert code == 0
    entries = {(i, j): v for i, j, v in json.loads(out_path.read_text())["entries"]}
    assert entries[(1, 1)] == "1/3"


def test_bandwidth_report(capsys):
    code, out, _ = run(capsys, "moments", "--q", "2", "--kappa", "10/9", "--nmax", "12")
    assert code == 0 and out.splitlines()[-1] == "bandwidth: 3"


def test_csv_and_json_encode_identical_values(capsys, tmp_path):
    base = ["moments", "--q", "3/2", "--kappa", "4/3", "--nmax", "6"]
    run(capsys, *base, "--out", str(tmp_path / "m.json"))
    run(capsys, *base, "--format", "csv", "--out", str(tmp_path / "m.csv"))
    from_json = {(i, j): v for i, j, v in json.loads((tmp_path / "m.json").read_text())["entries"]}
    reader = csv.reader(io.StringIO((tmp_path / "m.csv").read_text()))
    next(reader)
    from_csv = {(int(i), int(j)): v for i, j, v in reader}
    assert from_csv == from_json


def test_cache_hit_matches_fresh_bytes(capsys, tmp_path):
    base = ["moments", "--q", "7/3", "--kappa", "5/2", "--nmax", "9", "--backend", "float:80"]
    run(capsys, *base, "--out", str(tmp_path / "a.json"))
    run(capsys, *base, "--out", str(tmp_path / "b.json"))  # served from cache
    run(capsys, *base, "--no-cache", "--out", str(tmp_path / "c.json"))
    a, b, c = ((tmp_path / n).read_bytes() for n in ("a.json", "b.json", "c.json"))
    assert a == b == c


def test_eta_file(capsys, tmp_path):
    eta = tmp_path / "eta.json"
    eta.write_text('{"stable": {"c": 1, "alpha": 1}}')
    code, out, _ = run(capsys, "moments", "--q", "2", "--eta", str(eta), "--nmax", "6")
    assert code == 0
    assert [r.split(",")[1] for r in out.splitlines()[1:7]] == ["1", "2", "3", "4", "5", "6"]


def test_usage_errors_exit_2(capsys, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["moments", "--q", "2", "--kappa", "6", "--eta", "x.json", "--nmax", "3"])
    assert info.value.code == 2
    capsys.readouterr()
    assert main(["moments", "--q", "2", "--kappa", "6", "--nmax", "3", "--backend", "float:7"]) == 2
    assert main(["spectrum", "--q", "2"]) == 2
    assert main(["moments", "--q", "2", "--eta", str(tmp_path / "missing.json"), "--nmax", "3"]) == 2


def test_numeric_failure_exit_3(capsys, tmp_path):
    eta = tmp_path / "eta.json"
    eta.write_text('{"eta": [0, 3, 1]}')
    code, _, err = run(capsys, "moments", "--q", "2", "--eta", str(eta), "--nmax", "8")
    assert code == 3 and "EtaRangeError" in err


def test_spectrum_rows(capsys):
    code, out, _ = run(capsys, "spectrum", "--q", "2", "--kappa", "6", "--L", "100", "--fit-nmax", "100")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["beta_eigen"] == "3.000000"
    assert rows[0]["flags"].startswith("validated")


def test_spectrum_family(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", "2", "--L", "40", "--fit-nmax", "60")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["q"], r["kappa"]) for r in rows] == [("2", "6"), ("2", "2"), ("2", "2")]
    assert [r["flags"].split(";")[-1] for r in rows] == ["family-N1-n1", "family-N2-n1", "family-N2-n2"]


def test_spectrum_off_family_is_conjectural(capsys):
    code, out, _ = run(capsys, "spectrum", "--q", "2", "--kappa", "7", "--L", "40", "--fit-nmax", "60")
    assert code == 0
    assert next(csv.DictReader(io.StringIO(out)))["flags"].startswith("conjectural")


MC_FAST = ["mc", "--nmax", "3", "--paths", "1000", "--dt", "2e-3", "--T", "8", "--seed", "7"]


def test_mc_is_deterministic(capsys, tmp_path):
    run(capsys, *MC_FAST, "--kappa", "4", "--no-cache", "--out", str(tmp_path / "a.json"))
    run(capsys, *MC_FAST, "--kappa", "4", "--no-cache", "--out", str(tmp_path / "b.json"))
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_mc_check_against_solver(capsys, tmp_path):
    ref = tmp_path / "ref.json"
    run(capsys, "moments", "--q", "2", "--kappa", "4", "--nmax", "3", "--out", str(ref))
    code, _, err = run(capsys, *MC_FAST, "--kappa", "4", "--check", str(ref))
    assert code == 0 and "check passed" in err
    wrong = tmp_path / "wrong.json"
    wrong.write_text('{"2": "5", "3": "9"}')
    code, _, err = run(capsys, *MC_FAST, "--kappa", "4", "--check", str(wrong))
    assert code == 4 and "check failed" in err


@pytest.mark.parametrize("suite", ["theorem1", "levy"])
def test_verify_suites(capsys, suite):
    code, out, _ = run(capsys, "verify", suite)
    assert code == 0
    assert out and all(line.split()[1] == "PASS" for line in out.splitlines())


def test_console_script_installed():
    out = subprocess.run(["slecoef", "moments", "--q", "2", "--kappa", "2", "--nmax", "3", "--no-cache"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.splitlines()[1:4] == ["1,1", "2,2", "3,3"]
