import json
import subprocess
import sys

import pytest

FREE_DOC = '{"m":1,"N0":0,"A":[[[[1,0]]]],"B":[],"P":[],"Q":[]}'
P3_DOC = (
    '{"m":1,"N0":1,"A":[[[[1,0]]],[[[1,0]]]],'
    '"B":[[[[-1,0]]]],"P":[[[[3,0]]]],"Q":[[[[0,0]]]]}'
)
SINGULAR_DOC = (
    '{"m":1,"N0":1,"A":[[[[1,0]]],[[[1,0]]]],'
    '"B":[[[[0,0]]]],"P":[[[[3,0]]]],"Q":[[[[0,0]]]]}'
)


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "diracjost", *args],
        capture_output=True,
        text=True,
    )


@pytest.fixture()
def free_file(tmp_path):
    path = tmp_path / "free.json"
    path.write_text(FREE_DOC)
    return str(path)


@pytest.fixture()
def p3_file(tmp_path):
    path = tmp_path / "p3.json"
    path.write_text(P3_DOC)
    return str(path)


def test_validate_free_ok(free_file):
    proc = run_cli("validate", free_file)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["ok"] is True and doc["decay_sum"] == 0.0


def test_validate_singular_exit1(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(SINGULAR_DOC)
    proc = run_cli("validate", str(path))
    assert proc.returncode == 1
    doc = json.loads(proc.stdout)
    assert doc["violations"][0]["kind"] == "SingularB"


def test_validate_missing_file_exit2():
    proc = run_cli("validate", "does-not-exist.json")
    assert proc.returncode == 2


def test_validate_malformed_exit2(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    proc = run_cli("validate", str(path))
    assert proc.returncode == 2


def test_eigs_free_empty(free_file):
    proc = run_cli("eigs", free_file)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["band"] == [-2.0, 2.0]
    assert doc["eigenvalues"] == []


def test_eigs_benchmark_json(p3_file):
    proc = run_cli("eigs", p3_file)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert len(doc["eigenvalues"]) == 1
    assert 2.0 < doc["eigenvalues"][0]["lambda"] < 4.0


def test_eigs_csv_header(p3_file):
    proc = run_cli("eigs", p3_file, "--format", "csv")
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "t,z_re,z_im,lambda,multiplicity,det_residual"


def test_eigs_rejects_invalid_profile(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(SINGULAR_DOC)
    proc = run_cli("eigs", str(path))
    assert proc.returncode == 1


def test_oracle_benchmark(p3_file):
    proc = run_cli("oracle", p3_file, "--n", "400")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert len(doc["matches"]) == 1
    assert doc["matches"][0]["gap"] <= 1e-6
    assert doc["unmatched_jost"] == [] and doc["unmatched_oracle"] == []


def test_oracle_truncation_too_small(p3_file):
    proc = run_cli("oracle", p3_file, "--n", "2")
    assert proc.returncode == 1


def test_oracle_csv(free_file):
    proc = run_cli("oracle", free_file, "--n", "20", "--format", "csv")
    assert proc.returncode == 0
    rows = proc.stdout.strip().splitlines()
    assert rows[0] == "N,lambda"
    assert len(rows) == 41


def test_band_free(free_file):
    proc = run_cli("band", free_file, "--n", "10")
    assert proc.returncode == 0
    rows = proc.stdout.strip().splitlines()
    assert rows[0] == "N,lambda,in_band"
    assert len(rows) == 21
    assert all(r.endswith(",1") for r in rows[1:])


def test_verify_profile_all_pass(p3_file):
    proc = run_cli("verify", p3_file, "--n", "120")
    assert proc.returncode == 0
    assert "summary: 8/8 checks passed" in proc.stdout


def test_verify_corruption_hook_fails(p3_file):
    proc = run_cli("verify", p3_file, "--n", "120", "--inject-corruption")
    assert proc.returncode == 1
    assert "FAIL recurrence_residual" in proc.stdout


def test_verify_random_deterministic():
    args = ("verify", "--random", "2", "--seed", "11", "--n", "80")
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert "2 profiles x 8 invariants" in first.stdout


def test_verify_json_format(p3_file):
    proc = run_cli("verify", p3_file, "--n", "120", "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["passed"] == doc["total"] == 8
