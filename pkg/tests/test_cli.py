import json

import pytest

from qss_analyzer import main
from src.codes.scheme_file import load_scheme


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def read_json(path):
    with open(path, encoding='utf-8') as f:
        return json.load(f)


def test_make_reed_solomon(workdir):
    assert main(["make", "--construction", "rs", "--k", "2", "--q", "5"]) == 0
    scheme = load_scheme(workdir / "rs_2_5.scheme")
    assert (scheme.q, scheme.kappa, scheme.n) == (5, 5, 3)


def test_make_field_too_small(capsys):
    assert main(["make", "--construction", "rs", "--k", "2", "--q", "3"]) == 2
    out = capsys.readouterr().out
    assert "campo demasiado pequeño" in out
    assert "GF(3)" in out


def test_make_ghz_and_missing_arguments(workdir):
    assert main(["make", "--construction", "ghz", "--n", "3", "--q", "2", "--out", "g.scheme"]) == 0
    assert (workdir / "g.scheme").is_file()
    assert main(["make", "--construction", "ghz", "--n", "3"]) == 2


def test_make_with_discarded_share(workdir):
    args = ["make", "--construction", "five_qubit", "--drop", "5", "--explicit",
            "--out", "f.scheme"]
    assert main(args) == 0
    assert load_scheme(workdir / "f.scheme").discarded == (5,)


def test_analyze_cgl(workdir):
    assert main(["analyze", "--scheme", "cgl23", "--no-progress"]) == 0
    data = read_json(workdir / "reporte_cgl23.json")
    assert data["schema_version"] == "1.0"
    assert data["command"] == "analyze"
    assert data["access"]["ramp"] == {"k": 2, "k_prime": 1, "n": 3}
    assert data["qecc"]["distance"] == 2
    assert data["passed"] is True
    assert len(data["access"]["classifications"]) == 7


def test_analyze_ghz_passes():
    assert main(["analyze", "--scheme", "ghz_3_2", "--no-progress", "--out", "g.json"]) == 0


def test_analyze_scheme_file(explicit_scheme_path, workdir):
    args = ["analyze", "--scheme", str(explicit_scheme_path), "--no-progress", "--out", "e.json"]
    assert main(args) == 0
    assert read_json(workdir / "e.json")["scheme"]["name"] == "cgl23"


def test_analyze_corrupt_file(workdir):
    (workdir / "bad.scheme").write_text("name=x\ncolour=3\n", encoding='utf-8')
    assert main(["analyze", "--scheme", "bad.scheme", "--no-progress"]) == 2


def test_analyze_unknown_scheme():
    assert main(["analyze", "--scheme", "steane", "--no-progress"]) == 2


def test_analyze_is_deterministic(workdir):
    for out in ("a.json", "b.json"):
        assert main(["analyze", "--scheme", "ghz_2_3", "--no-progress", "--out", out]) == 0
    first, second = read_json(workdir / "a.json"), read_json(workdir / "b.json")
    first.pop("generated_at")
    second.pop("generated_at")
    assert first == second


def test_simulate_rcq(workdir):
    args = ["simulate", "rcq", "--scheme", "cgl23", "--set", "1,2", "--rounds", "2000",
            "--no-progress", "--out", "s.json", "--round-log", "rondas.log"]
    assert main(args) == 0
    data = read_json(workdir / "s.json")
    assert data["simulation"]["qber_estimate"] == 0.0
    assert data["simulation"]["final_keys_match"] is True
    assert data["config"]["rounds"] == 2000
    lines = (workdir / "rondas.log").read_text(encoding='utf-8').splitlines()
    assert len(lines) == 2001


def test_simulate_rcq_with_noise_reports_oracle(workdir):
    args = ["simulate", "rcq", "--scheme", "cgl23", "--set", "1,2", "--rounds", "200",
            "--noise", "depolarizing:output:1.0", "--no-progress", "--out", "n.json"]
    assert main(args) == 0
    data = read_json(workdir / "n.json")
    assert data["simulation"]["exact_qber"] == pytest.approx(2 / 3)
    assert data["simulation"]["aborted"] is True


def test_simulate_is_deterministic(workdir):
    for out in ("a.json", "b.json"):
        args = ["simulate", "rcq", "--scheme", "cgl23", "--set", "1,2", "--rounds", "500",
                "--seed", "9", "--noise", "depolarizing:1:0.2", "--no-progress", "--out", out]
        assert main(args) == 0
    first, second = read_json(workdir / "a.json"), read_json(workdir / "b.json")
    first.pop("generated_at")
    second.pop("generated_at")
    assert first == second


def test_unwritable_output_path(workdir, capsys):
    (workdir / "salida").mkdir()
    assert main(["analyze", "--scheme", "ghz_2_2", "--no-progress", "--out", "salida"]) == 2
    assert "Error de archivo" in capsys.readouterr().out


def test_simulate_qq(workdir):
    args = ["simulate", "qq", "--scheme", "five_qubit", "--set", "1,2,3", "--trials", "10",
            "--no-progress"]
    assert main(args) == 0
    data = read_json(workdir / "simulacion_qq_five_qubit.json")
    assert data["simulation"]["min_fidelity"] >= 1 - 1e-9


def test_simulate_unauthorised_set():
    assert main(["simulate", "rcq", "--scheme", "cgl23", "--set", "1", "--no-progress"]) == 1


def test_simulate_bad_noise():
    args = ["simulate", "rcq", "--scheme", "cgl23", "--set", "1,2", "--noise", "foo",
            "--no-progress"]
    assert main(args) == 2


def test_schema_is_json(capsys):
    assert main(["schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert "schema_version" in schema["properties"]


def test_usage_errors():
    assert main([]) == 2
    assert main(["simulate", "bb84", "--scheme", "cgl23", "--set", "1"]) == 2


def test_analyze_oversized_scheme_file(workdir):
    (workdir / "grande.scheme").write_text(
        "name=grande\nq=2\nkappa=2\nn=40\nconstruction=explicit\n"
        "logical 0\n0 1 0\nlogical 1\n1 1 0\n",
        encoding='utf-8',
    )
    assert main(["analyze", "--scheme", "grande.scheme", "--no-progress"]) == 2
