import json

import pytest

from pycwl.cli import EXIT_BUDGET, EXIT_CHECK, EXIT_OK, EXIT_USAGE, main
from pycwl.cli import commands
from pycwl.cli.config import parse_args


def run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_text(encoding="utf-8") if out.exists() else None


def run_json(tmp_path, *argv):
    code, text = run(tmp_path, *argv)
    assert code == EXIT_OK
    return json.loads(text)


def test_pmf_json(tmp_path) -> None:
    payload = run_json(tmp_path, "pmf", "--M", "2", "--eps", "1e-8")
    assert payload["command"] == "pmf"
    assert payload["support_upper"] == 4
    rounded = [entry["rounded_percent"] for entry in payload["pmf"]]
    assert rounded == ["0.21", "6.59", "43.00", "50.19", "—"]
    assert payload["pmf"][4]["exact_zero"]
    assert payload["pmf"][0]["exact_zero"] is None
    for entry in payload["pmf"]:
        assert float(entry["lo"]) <= float(entry["hi"])
    assert float(payload["total"]["lo"]) <= 1 <= float(payload["total"]["hi"])


def test_pmf_csv(tmp_path) -> None:
    code, text = run(tmp_path, "pmf", "--M", "3", "--format", "csv")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == "r,lo,hi,exact_zero,rounded_percent"
    assert len(lines) == 11
    assert lines[-1].endswith(",—")


def test_pgf(tmp_path) -> None:
    payload = run_json(tmp_path, "pgf", "--M", "2", "--z", "1")
    assert payload["z"] == "1"
    assert float(payload["value"]["lo"]) <= 1 <= float(payload["value"]["hi"])


def test_moments(tmp_path) -> None:
    payload = run_json(tmp_path, "moments", "--M", "3", "--eps", "1e-8")
    assert float(payload["mean"]["lo"]) == pytest.approx(5.4714, abs=1e-4)
    assert len(payload["factorial_moments"]) == 9
    assert "poisson_tv_distance" in payload


def test_constants(tmp_path) -> None:
    payload = run_json(tmp_path, "constants", "--eps", "1e-6")
    assert float(payload["inv_zeta2"]["lo"]) == pytest.approx(0.6079271,
                                                              abs=1e-6)
    assert float(payload["zeta2"]["hi"]) == pytest.approx(1.6449341,
                                                          abs=1e-6)
    for key in ("inv_zeta2", "feller_tornier", "inv_zeta2_f", "zeta2"):
        lo, hi = float(payload[key]["lo"]), float(payload[key]["hi"])
        assert 0 <= hi - lo <= 1e-6


def test_corr(tmp_path) -> None:
    payload = run_json(tmp_path, "corr", "--N", "16")
    assert len(payload["grid"]) == 256
    minimum = payload["minimum"]
    assert float(minimum["value"]["lo"]) == pytest.approx(-0.196941,
                                                          abs=1e-5)
    assert minimum["dx"] + minimum["dy"] >= 1


def test_avg_corr(tmp_path) -> None:
    payload = run_json(tmp_path, "avg-corr", "--N", "50")
    assert abs(float(payload["avg_correlation"]["lo"])) < 0.1
    assert run(tmp_path, "avg-corr")[0] == EXIT_USAGE


def test_empirical(tmp_path) -> None:
    payload = run_json(tmp_path, "empirical", "--M", "2", "--n", "200")
    assert payload["total"] == 40_000
    assert sum(entry["count"] for entry in payload["counts"]) == 40_000
    assert payload["tv_to_limit"] < 0.1


def test_empirical_convergence(tmp_path) -> None:
    payload = run_json(tmp_path, "empirical", "--check", "dirichlet",
                       "--grid", "100,1000")
    assert [row["n"] for row in payload["rows"]] == [100, 1000]
    assert payload["rows"][1]["gap"] < payload["rows"][0]["gap"]
    code, _ = run(tmp_path, "empirical", "--check", "nope", "--grid", "10")
    assert code == EXIT_USAGE


def test_shifted_density(tmp_path) -> None:
    payload = run_json(tmp_path, "shifted-density", "--n", "100")
    assert payload["density"] == "6087/10000"


def test_invisible(tmp_path) -> None:
    payload = run_json(tmp_path, "invisible", "--M", "2")
    assert payload["modulus"] == 210
    assert payload["primes"] == [[2, 3], [5, 7]]
    assert payload["z_count"] == 0


def test_cesaro(tmp_path) -> None:
    payload = run_json(tmp_path, "cesaro", "--limit", "20")
    assert [entry["f"] for entry in payload["sums"]] == \
        ["delta_one", "upsilon", "identity"]
    for entry in payload["sums"]:
        assert entry["boxes"] == 210
        assert entry["mismatches"] == 0
        assert entry["equal"]


def test_cesaro_checks_every_box(tmp_path, monkeypatch) -> None:
    exact = commands.cesaro_sum

    def off_by_one(h, A, B):
        return exact(h, A, B) + (1 if (A, B) == (2, 3) else 0)

    monkeypatch.setattr(commands, "cesaro_sum", off_by_one)
    code, text = run(tmp_path, "cesaro", "--limit", "5")
    assert code == EXIT_CHECK
    sums = json.loads(text)["sums"]
    assert [entry["mismatches"] for entry in sums] == [1, 1, 1]
    assert not any(entry["equal"] for entry in sums)


@pytest.mark.parametrize("argv", [
    ("verify", "--suite", "cesaro", "--limit", "20"),
    ("verify", "--suite", "waring"),
    ("verify", "--suite", "constants"),
    ("verify", "--suite", "core", "--M", "2", "--n", "1000"),
])
def test_verify_suites_pass(tmp_path, argv) -> None:
    payload = run_json(tmp_path, *argv)
    assert payload["checks"]
    assert all(check["status"] == "pass" for check in payload["checks"])


def test_exit_codes(tmp_path) -> None:
    assert run(tmp_path, "pmf")[0] == EXIT_USAGE
    assert run(tmp_path, "invisible", "--M", "1")[0] == EXIT_USAGE
    assert run(tmp_path, "invisible", "--M", "17")[0] == EXIT_BUDGET
    assert main(["verify", "--suite", "bogus"]) == EXIT_USAGE
    assert main(["pmf", "--M", "2", "--eps", "-1"]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE
    assert EXIT_CHECK == 1


@pytest.mark.parametrize("argv", [
    ("empirical", "--M", "3", "--n", "300"),
    ("pmf", "--M", "3"),
    ("corr", "--N", "8"),
    ("constants", "--eps", "1e-8"),
    ("verify", "--suite", "cesaro", "--limit", "12"),
])
def test_threads_do_not_change_output(tmp_path, argv) -> None:
    one = main([*argv, "--threads", "1", "--out", str(tmp_path / "a")])
    many = main([*argv, "--threads", "8", "--out", str(tmp_path / "b")])
    assert one == many == EXIT_OK
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_threads_from_environment(monkeypatch) -> None:
    monkeypatch.setenv("CWL_THREADS", "3")
    assert parse_args(["constants"]).threads == 3
    assert parse_args(["constants", "--threads", "2"]).threads == 2
    monkeypatch.setenv("CWL_THREADS", "lots")
    assert parse_args(["constants"]).threads == 1
