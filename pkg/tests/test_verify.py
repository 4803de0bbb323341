import pytest

from src.isl.cli.verify import list_suites, run_suite
from src.isl.errors import UnknownSuite
from src.isl.moments import moment_bruteforce

FAST = {"m_max": 5, "s_max": 10, "grid_points": 4001}


def _corrupted(m: int):
    def poly(s: int) -> int:
        return moment_bruteforce(m, s) + (1 if (m, s) == (3, 2) else 0)

    return poly


def test_list_suites() -> None:
    assert list_suites() == ["eulerian", "moments", "reduction", "scan", "oracle", "all"]


def test_moments_suite_passes() -> None:
    report = run_suite("moments", FAST)
    assert report["passed"], report["notes"]
    assert report["n_checks"] == 6
    assert report["n_failed"] == 0
    assert {c["status"] for c in report["checks"]} == {"PASS"}


def test_corrupted_polynomial_is_caught() -> None:
    report = run_suite("moments", {**FAST, "moment_poly": _corrupted})
    assert not report["passed"]
    assert report["n_failed"] == 1
    failed = [c for c in report["checks"] if c["status"] == "FAIL"]
    assert failed[0]["details"]["first_failure"] == {"m": 3, "s": 2}
    assert report["notes"] == ["P_2m recursion vs brute force failed at {'m': 3, 's': 2}"]


def test_crashing_check_is_reported_as_failure() -> None:
    def broken(m: int):
        raise RuntimeError("boom")

    report = run_suite("moments", {**FAST, "moment_poly": broken})
    failed = [c for c in report["checks"] if c["status"] == "FAIL"]
    assert failed[0]["details"] == {"error": "boom"}


def test_unknown_suite() -> None:
    with pytest.raises(UnknownSuite, match="unknown suite"):
        run_suite("lemmas")


def test_oracle_suite_passes() -> None:
    report = run_suite("oracle", {"sessions": 300})
    assert report["passed"], report["notes"]


@pytest.mark.slow
def test_every_suite_passes() -> None:
    report = run_suite("all")
    assert report["suite"] == "all"
    assert report["passed"], {k: v["notes"] for k, v in report["suites"].items()}


def _check(report: dict, name: str) -> dict:
    return next(c for c in report["checks"] if c["name"] == name)


def test_psi1_constant_is_read_from_overrides() -> None:
    default = _check(run_suite("scan"), "psi1 bounds")
    assert default["status"] == "PASS"
    assert default["details"]["constant"] == 2.0

    tight = _check(run_suite("scan", {"psi1": 0.5}), "psi1 bounds")
    assert tight["status"] == "FAIL"
    assert tight["details"]["constant"] == 0.5
    assert tight["details"]["within"][2] is False


def test_phi_constant_is_read_from_overrides() -> None:
    report = run_suite("moments", {**FAST, "phi_sixth": -1.0})
    assert _check(report, "scalar inequalities")["status"] == "FAIL"
