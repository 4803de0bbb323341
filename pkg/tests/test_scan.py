import math

import numpy as np
import pytest

from src.isl.errors import BadInputs, EmptyWitness
from src.isl.graph import Graph, GraphFamily, witnessing_set
from src.isl.ising import IsingModel, SampleMatrix, sample_exact
from src.isl.scan import (
    DetectionProblem,
    ScanConfig,
    calibrate_kappa,
    max_scan_statistics,
    pair_correlations,
    psi1_norm_exact,
    psi1_orlicz,
    psi1_tail_check,
    risk_curve,
    sample_replicates,
    scan_statistics,
    scan_test,
    w_statistic,
)


def _make_star(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((1, j) for j in range(2, leaves + 2)))


def _make_samples(rows: list) -> SampleMatrix:
    return SampleMatrix(np.array(rows), 0, "exact_enum")


def test_w_statistic_by_hand() -> None:
    samples = _make_samples([[1, 1, -1], [1, -1, -1]])
    assert w_statistic(samples, Graph(3, ((1, 2), (2, 3)))) == 0.0
    assert w_statistic(samples, Graph(3, ((1, 2), (1, 3)))) == -0.5


def test_w_statistic_rejects_empty_witness() -> None:
    with pytest.raises(EmptyWitness):
        w_statistic(_make_samples([[1, 1, 1]]), Graph(3, ()))


def test_w_statistic_dimension_mismatch() -> None:
    with pytest.raises(BadInputs, match="d=4"):
        w_statistic(_make_samples([[1, 1, 1]]), Graph(4, ((1, 2),)))


def test_pair_correlations_order() -> None:
    spins = np.array([[1, 1, -1], [1, -1, -1]])
    np.testing.assert_allclose(pair_correlations(spins), [0.0, -1.0, 0.0])
    stacked = pair_correlations(np.stack([spins, spins]))
    assert stacked.shape == (2, 3)


def test_scan_statistics_match_w_statistic() -> None:
    ws = witnessing_set(GraphFamily.clique(3), 6)
    samples = sample_exact(IsingModel.null(6), 50, seed=4)
    stats = scan_statistics(samples, ws)
    assert stats.shape == (20,)
    for member, value in zip(ws.members[:5], stats[:5]):
        assert value == pytest.approx(w_statistic(samples, member))
    top = max_scan_statistics(samples.spins[None, :, :], ws)
    assert top[0] == pytest.approx(float(stats.max()))


def test_threshold_formula() -> None:
    ws = witnessing_set(GraphFamily.clique(3), 6)
    cfg = ScanConfig(ws, kappa=4.0, R=2, n=100)
    assert cfg.threshold == pytest.approx(math.sqrt(math.log(20) / 3 / 200))
    with pytest.raises(BadInputs):
        ScanConfig(ws, kappa=-1.0, R=2, n=100)


def test_scan_test_decisions() -> None:
    ws = witnessing_set(GraphFamily.clique(3), 6)
    ones = _make_samples(np.ones((10, 6), dtype=int).tolist())
    assert scan_test(ones, ScanConfig(ws, kappa=1.0, R=2, n=10)) == 1
    assert scan_test(ones, ScanConfig(ws, kappa=1e6, R=2, n=10)) == 0


def test_calibrate_kappa_edge_cases() -> None:
    family = GraphFamily.clique(3)
    assert calibrate_kappa(family, 6, 100, alpha=1.0, reps=100) == 0.0
    with pytest.raises(BadInputs, match="reps"):
        calibrate_kappa(family, 6, 100, reps=50)
    with pytest.raises(BadInputs, match="alpha"):
        calibrate_kappa(family, 6, 100, alpha=0.0, reps=100)


def test_calibrated_kappa_controls_null_rate() -> None:
    family = GraphFamily.clique(3)
    kappa = calibrate_kappa(family, 6, 100, alpha=0.2, reps=400, seed=1)
    assert 0.0 < kappa < 20.0
    assert calibrate_kappa(family, 6, 100, alpha=0.2, reps=400, seed=1) == kappa


def test_sample_replicates_shapes() -> None:
    null = sample_replicates(None, 5, 20, 3, seed=0)
    assert null.shape == (3, 20, 5)
    assert null.dtype == np.int8
    model = IsingModel.from_graph(Graph(5, ((1, 2),)), 0.3)
    alt = sample_replicates(model, 5, 20, 3, seed=0)
    assert alt.shape == (3, 20, 5)


def test_detection_problem_validation() -> None:
    with pytest.raises(BadInputs):
        DetectionProblem(GraphFamily.clique(3), 6, 0)
    with pytest.raises(BadInputs):
        DetectionProblem(GraphFamily.clique(7), 6, 10)


def test_risk_curve_small() -> None:
    problem = DetectionProblem(GraphFamily.clique(3), 6, 200)
    rows = risk_curve(problem, [0.0, 0.5], kappa=12.0, reps=100, seed=3)
    assert [r.theta for r in rows] == [0.0, 0.5]
    null_row, strong = rows
    assert null_row.total == pytest.approx(1.0, abs=0.2)
    assert strong.worst_type_II == 0.0
    assert strong.type_I <= 0.1
    assert strong.n_alternatives == 20
    assert not strong.subsampled
    assert set(strong.to_row()) == {
        "theta",
        "type1",
        "type2_worst",
        "total",
        "se_total",
        "kappa",
        "threshold",
    }


def test_risk_curve_is_reproducible_across_threads() -> None:
    problem = DetectionProblem(GraphFamily.single_edge(), 5, 50)
    a = risk_curve(problem, [0.2], kappa=4.0, reps=40, seed=9, threads=1)
    b = risk_curve(problem, [0.2], kappa=4.0, reps=40, seed=9, threads=3)
    assert a[0].to_row() == b[0].to_row()


def test_risk_curve_subsamples_alternatives() -> None:
    problem = DetectionProblem(GraphFamily.clique(3), 7, 50)
    rows = risk_curve(problem, [0.1], kappa=4.0, reps=20, seed=0, max_alternatives=10)
    assert rows[0].n_alternatives == 10
    assert rows[0].subsampled


@pytest.mark.parametrize("leaves,expected", [(2, 0.5), (4, 0.375), (8, 0.2734375)])
def test_psi1_moment_norm_of_null_stars(leaves: int, expected: float) -> None:
    h = _make_star(leaves)
    assert psi1_norm_exact(IsingModel.null(h.d), h) == pytest.approx(expected)


def test_psi1_orlicz_of_constant() -> None:
    assert psi1_orlicz(np.full(10, 2.0)) == pytest.approx(2.0 / math.log(2.0))
    assert psi1_orlicz(np.zeros(4)) == 0.0


def test_psi1_tail_check_passes_at_high_temperature() -> None:
    h = _make_star(4)
    model = IsingModel.from_graph(h, 0.15)
    report = psi1_tail_check(model, h, reps=2_000, seed=1)
    assert report["passed"]
    assert report["mgf_at_lambda_star"] <= math.e
    assert report["edges"] == 4
    assert report["psi1_scaled"] == pytest.approx(report["psi1_empirical"] * 2.0)
    assert report["psi1_bound"] == pytest.approx(1.0)
    assert report["within_psi1_bound"]


def test_psi1_tail_check_reports_a_tight_constant() -> None:
    h = _make_star(4)
    report = psi1_tail_check(IsingModel.null(h.d), h, reps=500, seed=0, constant=0.5)
    assert report["psi1_bound"] == pytest.approx(0.25)
    assert report["psi1_moment_exact"] == pytest.approx(0.375)
    assert not report["within_psi1_bound"]


@pytest.mark.slow
def test_risk_drops_above_the_scan_threshold() -> None:
    problem = DetectionProblem(GraphFamily.clique(3), 10, 300)
    rows = risk_curve(problem, [0.0, 0.3], alpha=0.1, reps=200, seed=0)
    assert rows[0].total >= 0.7
    assert rows[1].total <= 0.3
