import math

import numpy as np
import pytest

from src.isl.errors import BadInputs, DomainError, SizeExceeded
from src.isl.ising import (
    CurieWeissParams,
    SampleMatrix,
    cw_to_edge_coupling,
    pair_moments_exact,
    pmf_table,
    sample_null,
)
from src.isl.reduction import (
    ReductionParams,
    SpikedModel,
    calibrate_reduction_constant,
    curie_weiss_pair_correlation,
    curie_weiss_pmf_by_count,
    end_to_end_reduction,
    exact_support_tv,
    expand_by_count,
    hardness_frontier,
    reduction_certificate,
    sample_spiked,
    sign_pair_correlation,
    sign_pmf_by_count,
    sign_reduce,
    tv_exact,
    tv_exchangeable,
    two_sample_accuracy,
)


def _mass(by_count: np.ndarray) -> float:
    s = by_count.size - 1
    return float(sum(math.comb(s, k) * by_count[k] for k in range(s + 1)))


def test_sigma_mapping() -> None:
    p = ReductionParams(0.05, 4)
    assert p.sigma == pytest.approx(math.pi * 0.05 / 0.6)
    assert p.kappa_const == pytest.approx(math.pi * 0.05)


def test_supercritical_load_is_rejected() -> None:
    with pytest.raises(DomainError):
        ReductionParams(0.2, 3)
    with pytest.raises(BadInputs):
        ReductionParams(-0.1, 3)


@pytest.mark.parametrize("sigma", [0.0, 0.3, 1.5])
def test_sign_pmf_is_normalized(sigma: float) -> None:
    assert _mass(sign_pmf_by_count(sigma, 5)) == pytest.approx(1.0, abs=1e-10)


def test_sign_pmf_size_limit() -> None:
    with pytest.raises(SizeExceeded):
        sign_pmf_by_count(0.5, 15)


def test_sign_pair_correlation() -> None:
    assert sign_pair_correlation(0.0) == 0.0
    assert sign_pair_correlation(1.0) == pytest.approx(1.0 / 3.0)
    pmf = expand_by_count(sign_pmf_by_count(1.0, 3))
    states = np.array([[1 if r >> i & 1 else -1 for i in range(3)] for r in range(8)])
    assert float(pmf @ (states[:, 0] * states[:, 1])) == pytest.approx(1.0 / 3.0, abs=1e-9)


def test_sampled_sign_correlation() -> None:
    model = SpikedModel(6, 3, 1.0, (2, 4, 6))
    u = sign_reduce(sample_spiked(model, 40_000, seed=5), seed=5).spins.astype(float)
    assert np.mean(u[:, 1] * u[:, 3]) == pytest.approx(1.0 / 3.0, abs=0.02)
    assert np.mean(u[:, 0] * u[:, 1]) == pytest.approx(0.0, abs=0.02)


def test_sign_of_zero_is_plus() -> None:
    x = sign_reduce(np.array([[0.0, -0.5, 2.0]]))
    assert x.spins.tolist() == [[1, -1, 1]]
    assert x.sampler == "sign_of_gaussian"


def test_spiked_model_validation() -> None:
    with pytest.raises(BadInputs):
        SpikedModel(5, 2, 0.5, (1, 1))
    with pytest.raises(BadInputs):
        SpikedModel(5, 2, 0.5, (4, 6))
    assert SpikedModel(5, 2, 0.5).support == (1, 2)
    cov = SpikedModel(3, 2, 0.5, (1, 3)).covariance()
    assert cov[0, 2] == 0.5 and cov[1, 1] == 1.0


def test_curie_weiss_tables_match_edge_model() -> None:
    p = CurieWeissParams(4, 0.05)
    table = expand_by_count(curie_weiss_pmf_by_count(p))
    np.testing.assert_allclose(table, pmf_table(cw_to_edge_coupling(p)), rtol=1e-10)
    exact = pair_moments_exact(cw_to_edge_coupling(p))
    assert curie_weiss_pair_correlation(p) == pytest.approx(exact[0, 1], rel=1e-10)


def test_tv_helpers() -> None:
    assert tv_exact([0.5, 0.5], [1.0, 0.0]) == pytest.approx(0.5)
    with pytest.raises(BadInputs):
        tv_exact([1.0], [0.5, 0.5])
    uniform = np.full(4, 1 / 8)
    assert tv_exchangeable(uniform, uniform) == 0.0


def test_exact_tv_vanishes_at_zero_coupling() -> None:
    assert exact_support_tv(ReductionParams(0.0, 5)) == pytest.approx(0.0, abs=1e-12)
    assert exact_support_tv(ReductionParams(0.04, 5)) > 0.0


def test_certificate_layout() -> None:
    params = ReductionParams(0.02, 5)
    report = reduction_certificate(params, 100, grid=[0.0, 0.01, 0.02])
    bounds = report["bounds"]
    assert bounds["total"] == pytest.approx(bounds["cwn_gaussian"] + bounds["conditional"])
    assert report["per_sample_bounds"]["total"] < bounds["total"]
    assert report["exact_tv_support"] == pytest.approx(exact_support_tv(params))
    assert report["n_sample_tv_upper"] == min(1.0, 100 * report["exact_tv_support"])
    assert [row["theta"] for row in report["grid"]] == [0.0, 0.01, 0.02]
    assert isinstance(report["monotone_in_theta"], bool)


def test_certificate_skips_exact_tv_for_large_s() -> None:
    report = reduction_certificate(ReductionParams(0.01, 20), 10)
    assert report["exact_tv_support"] is None
    assert report["exact_below_bound"] is None


def test_calibrated_reduction_constant_dominates() -> None:
    grid = [(4, 0.02), (6, 0.03)]
    c = calibrate_reduction_constant(grid)
    assert c > 0.0
    for s, theta in grid:
        params = ReductionParams(theta, s)
        report = reduction_certificate(params, 1, tv_constant=c, reduction_constant=c)
        assert report["exact_tv_support"] <= report["per_sample_bounds"]["total"] + 1e-12


def test_hardness_frontier() -> None:
    frontier = hardness_frontier(100, 4)
    assert frontier["theta_by_n"] == pytest.approx(0.1)
    assert frontier["theta_by_s"] == pytest.approx(0.25)
    assert frontier["theta_frontier"] == pytest.approx(0.1)
    with pytest.raises(BadInputs):
        hardness_frontier(0, 4)
    with pytest.raises(BadInputs):
        hardness_frontier(100, 4, eta=0.0)
    with pytest.raises(BadInputs):
        hardness_frontier(100, 4, delta=-0.1)


def test_hardness_frontier_with_slack() -> None:
    frontier = hardness_frontier(100, 4, eta=0.5, delta=0.5)
    assert frontier["theta_by_n"] == pytest.approx(0.005)
    assert frontier["theta_by_s"] == pytest.approx(0.0625)
    assert frontier["theta_frontier"] == pytest.approx(0.005)
    assert (frontier["eta"], frontier["delta"]) == (0.5, 0.5)


def test_end_to_end_shapes_and_seeding() -> None:
    out = end_to_end_reduction(0.05, 4, 10, 50, seed=2)
    assert out.pca.spins.shape == (50, 10)
    assert out.ising.spins.shape == (50, 10)
    assert len(out.support) == 4
    assert out.pca.sampler == "sign_of_gaussian"
    assert out.ising.sampler == "curie_weiss_cond_iid"
    again = end_to_end_reduction(0.05, 4, 10, 50, seed=2)
    np.testing.assert_array_equal(out.pca.spins, again.pca.spins)
    np.testing.assert_array_equal(out.ising.spins, again.ising.spins)
    assert out.support == again.support


def test_end_to_end_needs_s_le_d() -> None:
    with pytest.raises(BadInputs):
        end_to_end_reduction(0.01, 6, 4, 10)


def test_two_sample_accuracy() -> None:
    a = sample_null(4, 400, seed=1)
    b = sample_null(4, 400, seed=2)
    assert two_sample_accuracy(a, b, seed=0) < 0.62
    ones = SampleMatrix(np.ones((400, 4), dtype=int), 0, "exact_enum")
    assert two_sample_accuracy(ones, b, seed=0) > 0.9
    with pytest.raises(BadInputs):
        two_sample_accuracy(a, sample_null(5, 400, seed=3))
