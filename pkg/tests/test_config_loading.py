import numpy as np
import pytest
from pydantic import ValidationError

from src.isl.utils.config_model import (
    ExperimentConfig,
    Settings,
    load_settings,
)


def test_load_default_config(monkeypatch) -> None:
    monkeypatch.delenv("ISL_THREADS", raising=False)
    settings = load_settings("config/default.yml")

    assert settings.runtime.threads == 1
    assert settings.constants.c_prime is None
    assert settings.constants.a2 == pytest.approx(1.0 / 18.0)
    assert settings.oracle.xi == 0.05
    assert settings.oracle.p == 1.0
    assert settings.oracle.eta == 0.5
    assert settings.oracle.kappa is None
    assert settings.constants.kappa is None
    assert settings.constants.phi_sixth == 0.05
    assert settings.constants.psi1 == 2.0
    assert settings.limits.pmf_max_d == 20


def test_testing_config_overrides_defaults() -> None:
    settings = load_settings("config/testing.yml")

    assert settings.runtime.seed == 7
    assert settings.scan.reps == 200
    assert settings.sampler.gibbs_chains == 32
    assert settings.sampler.gibbs_thin == 5


def test_environment_overrides_yaml(monkeypatch) -> None:
    monkeypatch.setenv("ISL_SEED", "41")
    monkeypatch.setenv("ISL_THREADS", "0")
    settings = load_settings("config/testing.yml")

    assert settings.runtime.seed == 41
    assert settings.runtime.threads == 1


def test_kappa_grid_values() -> None:
    grid = Settings().scan.kappa_grid.values()

    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(20.0)
    assert len(grid) == 401
    assert np.all(np.diff(grid) > 0)


@pytest.mark.parametrize(
    "section,payload",
    [
        ("constants", {"c_prime": [1.0, 2.0]}),
        ("runtime", {"threads": 0}),
        ("scan", {"alpha": 0.0}),
        ("oracle", {"eta": 0.0}),
        ("oracle", {"eta": 1.5}),
        ("oracle", {"kappa": -0.1}),
        ("oracle", {"xi": 1.0}),
    ],
)
def test_invalid_settings(section: str, payload: dict) -> None:
    with pytest.raises(ValidationError):
        Settings(**{section: payload})


def test_experiment_config_validation() -> None:
    cfg = ExperimentConfig(subcommand="risk-curve", family="clique", s=3, d=10, n=100)
    assert '"subcommand": "risk-curve"' in cfg.to_json()

    with pytest.raises(ValidationError):
        ExperimentConfig(subcommand="sample", family="tree")
    with pytest.raises(ValidationError):
        ExperimentConfig(subcommand="sample", sampler="metropolis")
    with pytest.raises(ValidationError):
        ExperimentConfig(subcommand="risk-curve", theta_grid=[])
    with pytest.raises(ValidationError):
        ExperimentConfig(subcommand="sample", d=0)
