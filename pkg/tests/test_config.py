import pytest

from src.isl.errors import ConfigError
from src.isl.utils.config_loader import get_config, validate_config


def test_config_loads() -> None:
    cfg = get_config("config/testing.yml")

    assert cfg["runtime"]["seed"] == 7
    assert cfg["runtime"]["output_dir"].startswith("tests")
    assert cfg["scan"]["kappa_grid"]["step"] > 0


def test_env_references_expand(tmp_path, monkeypatch) -> None:
    monkeypatch.setenv("ISL_ARTIFACTS", "/data/isl")
    path = tmp_path / "cfg.yml"
    path.write_text(
        "runtime: {seed: 1, output_dir: '${ISL_ARTIFACTS}/runs'}\n"
        "limits: {}\nsampler: {}\nscan: {}\nconstants: {}\noracle: {}\n",
        encoding="utf-8",
    )
    assert get_config(str(path))["runtime"]["output_dir"] == "/data/isl/runs"


def test_missing_sections_are_reported() -> None:
    with pytest.raises(ConfigError, match="oracle"):
        validate_config(
            {"runtime": {"seed": 0}, "limits": {}, "sampler": {}, "scan": {}, "constants": {}}
        )


def test_seed_is_required() -> None:
    cfg = {s: {} for s in ("runtime", "limits", "sampler", "scan", "constants", "oracle")}
    with pytest.raises(ConfigError, match="runtime.seed"):
        validate_config(cfg)


def test_kappa_grid_step_must_be_positive() -> None:
    cfg = {s: {} for s in ("limits", "sampler", "constants", "oracle")}
    cfg["runtime"] = {"seed": 0}
    cfg["scan"] = {"kappa_grid": {"start": 0.0, "stop": 1.0, "step": 0.0}}
    with pytest.raises(ConfigError, match="step"):
        validate_config(cfg)
