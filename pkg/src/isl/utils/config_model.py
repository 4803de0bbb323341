# src/isl/utils/config_model.py
from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

FAMILY_TAGS = ("single_edge", "clique", "star", "community", "custom")
SAMPLERS = ("auto", "exact_enum", "gibbs", "curie_weiss_cond_iid", "sign_of_gaussian")


class RuntimeConfig(BaseModel):
    seed: int = 0
    threads: int = 1
    output_dir: Path = Path("artifacts")
    progress: bool = True

    @field_validator("threads")
    @classmethod
    def positive_threads(cls, v: int) -> int:
        if v < 1:
            raise ValueError("runtime.threads must be >= 1")
        return v


class LimitsConfig(BaseModel):
    arboricity_max_vertices: int = 24
    forest_partition_max_d: int = 16
    pmf_max_d: int = 20
    eulerian_max_multiplicity: int = 24
    placements: int = 100_000


class SamplerConfig(BaseModel):
    gibbs_burn_in_per_d: int = 50
    gibbs_thin: int = 5
    gibbs_chains: int = 256
    cwn_grid_points: int = 2**14
    cwn_grid_margin: float = 12.0


class KappaGrid(BaseModel):
    start: float = 0.0
    stop: float = 20.0
    step: float = 0.05

    def values(self) -> np.ndarray:
        count = int(round((self.stop - self.start) / self.step)) + 1
        return self.start + self.step * np.arange(count)


class ScanSettings(BaseModel):
    alpha: float = 0.1
    reps: int = 2000
    max_alternatives: int = 2000
    kappa_grid: KappaGrid = Field(default_factory=KappaGrid)

    @field_validator("alpha")
    @classmethod
    def alpha_range(cls, v: float) -> float:
        if not 0.0 < v <= 2.0:
            raise ValueError("scan.alpha must lie in (0, 2]")
        return v


class ConstantsConfig(BaseModel):
    # calibrated once; see DESIGN.md
    tv_cwn: float = 1.0
    reduction_tv: float = 1.0
    c_prime: Optional[List[float]] = None
    a2: float = 1.0 / 18.0
    phi_sixth: float = 0.05
    psi1: float = 2.0
    kappa: Optional[float] = None

    @field_validator("c_prime")
    @classmethod
    def five_terms(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None and len(v) != 5:
            raise ValueError("constants.c_prime needs exactly five entries")
        return v


class OracleSettings(BaseModel):
    xi: float = 0.05
    p: float = 1.0
    eta: float = 0.5
    kappa: Optional[float] = None

    @field_validator("xi")
    @classmethod
    def xi_range(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("oracle.xi must lie in (0, 1)")
        return v

    @field_validator("eta")
    @classmethod
    def eta_range(cls, v: float) -> float:
        if not 0.0 < v <= 1.0:
            raise ValueError("oracle.eta must lie in (0, 1]")
        return v

    @field_validator("p", "kappa")
    @classmethod
    def positive(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and v <= 0:
            raise ValueError("oracle.p and oracle.kappa must be > 0")
        return v


class Settings(BaseModel):
    runtime: RuntimeConfig = Field(default_factory=RuntimeConfig)
    limits: LimitsConfig = Field(default_factory=LimitsConfig)
    sampler: SamplerConfig = Field(default_factory=SamplerConfig)
    scan: ScanSettings = Field(default_factory=ScanSettings)
    constants: ConstantsConfig = Field(default_factory=ConstantsConfig)
    oracle: OracleSettings = Field(default_factory=OracleSettings)
    logging: Optional[Dict[str, Any]] = None


class ExperimentConfig(BaseModel):
    """Fully resolved run description; embedded in every artifact."""

    subcommand: str
    family: Optional[str] = None
    s: Optional[int] = None
    k: Optional[int] = None
    l: Optional[int] = None
    d: Optional[int] = None
    n: Optional[int] = None
    theta: Optional[float] = None
    theta_grid: Optional[List[float]] = None
    reps: Optional[int] = None
    seed: int = 0
    threads: int = 1
    sampler: str = "auto"
    out: Optional[str] = None
    kappa: Optional[float] = None
    constants: Dict[str, Any] = Field(default_factory=dict)
    params: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("family")
    @classmethod
    def known_family(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in FAMILY_TAGS:
            raise ValueError(f"family must be one of {FAMILY_TAGS}, got {v!r}")
        return v

    @field_validator("sampler")
    @classmethod
    def known_sampler(cls, v: str) -> str:
        if v not in SAMPLERS:
            raise ValueError(f"sampler must be one of {SAMPLERS}, got {v!r}")
        return v

    @model_validator(mode="after")
    def check_dimensions(self) -> "ExperimentConfig":
        if self.d is not None and self.d < 1:
            raise ValueError("d must be >= 1")
        if self.n is not None and self.n < 1:
            raise ValueError("n must be >= 1")
        if self.theta_grid is not None and len(self.theta_grid) == 0:
            raise ValueError("theta grid is empty")
        if self.reps is not None and self.reps < 1:
            raise ValueError("reps must be >= 1")
        return self

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True)


def load_settings(path: Optional[str] = None) -> Settings:
    """Model defaults < YAML < ISL_THREADS / ISL_SEED."""
    raw: Dict[str, Any] = {}
    if path is not None:
        from .config_loader import get_config

        raw = get_config(path)
    settings = Settings(**json.loads(json.dumps(raw)))

    env_threads = os.getenv("ISL_THREADS")
    if env_threads:
        settings.runtime.threads = max(1, int(env_threads))
    env_seed = os.getenv("ISL_SEED")
    if env_seed:
        settings.runtime.seed = int(env_seed)
    return settings
