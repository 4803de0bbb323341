# src/isl/extract/sample_reader.py
from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from ..errors import BadInputs
from ..ising.samplers import SAMPLER_TAGS, SampleMatrix
from ..load.exporter import CONFIG_PREFIX, ISLB_MAGIC
from ..utils.logger import get_logger
from .base_reader import BaseReader
from .file_detector import detect_file_type

logger = get_logger("SampleReader")


def _frame_to_spins(df: pd.DataFrame) -> np.ndarray:
    cols = [c for c in df.columns if str(c).startswith("x")]
    if not cols:
        raise BadInputs("sample table needs columns x1..xd")
    cols.sort(key=lambda c: int(str(c)[1:]))
    return df[cols].to_numpy(dtype=np.int8)


def _read_islb(path: Path) -> Dict[str, Any]:
    raw = path.read_bytes()
    if not raw.startswith(ISLB_MAGIC):
        raise BadInputs(f"{path} is not a packed sample file")
    pos = len(ISLB_MAGIC)
    (size,) = struct.unpack_from("<I", raw, pos)
    pos += 4
    header = json.loads(raw[pos : pos + size].decode("utf-8"))
    n, d = int(header["n"]), int(header["d"])
    width = (d + 7) // 8
    body = np.frombuffer(raw, dtype=np.uint8, offset=pos + size)
    if body.size != n * width:
        raise BadInputs(f"{path}: expected {n * width} payload bytes, found {body.size}")
    bits = np.unpackbits(body.reshape(n, width), axis=1, count=d, bitorder="little")
    header["spins"] = (2 * bits.astype(np.int8) - 1).astype(np.int8)
    return header


class SampleReader(BaseReader):
    """Spin samples from CSV (x1..xd, optional config line), `.islb` or Parquet."""

    _metadata: Dict[str, Any]

    def __init__(self) -> None:
        self._metadata = {}

    def read(self, path: Path) -> SampleMatrix:
        try:
            kind = detect_file_type(path)
            seed, sampler = 0, "exact_enum"
            sidecar = path.with_name(path.name + ".meta.json")
            if sidecar.exists():
                meta = json.loads(sidecar.read_text(encoding="utf-8"))
                seed = int(meta.get("seed", 0))
                sampler = meta.get("sampler", sampler)
            if kind == "csv":
                df = pd.read_csv(path, skiprows=self._config_rows(path))
                spins = _frame_to_spins(df)
            elif kind == "parquet":
                spins = _frame_to_spins(pd.read_parquet(path, engine="pyarrow"))
            elif kind == "islb":
                header = _read_islb(path)
                spins = header["spins"]
                seed, sampler = int(header["seed"]), header["sampler"]
            else:
                raise BadInputs(f"{path.suffix} is not a sample format")
            if sampler not in SAMPLER_TAGS:
                sampler = "exact_enum"
            samples = SampleMatrix(spins, seed, sampler)
        except Exception as e:
            self._metadata = {"path": str(path), "status": "error", "error": str(e)}
            logger.error("Failed to load samples %s: %s", path, e)
            raise

        self._metadata = {
            "path": str(path),
            "status": "success",
            "type": kind,
            "n": samples.n,
            "d": samples.d,
            "seed": samples.seed,
            "sampler": samples.sampler,
        }
        logger.info("Loaded samples: %s (n=%d, d=%d)", path, samples.n, samples.d)
        return samples

    @staticmethod
    def _config_rows(path: Path) -> int:
        with open(path, "r", encoding="utf-8") as fh:
            return 1 if fh.readline().startswith(CONFIG_PREFIX) else 0

    def metadata(self) -> Dict[str, Any]:
        return self._metadata
