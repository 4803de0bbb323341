# src/isl/load/exporter.py
from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from ..errors import BadInputs
from ..graph.graph import Graph, Multigraph
from ..ising.samplers import SampleMatrix
from ..utils.logger import get_logger
from ..utils.reporting import save_report, to_builtin

logger = get_logger("Exporter")

CONFIG_PREFIX = "# config: "
ISLB_MAGIC = b"ISLB\x01"
SAMPLE_FORMATS = ("csv", "islb", "parquet")


def _ensure_dir(path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)


def config_line(config: Dict[str, Any]) -> str:
    return CONFIG_PREFIX + json.dumps(config, sort_keys=True, default=to_builtin)


def write_table(
    df: pd.DataFrame, out_path: Path, config: Optional[Dict[str, Any]] = None
) -> Path:
    """CSV with an optional `# config: {json}` first line; byte-stable for equal inputs."""
    _ensure_dir(out_path.parent)
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        if config is not None:
            fh.write(config_line(config) + "\n")
        df.to_csv(fh, index=False, lineterminator="\n", float_format="%.12g")
    logger.info("Wrote table: %s (rows=%d)", out_path, len(df))
    return out_path


def write_json(
    payload: Dict[str, Any], out_path: Path, config: Optional[Dict[str, Any]] = None
) -> Path:
    save_report(payload, out_path, config=config)
    return out_path


def read_embedded_config(path: Path) -> Dict[str, Any]:
    """
    The config an artifact was written with: the CSV header line, the JSON
    "config" key, or the `.meta.json` sidecar of a sample file.
    """
    sidecar = path.with_name(path.name + ".meta.json")
    suffix = path.suffix.lower()
    if suffix == ".csv":
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline().rstrip("\n")
        if first.startswith(CONFIG_PREFIX):
            return json.loads(first[len(CONFIG_PREFIX) :])
    elif suffix == ".json":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        if isinstance(payload, dict) and "config" in payload:
            return payload["config"]
    if sidecar.exists():
        with open(sidecar, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
        if meta.get("config") is not None:
            return meta["config"]
    raise BadInputs(f"no embedded config found in {path}")


def samples_hash(samples: SampleMatrix) -> str:
    h = hashlib.sha256()
    h.update(struct.pack("<QQ", samples.n, samples.d))
    h.update(np.ascontiguousarray(samples.spins).tobytes())
    return h.hexdigest()


def _islb_bytes(samples: SampleMatrix, config: Optional[Dict[str, Any]]) -> bytes:
    header = {
        "n": samples.n,
        "d": samples.d,
        "seed": samples.seed,
        "sampler": samples.sampler,
        "config": config,
    }
    head = json.dumps(header, sort_keys=True, default=to_builtin).encode("utf-8")
    body = np.packbits(samples.spins > 0, axis=1, bitorder="little")
    return ISLB_MAGIC + struct.pack("<I", len(head)) + head + body.tobytes()


def sample_format(path: Path) -> str:
    ext = path.suffix.lower().lstrip(".")
    if ext not in SAMPLE_FORMATS:
        raise BadInputs(f"unsupported sample format {path.suffix!r}; use one of {SAMPLE_FORMATS}")
    return ext


def write_samples(
    samples: SampleMatrix, out_path: Path, config: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    """
    Write spins as CSV (x1..xd columns), packed-bit `.islb` or Parquet, plus a
    `<file>.meta.json` sidecar. Returns the export report.
    """
    fmt = sample_format(out_path)
    _ensure_dir(out_path.parent)

    if fmt == "csv":
        write_table(samples.to_frame(), out_path, config)
    elif fmt == "islb":
        with open(out_path, "wb") as fh:
            fh.write(_islb_bytes(samples, config))
    else:
        samples.to_frame().to_parquet(out_path, engine="pyarrow", index=False)

    report: Dict[str, Any] = {
        "path": str(out_path),
        "format": fmt,
        "n": samples.n,
        "d": samples.d,
        "seed": samples.seed,
        "sampler": samples.sampler,
        "content_hash": samples_hash(samples),
        "config": config,
    }
    meta_path = out_path.with_name(out_path.name + ".meta.json")
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, ensure_ascii=False, default=to_builtin)

    logger.info(
        "Wrote samples: %s (n=%d, d=%d, format=%s)",
        out_path,
        samples.n,
        samples.d,
        fmt,
    )
    return report


def write_graph(g: Union[Graph, Multigraph], out_path: Path) -> Path:
    """Edge list (`d` then `i j [mult]` lines) or JSON by suffix."""
    _ensure_dir(out_path.parent)
    if out_path.suffix.lower() == ".json":
        if isinstance(g, Multigraph):
            payload: Dict[str, Any] = {"d": g.d, "edges": [[i, j, m] for (i, j), m in g.slots()]}
            text = json.dumps(payload)
        else:
            text = g.to_json()
    elif isinstance(g, Multigraph):
        lines = [str(g.d)] + [f"{i} {j} {m}" for (i, j), m in g.slots()]
        text = "\n".join(lines) + "\n"
    else:
        text = g.to_edgelist()
    out_path.write_text(text, encoding="utf-8")
    logger.info("Wrote graph: %s", out_path)
    return out_path


def append_jsonl(path: Path, entry: Dict[str, Any]) -> None:
    """Append one JSON line (oracle transcripts, run log)."""
    _ensure_dir(path.parent)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(entry, ensure_ascii=False, default=to_builtin) + "\n")
