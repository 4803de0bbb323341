# src/isl/extract/file_detector.py
from pathlib import Path

from ..errors import BadInputs

GRAPH_SUFFIXES = {".edges": "edgelist", ".txt": "edgelist", ".json": "json"}
SAMPLE_SUFFIXES = {".csv": "csv", ".islb": "islb", ".parquet": "parquet"}


def detect_file_type(path: Path) -> str:
    ext = path.suffix.lower()
    if ext in GRAPH_SUFFIXES:
        return GRAPH_SUFFIXES[ext]
    if ext in SAMPLE_SUFFIXES:
        return SAMPLE_SUFFIXES[ext]
    raise BadInputs(f"Unsupported file type: {ext}")
