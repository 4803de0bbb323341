from .exporter import (
    append_jsonl,
    read_embedded_config,
    write_graph,
    write_json,
    write_samples,
    write_table,
)

__all__ = [
    "append_jsonl",
    "read_embedded_config",
    "write_graph",
    "write_json",
    "write_samples",
    "write_table",
]
