from .file_detector import detect_file_type
from .graph_reader import GraphReader
from .sample_reader import SampleReader

__all__ = ["GraphReader", "SampleReader", "detect_file_type"]
