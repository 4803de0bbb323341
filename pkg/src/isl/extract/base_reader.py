# src/isl/extract/base_reader.py
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict


class BaseReader(ABC):

    @abstractmethod
    def read(self, path: Path) -> Any:
        """Reads a file and returns the parsed object."""
        pass

    @abstractmethod
    def metadata(self) -> Dict[str, Any]:
        """Returns metadata about the last read."""
        pass
