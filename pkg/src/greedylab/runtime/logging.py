"""
Structured logging and witness recording.

structlog is configured to render on standard error so that reports written
to standard output stay byte-stable. Witness sinks persist one JSON record
per estimate or check result, so every headline number can be re-verified
offline.
"""

import gzip
import json
import logging
import sys
import threading
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import structlog


def configure_logging(level: str = "warning", json_output: bool = False) -> None:
    """
    Configure structlog for the command-line front end.

    Args:
        level: Minimum level name (debug, info, warning, error)
        json_output: Render events as JSON lines instead of key=value text
    """
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise ValueError(f"Unknown log level: {level}")

    renderer: Any = (
        structlog.processors.JSONRenderer(sort_keys=True)
        if json_output
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def get_logger(name: str) -> Any:
    """Return a bound structlog logger for a module."""
    return structlog.get_logger(name)


@dataclass
class WitnessRecord:
    """One certified number with the data needed to re-check it."""

    category: str  # "constant", "check" or "example"
    subject: str  # constant kind, check id or example name
    space: str  # canonical space or model label
    value: float
    witness: Dict[str, Any] = field(default_factory=dict)  # vector literals, sets, notes
    seed: Optional[int] = None


def _to_builtin(obj: Any) -> Any:
    """Recursively convert numpy types to Python types."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): _to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = sorted(obj) if isinstance(obj, (frozenset, set)) else obj
        return [_to_builtin(v) for v in items]
    return obj


class WitnessSink(ABC):
    """Abstract destination for witness records."""

    @abstractmethod
    def write(self, record: WitnessRecord) -> None:
        """Write a record to the sink."""
        pass

    @abstractmethod
    def close(self) -> None:
        """Flush and release the sink."""
        pass


class FileWitnessSink(WitnessSink):
    """JSON-lines witness file, gzip-compressed when the path ends in .gz."""

    def __init__(self, path: Path, buffer_size: int = 64):
        self.path = Path(path)
        self.buffer_size = buffer_size
        self.compress = self.path.suffix == ".gz"
        self._buffer: List[WitnessRecord] = []
        self._lock = threading.Lock()
        # Truncate on open; records of a run belong together.
        self._open("wt").close()

    def _open(self, mode: str) -> Any:
        if self.compress:
            return gzip.open(self.path, mode, encoding="utf-8")
        return open(self.path, mode, encoding="utf-8")

    def _write_batch(self, records: List[WitnessRecord]) -> None:
        with self._open("at") as handle:
            for record in records:
                handle.write(json.dumps(_to_builtin(asdict(record)), sort_keys=True) + "\n")

    def write(self, record: WitnessRecord) -> None:
        with self._lock:
            self._buffer.append(record)
            if len(self._buffer) >= self.buffer_size:
                self._write_batch(self._buffer)
                self._buffer = []

    def close(self) -> None:
        with self._lock:
            if self._buffer:
                self._write_batch(self._buffer)
                self._buffer = []


class MemoryWitnessSink(WitnessSink):
    """In-memory sink for tests and short sessions."""

    def __init__(self, max_records: int = 10000):
        self.max_records = max_records
        self._records: List[WitnessRecord] = []
        self._lock = threading.Lock()

    def write(self, record: WitnessRecord) -> None:
        with self._lock:
            self._records.append(record)
            if len(self._records) > self.max_records:
                self._records.pop(0)

    def close(self) -> None:
        pass

    def get_records(self) -> List[WitnessRecord]:
        with self._lock:
            return list(self._records)


def read_witness_file(path: Path) -> List[Dict[str, Any]]:
    """Load every record of a witness file written by FileWitnessSink."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]
