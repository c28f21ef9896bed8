"""Runtime plumbing: structured logging and witness sinks."""

from greedylab.runtime.logging import (
    FileWitnessSink,
    MemoryWitnessSink,
    WitnessRecord,
    WitnessSink,
    configure_logging,
    get_logger,
    read_witness_file,
)

__all__ = [
    "FileWitnessSink",
    "MemoryWitnessSink",
    "WitnessRecord",
    "WitnessSink",
    "configure_logging",
    "get_logger",
    "read_witness_file",
]
