"""sciquest: a deterministic tile-world engine and benchmark for discovery tasks."""

ENGINE_VERSION = "1.0.0"
PROTOCOL_VERSION = 1

__all__ = ["ENGINE_VERSION", "PROTOCOL_VERSION"]
