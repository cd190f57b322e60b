"""
utils.py — Helper utilities for JordanCone
"""
import hashlib
import os
import time

SEED_ENV_VAR = "JORDAN_CONE_SEED"
_MASK64 = (1 << 64) - 1


def stable_hash64(label: str) -> int:
    """64-bit blake2b digest of *label* (stable across runs, unlike hash())."""
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed(seed: int, label: str) -> int:
    """Child seed for a named sub-stream: seed XOR H(label)."""
    return (int(seed) & _MASK64) ^ stable_hash64(label)


def resolve_seed(explicit: int | None) -> int:
    """
    --seed wins, then the JORDAN_CONE_SEED environment variable, then 0.
    A malformed environment value is ignored.
    """
    if explicit is not None:
        return int(explicit) & _MASK64
    raw = os.environ.get(SEED_ENV_VAR, "").strip()
    if raw:
        try:
            return int(raw, 0) & _MASK64
        except ValueError:
            pass
    return 0


def format_residual(value: float | None) -> str:
    """'1.2e-14', or 'error' when a check never produced a residual."""
    if value is None:
        return "error"
    return f"{value:.1e}"


def format_duration_ms(ms: float) -> str:
    """Convert milliseconds to '850 ms', '12.4 s' or 'MM:SS'."""
    if ms < 1000:
        return f"{ms:.0f} ms"
    seconds = ms / 1000.0
    if seconds < 60:
        return f"{seconds:.1f} s"
    seconds = int(seconds)
    return f"{seconds // 60:02d}:{seconds % 60:02d}"


class Stopwatch:
    """Wall-clock timer for suite runs."""

    def __init__(self):
        self.start_time = None

    def start(self):
        self.start_time = time.perf_counter()

    def elapsed_ms(self) -> float:
        if self.start_time is None:
            return 0.0
        return (time.perf_counter() - self.start_time) * 1000.0
