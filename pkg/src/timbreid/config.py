"""Feature-pipeline configuration and its on-disk key=value format.

A trained model stores a hash of the configuration that produced its
training features; prediction paths compare hashes so a model is never
silently fed vectors from a differently-configured extractor.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields
from pathlib import Path

# Linear power floor applied before any log; keeps silence finite.
SPECTRAL_FLOOR = 1e-10

WINDOW_KINDS = ("rectangular", "hamming")


@dataclass(frozen=True)
class FeatureConfig:
    """Everything that shapes the 32-dimensional feature vector.

    ``fft_size=None`` means "smallest power of two that holds one window",
    recomputed per sample rate.
    """

    window_seconds: float = 0.1
    hop_seconds: float = 0.1
    window: str = "hamming"
    fft_size: int | None = None
    n_mel_filters: int = 26
    keep_coeffs: int = 30
    lpc_lr: float = 0.06
    lpc_iters: int = 500
    lpc_tol: float = 1e-9
    min_quefrency: float = 0.001

    def __post_init__(self) -> None:
        if not 0 < self.hop_seconds <= self.window_seconds:
            raise ValueError(
                f"hop ({self.hop_seconds}s) must be in (0, window={self.window_seconds}s]"
            )
        if self.window not in WINDOW_KINDS:
            raise ValueError(f"unknown window kind {self.window!r}; expected one of {WINDOW_KINDS}")
        if self.fft_size is not None and not _is_pow2(self.fft_size):
            raise ValueError(f"fft_size must be a power of two, got {self.fft_size}")
        if self.n_mel_filters < 13:
            raise ValueError(f"n_mel_filters must be >= 13, got {self.n_mel_filters}")
        if self.keep_coeffs < 1:
            raise ValueError(f"keep_coeffs must be >= 1, got {self.keep_coeffs}")
        if self.lpc_lr <= 0 or self.lpc_iters < 1 or self.lpc_tol < 0:
            raise ValueError("lpc_lr must be > 0, lpc_iters >= 1, lpc_tol >= 0")
        if self.min_quefrency < 0:
            raise ValueError(f"min_quefrency must be >= 0, got {self.min_quefrency}")

    def window_length(self, sample_rate: int) -> int:
        return int(round(self.window_seconds * sample_rate))

    def hop_length(self, sample_rate: int) -> int:
        return int(round(self.hop_seconds * sample_rate))

    def fft_size_for(self, sample_rate: int) -> int:
        if self.fft_size is not None:
            n = self.window_length(sample_rate)
            if self.fft_size < n:
                raise ValueError(
                    f"configured fft_size {self.fft_size} is smaller than the "
                    f"{n}-sample window at {sample_rate} Hz"
                )
            return self.fft_size
        return next_pow2(self.window_length(sample_rate))

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "fft_size" and value is None:
                value = "auto"
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"


def next_pow2(n: int) -> int:
    """Smallest power of two >= n (and >= 1)."""
    if n <= 1:
        return 1
    return 1 << (n - 1).bit_length()


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def config_hash(cfg: FeatureConfig) -> str:
    """Short stable fingerprint of a feature configuration."""
    return hashlib.sha256(cfg.to_text().encode()).hexdigest()[:16]


def save_config(cfg: FeatureConfig, path: str | Path) -> None:
    Path(path).write_text(cfg.to_text())


def load_config(path: str | Path) -> FeatureConfig:
    """Parse the key=value text format written by :func:`save_config`.

    Unknown keys and malformed lines raise; '#' starts a comment.
    """
    field_types = {f.name: f.type for f in fields(FeatureConfig)}
    kwargs: dict[str, object] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in field_types:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        kwargs[key] = _parse_value(key, value)
    return FeatureConfig(**kwargs)


def _parse_value(key: str, value: str):
    if key == "window":
        return value
    if key == "fft_size":
        return None if value == "auto" else int(value)
    if key in ("n_mel_filters", "keep_coeffs", "lpc_iters"):
        return int(value)
    return float(value)
