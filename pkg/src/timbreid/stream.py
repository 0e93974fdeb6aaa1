"""Streaming prediction: one label per window, smoothed by a 1 s majority.

Samples arrive in chunks of any size. The state re-buffers them into
exact analysis windows, so the emitted event sequence depends only on
the sample stream, never on how it was chunked.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from .config import FeatureConfig, config_hash
from .dsp import Frame
from .features import extract_features
from .svm import ConfigMismatchError, MulticlassModel, predict


@dataclass(frozen=True)
class StreamEvent:
    """One completed window: its own label plus the ring-majority label."""

    time: float  # window start, seconds since stream start
    window_label: str
    smoothed_label: str

    def line(self) -> str:
        return f"{self.time:.3f}\t{self.window_label}\t{self.smoothed_label}"


def majority(ring) -> str:
    """Modal label; ties go to the tied label occurring most recently."""
    labels = list(ring)
    if not labels:
        raise ValueError("majority of an empty ring is undefined")
    counts = Counter(labels)
    top = max(counts.values())
    tied = {label for label, c in counts.items() if c == top}
    for label in reversed(labels):
        if label in tied:
            return label
    raise AssertionError("unreachable")


class StreamState:
    """Single-owner mutable stream buffer around a trained model.

    The smoothing ring holds the last ceil(1 s / hop) window labels;
    before it fills, the majority runs over whatever is present.
    """

    def __init__(self, model: MulticlassModel, sample_rate: int,
                 cfg: FeatureConfig | None = None):
        cfg = cfg or FeatureConfig()
        if model.config_hash and model.config_hash != config_hash(cfg):
            raise ConfigMismatchError(
                f"model trained under config {model.config_hash}, "
                f"stream configured as {config_hash(cfg)}"
            )
        self.model = model
        self.cfg = cfg
        self.sample_rate = sample_rate
        self.ring_length = math.ceil(1.0 / cfg.hop_seconds)
        self.ring: deque[str] = deque(maxlen=self.ring_length)
        self.emitted = 0
        self._window = cfg.window_length(sample_rate)
        self._hop = cfg.hop_length(sample_rate)
        self._buffer = np.empty(0)

    def push_samples(self, samples) -> list[StreamEvent]:
        """Absorb a chunk; return one event per analysis window completed."""
        self._buffer = np.concatenate([self._buffer, np.asarray(samples, dtype=np.float64)])
        events = []
        while len(self._buffer) >= self._window:
            start = self.emitted * self._hop
            frame = Frame(samples=self._buffer[: self._window].copy(),
                          sample_rate=self.sample_rate, start_offset=start)
            label = predict(self.model, extract_features(frame, self.cfg))
            self.ring.append(label)
            events.append(StreamEvent(
                time=start / self.sample_rate,
                window_label=label,
                smoothed_label=majority(self.ring),
            ))
            self.emitted += 1
            self._buffer = self._buffer[self._hop :]
        return events
