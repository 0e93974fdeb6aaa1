"""Additive-synthesis test corpus.

Six hand-tuned instrument profiles, distinguishable by harmonic recipe,
spectral rolloff, envelope, and vibrato. Every note is generated from a
counter-keyed RNG, so the same seed always yields byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .wavfile import write_wav


@dataclass(frozen=True)
class SynthProfile:
    """Recipe for one synthetic instrument class.

    ``harmonic_amplitudes[h-1]`` weights partial h before the rolloff of
    ``rolloff`` dB per octave is applied. ``decay`` is an exponential
    time constant; 0 means the note sustains. Vibrato depth is in cents.
    """

    name: str
    harmonic_amplitudes: tuple[float, ...]
    rolloff: float = 0.0
    attack: float = 0.01
    decay: float = 0.0
    vibrato_rate: float = 0.0
    vibrato_depth: float = 0.0
    noise_floor: float = 0.0

    def __post_init__(self):
        amps = self.harmonic_amplitudes
        if not amps or min(amps) < 0 or max(amps) <= 0:
            raise ValueError(f"profile {self.name!r}: partial weights must be "
                             "non-negative with at least one positive")
        for field_name in ("attack", "decay", "vibrato_rate", "vibrato_depth", "noise_floor"):
            if getattr(self, field_name) < 0:
                raise ValueError(f"profile {self.name!r}: {field_name} must be >= 0")


DEFAULT_PROFILES = (
    SynthProfile("brass", (0.8, 1.0, 0.95, 0.9, 0.8, 0.7, 0.6, 0.55, 0.5, 0.45),
                 rolloff=2.5, attack=0.06, vibrato_rate=4.0, vibrato_depth=12.0,
                 noise_floor=0.002),
    SynthProfile("clarinet", (1.0, 0.04, 0.75, 0.05, 0.5, 0.04, 0.32, 0.03, 0.2),
                 rolloff=4.0, attack=0.03, noise_floor=0.001),
    SynthProfile("flute", (1.0, 0.35, 0.14, 0.05),
                 rolloff=9.0, attack=0.04, vibrato_rate=5.0, vibrato_depth=20.0,
                 noise_floor=0.004),
    SynthProfile("organ", (1.0, 0.9, 0.6, 0.8, 0.1, 0.7, 0.05, 0.6),
                 rolloff=1.5, attack=0.008, noise_floor=0.0005),
    SynthProfile("pluck", (1.0, 0.7, 0.5, 0.4, 0.3, 0.25, 0.2, 0.15),
                 rolloff=3.0, attack=0.002, decay=0.25, noise_floor=0.001),
    SynthProfile("strings", (1.0, 0.9, 0.8, 0.75, 0.7, 0.65, 0.6, 0.55, 0.5, 0.45),
                 rolloff=5.0, attack=0.09, vibrato_rate=6.0, vibrato_depth=35.0,
                 noise_floor=0.002),
)

# Chromatic octave from A3.
DEFAULT_PITCHES = tuple(220.0 * 2.0 ** (k / 12.0) for k in range(12))


def synth_note(
    profile: SynthProfile,
    pitch_hz: float,
    duration: float,
    fs: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Render one note, peak-normalized to 0.8.

    Partials at or above the Nyquist frequency are dropped rather than
    aliased. Vibrato modulates the phase of every partial coherently.
    """
    if pitch_hz <= 0:
        raise ValueError(f"pitch must be positive, got {pitch_hz}")
    if pitch_hz >= fs / 2:
        raise ValueError(f"pitch {pitch_hz} Hz is at or above Nyquist ({fs / 2} Hz)")
    n = int(round(duration * fs))
    t = np.arange(n) / fs

    if profile.vibrato_rate > 0 and profile.vibrato_depth > 0:
        bend = 2.0 ** (profile.vibrato_depth / 1200.0
                       * np.sin(2 * np.pi * profile.vibrato_rate * t))
        phase = 2 * np.pi * np.cumsum(pitch_hz * bend) / fs
    else:
        phase = 2 * np.pi * pitch_hz * (t + 1.0 / fs)

    x = np.zeros(n)
    for h, weight in enumerate(profile.harmonic_amplitudes, start=1):
        if h * pitch_hz >= fs / 2 or weight == 0.0:
            continue
        amp = weight * 10.0 ** (-profile.rolloff * np.log2(h) / 20.0)
        x += amp * np.sin(h * phase)

    if profile.attack > 0:
        x *= np.minimum(1.0, t / profile.attack)
    if profile.decay > 0:
        x *= np.exp(-t / profile.decay)
    if profile.noise_floor > 0:
        x = x + profile.noise_floor * rng.standard_normal(n)

    peak = np.abs(x).max()
    if peak > 0:
        x *= 0.8 / peak
    return x


def synth_corpus(
    out_dir,
    profiles=DEFAULT_PROFILES,
    pitches=DEFAULT_PITCHES,
    per_pitch: int = 3,
    fs: int = 16000,
    seed: int = 0,
    duration: float = 1.05,
) -> Path:
    """Write a root/<class>/*.wav corpus and return its root.

    One file per (profile, pitch, note index). The RNG for each note is
    keyed on (seed, profile index, pitch index, note index), never on
    call order, so any subset regenerates identically.
    """
    if not pitches:
        raise ValueError("need at least one pitch")
    if per_pitch < 1:
        raise ValueError(f"per_pitch must be at least 1, got {per_pitch}")
    names = [p.name for p in profiles]
    if len(set(names)) != len(names):
        raise ValueError(f"profile names must be distinct, got {names}")
    for pitch in pitches:
        if pitch >= fs / 2:
            raise ValueError(f"pitch {pitch} Hz is at or above Nyquist ({fs / 2} Hz)")

    root = Path(out_dir)
    for pi, profile in enumerate(profiles):
        class_dir = root / profile.name
        class_dir.mkdir(parents=True, exist_ok=True)
        for qi, pitch in enumerate(pitches):
            for k in range(per_pitch):
                rng = np.random.default_rng([seed, pi, qi, k])
                note = synth_note(profile, pitch, duration, fs, rng)
                write_wav(class_dir / f"{profile.name}_p{qi:02d}_n{k:02d}.wav", note, fs)
    return root
