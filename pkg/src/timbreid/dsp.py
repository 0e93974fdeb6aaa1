"""Deterministic signal-processing primitives.

Framing, windowing, power spectra, orthonormal DCT, spectral envelopes and
the real cepstrum. Everything here is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .config import SPECTRAL_FLOOR, WINDOW_KINDS, next_pow2

__all__ = [
    "AudioClip",
    "Frame",
    "Spectrum",
    "Cepstrum",
    "frame_signal",
    "apply_window",
    "power_spectrum",
    "log_spectrum",
    "dct_ii",
    "idct_ii",
    "spectral_envelope",
    "real_cepstrum",
    "next_pow2",
]


@dataclass(frozen=True, eq=False)
class AudioClip:
    """Mono sample buffer in [-1, 1] plus its sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"expected a mono 1-d sample buffer, got shape {samples.shape}")
        object.__setattr__(self, "samples", samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True, eq=False)
class Frame:
    """One fixed-length analysis slice of a clip."""

    samples: np.ndarray
    sample_rate: int
    start_offset: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided power spectrum over [0, fs/2].

    Normalization: negative-frequency energy is folded into bins
    1..n/2-1 and everything is divided by the transform length, so
    ``bins.sum()`` equals the time-domain energy of the (zero-padded,
    windowed) frame — Parseval holds exactly.
    """

    bins: np.ndarray
    bin_hz: float
    fs: int


@dataclass(frozen=True, eq=False)
class Cepstrum:
    """Real cepstrum; coefficient k lives at quefrency k / fs seconds."""

    coefficients: np.ndarray
    fs: int

    @property
    def quefrencies(self) -> np.ndarray:
        return np.arange(len(self.coefficients)) / self.fs


def frame_signal(clip: AudioClip, window_seconds: float, hop_seconds: float) -> list[Frame]:
    """Slice a clip into fixed-length frames; a trailing partial window is dropped."""
    if not 0 < hop_seconds <= window_seconds:
        raise ValueError(f"hop ({hop_seconds}s) must be in (0, window={window_seconds}s]")
    window = int(round(window_seconds * clip.sample_rate))
    hop = int(round(hop_seconds * clip.sample_rate))
    if window < 1 or hop < 1:
        raise ValueError(f"window/hop too small at {clip.sample_rate} Hz")
    n = len(clip.samples)
    if n < window:
        raise ValueError(
            f"clip too short: need at least {window} samples "
            f"({window_seconds} s at {clip.sample_rate} Hz), got {n}"
        )
    count = (n - window) // hop + 1
    return [
        Frame(clip.samples[i * hop : i * hop + window].copy(), clip.sample_rate, i * hop)
        for i in range(count)
    ]


def apply_window(frame: Frame, kind: str = "hamming") -> Frame:
    """Multiply a frame by its taper. ``rectangular`` is the identity."""
    if len(frame) == 0:
        raise ValueError("cannot window an empty frame")
    if kind == "rectangular":
        return frame
    if kind == "hamming":
        taper = np.hamming(len(frame))
        return Frame(frame.samples * taper, frame.sample_rate, frame.start_offset)
    raise ValueError(f"unknown window kind {kind!r}; expected one of {WINDOW_KINDS}")


def power_spectrum(frame: Frame, fft_size: int) -> Spectrum:
    """Energy-preserving one-sided power spectrum of the zero-padded frame."""
    _check_fft_size(fft_size, len(frame))
    spectrum = np.fft.rfft(frame.samples, fft_size)
    power = (spectrum.real**2 + spectrum.imag**2) / fft_size
    # Fold the redundant negative frequencies into the interior bins;
    # DC and Nyquist have no mirror.
    if len(power) > 2:
        power[1:-1] *= 2.0
    return Spectrum(bins=power, bin_hz=frame.sample_rate / fft_size, fs=frame.sample_rate)


def log_spectrum(spec: Spectrum, floor: float = SPECTRAL_FLOOR) -> np.ndarray:
    """Natural log of the power bins, clamped below at ``floor``."""
    if floor <= 0:
        raise ValueError(f"spectral floor must be positive, got {floor}")
    return np.log(np.maximum(spec.bins, floor))


def dct_ii(values: np.ndarray) -> np.ndarray:
    """Orthonormal DCT-II."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("dct_ii of an empty sequence")
    return scipy.fft.dct(values, type=2, norm="ortho")


def idct_ii(coeffs: np.ndarray) -> np.ndarray:
    """Inverse of :func:`dct_ii` (orthonormal DCT-III)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.size == 0:
        raise ValueError("idct_ii of an empty sequence")
    return scipy.fft.idct(coeffs, type=2, norm="ortho")


def spectral_envelope(log_spec: np.ndarray, keep_coeffs: int) -> np.ndarray:
    """Smooth outline of a log spectrum: truncate its DCT and transform back."""
    log_spec = np.asarray(log_spec, dtype=np.float64)
    if not 1 <= keep_coeffs <= len(log_spec):
        raise ValueError(
            f"keep_coeffs must be in [1, {len(log_spec)}], got {keep_coeffs}"
        )
    coeffs = dct_ii(log_spec)
    coeffs[keep_coeffs:] = 0.0
    return idct_ii(coeffs)


def real_cepstrum(frame: Frame, fft_size: int, floor: float = SPECTRAL_FLOOR) -> Cepstrum:
    """Inverse transform of the floored log-magnitude spectrum."""
    _check_fft_size(fft_size, len(frame))
    if floor <= 0:
        raise ValueError(f"spectral floor must be positive, got {floor}")
    magnitude = np.abs(np.fft.rfft(frame.samples, fft_size))
    log_mag = np.log(np.maximum(magnitude, floor))
    coeffs = np.fft.irfft(log_mag, fft_size)
    return Cepstrum(coefficients=coeffs, fs=frame.sample_rate)


def _check_fft_size(fft_size: int, frame_length: int) -> None:
    if fft_size < 1 or (fft_size & (fft_size - 1)) != 0:
        raise ValueError(f"fft_size must be a power of two, got {fft_size}")
    if fft_size < frame_length:
        raise ValueError(
            f"fft_size {fft_size} is smaller than the {frame_length}-sample frame"
        )
