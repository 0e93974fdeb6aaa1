"""The 32-dimensional timbre feature vector.

Layout (frozen; serialization and masks depend on it):

    [0..11]   MFCC coefficients 1..12 (energy coefficient 0 excluded)
    [12..24]  normalized linear-prediction coefficients c'_0..c'_12
    [25]      LPC magnitude (population std of the 13 raw coefficients)
    [26]      spectral-outline regression slope (log power per Hz)
    [27]      spectral-outline RMS residual
    [28..31]  first four cepstrum peak magnitudes above the quefrency floor
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import SPECTRAL_FLOOR, FeatureConfig
from .dsp import (
    Cepstrum,
    Frame,
    apply_window,
    dct_ii,
    log_spectrum,
    power_spectrum,
    real_cepstrum,
    spectral_envelope,
)

FEATURE_DIM = 32
MFCC_SLICE = slice(0, 12)
LPC_SLICE = slice(12, 26)
SO_CP_SLICE = slice(26, 32)

LPC_ORDER = 12
N_MFCC = 12
N_CEPSTRUM_PEAKS = 4
OUTLINE_BAND_HZ = 10_000.0

FEATURE_NAMES = (
    tuple(f"mfcc_{i}" for i in range(1, N_MFCC + 1))
    + tuple(f"lpc_norm_{i}" for i in range(LPC_ORDER + 1))
    + ("lpc_magnitude", "outline_slope", "outline_rms")
    + tuple(f"cepstrum_peak_{i}" for i in range(1, N_CEPSTRUM_PEAKS + 1))
)


class DegenerateFrameWarning(UserWarning):
    """A frame (typically silence) produced a degenerate LPC fit."""


def hz_to_mel(hz: float | np.ndarray) -> float | np.ndarray:
    return 2595.0 * np.log10(1.0 + np.asarray(hz, dtype=np.float64) / 700.0)


def mel_to_hz(mel: float | np.ndarray) -> float | np.ndarray:
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


@dataclass(frozen=True, eq=False)
class MelFilterbank:
    """Triangular filters, 50%-overlapping on the mel scale over [0, fs/2]."""

    weights: np.ndarray  # (n_filters, n_bins)
    centers_hz: np.ndarray
    fs: int
    fft_size: int

    @property
    def n_filters(self) -> int:
        return self.weights.shape[0]


def build_mel_filterbank(fs: int, n_filters: int, fft_size: int) -> MelFilterbank:
    """Build ``n_filters`` triangles with mel-equispaced centers on 0..fs/2."""
    if n_filters < 13:
        raise ValueError(f"need at least 13 mel filters, got {n_filters}")
    edges_hz = mel_to_hz(np.linspace(0.0, hz_to_mel(fs / 2.0), n_filters + 2))
    bin_freqs = np.arange(fft_size // 2 + 1) * (fs / fft_size)

    lo, mid, hi = edges_hz[:-2, None], edges_hz[1:-1, None], edges_hz[2:, None]
    rising = (bin_freqs - lo) / (mid - lo)
    falling = (hi - bin_freqs) / (hi - mid)
    weights = np.maximum(0.0, np.minimum(rising, falling))

    empty = ~(weights > 0).any(axis=1)
    if empty.any():
        first = int(np.flatnonzero(empty)[0])
        raise ValueError(
            f"mel filter {first} covers no spectrum bin at fft_size={fft_size}; "
            "reduce n_filters or enlarge the FFT"
        )
    return MelFilterbank(weights=weights, centers_hz=edges_hz[1:-1], fs=fs, fft_size=fft_size)


@functools.lru_cache(maxsize=8)
def _cached_filterbank(fs: int, n_filters: int, fft_size: int) -> MelFilterbank:
    return build_mel_filterbank(fs, n_filters, fft_size)


def mfcc(
    frame: Frame,
    bank: MelFilterbank,
    n_coeffs: int = N_MFCC,
    floor: float = SPECTRAL_FLOOR,
) -> np.ndarray:
    """DCT of log mel energies; returns coefficients 1..n_coeffs.

    Coefficient 0 carries overall energy and is dropped, which makes the
    result invariant to amplitude scaling (for frames whose mel energies
    all sit above the floor).
    """
    if bank.fs != frame.sample_rate:
        raise ValueError(f"filterbank built for {bank.fs} Hz, frame is {frame.sample_rate} Hz")
    if n_coeffs >= bank.n_filters:
        raise ValueError(f"cannot keep {n_coeffs} coefficients from {bank.n_filters} filters")
    spec = power_spectrum(frame, bank.fft_size)
    energies = bank.weights @ spec.bins
    coeffs = dct_ii(np.log(np.maximum(energies, floor)))
    return coeffs[1 : n_coeffs + 1]


@dataclass(frozen=True, eq=False)
class LpcResult:
    """Linear-prediction fit: raw taps, their normalized form, and magnitude.

    ``coefficients`` is [1, c1..c12]; the filter [1, c1..c12] applied to the
    frame minimizes the mean squared residual. ``residuals`` records the
    objective value per descent iteration (index 0 = zero-tap start).
    """

    coefficients: np.ndarray
    normalized: np.ndarray
    magnitude: float
    residuals: np.ndarray
    degenerate: bool = False


def normalize_lpc(coefficients: np.ndarray) -> tuple[np.ndarray, float]:
    """Divide the 13 coefficients by their population standard deviation.

    Returns (normalized, magnitude). A zero-variance input (all values
    equal) is degenerate: normalized is all zeros and magnitude is 0.
    """
    c = np.asarray(coefficients, dtype=np.float64)
    magnitude = float(np.sqrt(np.mean((c - c.mean()) ** 2)))
    if magnitude == 0.0:
        return np.zeros_like(c), 0.0
    return c / magnitude, magnitude


def lpc_steepest_descent(
    frame: Frame,
    order: int = LPC_ORDER,
    lr: float = 0.06,
    iters: int = 500,
    tol: float = 1e-9,
) -> LpcResult:
    """Fit prediction taps by fixed-step gradient descent and normalize them.

    The residual is taken over the zero-extended frame, so the exact
    minimizer solves the autocorrelation normal equations. c0 stays
    pinned at 1; descent starts from zero taps. An all-zero frame is
    degenerate and returns zeros with a magnitude of 0.
    """
    x = frame.samples
    if len(x) <= order:
        raise ValueError(f"frame of {len(x)} samples cannot support order {order}")
    autocorr = _autocorrelation(x, order)
    if autocorr[0] <= 0.0:
        zero = np.zeros(order + 1)
        full = zero.copy()
        full[0] = 1.0
        return LpcResult(
            coefficients=full,
            normalized=zero,
            magnitude=0.0,
            residuals=np.zeros(1),
            degenerate=True,
        )
    taps, residuals = kernels.lpc_descent(autocorr, lr, iters, tol)
    coefficients = np.concatenate(([1.0], taps))
    normalized, magnitude = normalize_lpc(coefficients)
    return LpcResult(
        coefficients=coefficients,
        normalized=normalized,
        magnitude=magnitude,
        residuals=residuals,
        degenerate=magnitude == 0.0,
    )


def _autocorrelation(x: np.ndarray, order: int) -> np.ndarray:
    n = len(x)
    return np.asarray([x[: n - k] @ x[k:] for k in range(order + 1)]) / n


@dataclass(frozen=True, eq=False)
class OutlineFeatures:
    """Least-squares line through the spectral outline above its first peak."""

    slope: float
    intercept: float
    rms_residual: float
    anchor_hz: float


def outline_regression(envelope: np.ndarray, bin_hz: float, fs: int) -> OutlineFeatures:
    """Regress the envelope over [first peak, first peak + 10 kHz] (capped at fs/2).

    The anchor is the first strict local maximum (bin 0 qualifies when it
    beats bin 1); a peakless envelope falls back to bin 0. The residual is
    reported as an RMS over the band.
    """
    env = np.asarray(envelope, dtype=np.float64)
    n = len(env)
    if n < 3:
        raise ValueError(f"envelope of {n} bins is too short for outline regression")

    k0 = _first_peak(env)
    k_hi = min(n - 1, int((k0 * bin_hz + OUTLINE_BAND_HZ) / bin_hz + 1e-9))
    count = k_hi - k0 + 1
    if count < 2:
        raise ValueError(f"degenerate regression band: bins {k0}..{k_hi}")

    freqs = np.arange(k0, k_hi + 1) * bin_hz
    values = env[k0 : k_hi + 1]
    f_centered = freqs - freqs.mean()
    slope = float((f_centered @ (values - values.mean())) / (f_centered @ f_centered))
    intercept = float(values.mean() - slope * freqs.mean())
    residuals = values - (slope * freqs + intercept)
    rms = float(np.sqrt(residuals @ residuals / count))
    return OutlineFeatures(slope=slope, intercept=intercept, rms_residual=rms, anchor_hz=k0 * bin_hz)


def _first_peak(env: np.ndarray) -> int:
    if env[0] > env[1]:
        return 0
    interior = (env[1:-1] > env[:-2]) & (env[1:-1] > env[2:])
    hits = np.flatnonzero(interior)
    return int(hits[0]) + 1 if hits.size else 0


def cepstrum_peaks(
    ceps: Cepstrum,
    n_peaks: int = N_CEPSTRUM_PEAKS,
    min_quefrency: float = 0.001,
) -> np.ndarray:
    """Magnitudes of the first ``n_peaks`` cepstral peaks, lowest quefrency first.

    A peak is a strict local maximum of the coefficient sequence. The scan
    starts at ``min_quefrency`` (skipping the envelope-dominated region)
    and stops at the symmetry point n/2; missing peaks pad with zeros.
    """
    c = ceps.coefficients
    n = len(c)
    start = max(1, int(np.ceil(min_quefrency * ceps.fs - 1e-9)))
    stop = min(n // 2, n - 2)
    if start > stop:
        raise ValueError(
            f"cepstrum of {n} coefficients has no quefrency range above "
            f"{min_quefrency} s at {ceps.fs} Hz"
        )
    window = c[start : stop + 1]
    is_peak = (window > c[start - 1 : stop]) & (window > c[start + 1 : stop + 2])
    found = window[is_peak][:n_peaks]
    return np.concatenate([found, np.zeros(n_peaks - len(found))])


def extract_features(
    frame: Frame, cfg: FeatureConfig, bank: MelFilterbank | None = None
) -> np.ndarray:
    """Compute the full 32-dimensional feature vector for one frame.

    Spectral features (MFCC, outline, cepstrum peaks) see the windowed
    frame; the LPC fit sees the raw samples. A degenerate frame keeps
    zeros in the LPC slots and emits :class:`DegenerateFrameWarning`.
    """
    fs = frame.sample_rate
    fft_size = cfg.fft_size_for(fs)
    if bank is None:
        bank = _cached_filterbank(fs, cfg.n_mel_filters, fft_size)
    windowed = apply_window(frame, cfg.window)

    lpc = lpc_steepest_descent(frame, LPC_ORDER, cfg.lpc_lr, cfg.lpc_iters, cfg.lpc_tol)
    if lpc.degenerate:
        warnings.warn(
            f"degenerate LPC fit for frame at offset {frame.start_offset}; "
            "LPC features zero-filled",
            DegenerateFrameWarning,
            stacklevel=2,
        )

    spec = power_spectrum(windowed, fft_size)
    envelope = spectral_envelope(log_spectrum(spec), cfg.keep_coeffs)
    outline = outline_regression(envelope, spec.bin_hz, fs)
    peaks = cepstrum_peaks(
        real_cepstrum(windowed, fft_size), N_CEPSTRUM_PEAKS, cfg.min_quefrency
    )

    vector = np.empty(FEATURE_DIM)
    vector[MFCC_SLICE] = mfcc(windowed, bank)
    vector[12:25] = lpc.normalized
    vector[25] = lpc.magnitude
    vector[26] = outline.slope
    vector[27] = outline.rms_residual
    vector[28:32] = peaks
    if not np.isfinite(vector).all():
        bad = FEATURE_NAMES[int(np.flatnonzero(~np.isfinite(vector))[0])]
        raise ValueError(f"non-finite feature {bad} at frame offset {frame.start_offset}")
    return vector


def feature_mask(mfcc: bool = True, lpc: bool = True, so_cp: bool = True) -> np.ndarray:
    """Indices of the enabled feature groups, in layout order."""
    parts = []
    if mfcc:
        parts.append(np.arange(MFCC_SLICE.start, MFCC_SLICE.stop))
    if lpc:
        parts.append(np.arange(LPC_SLICE.start, LPC_SLICE.stop))
    if so_cp:
        parts.append(np.arange(SO_CP_SLICE.start, SO_CP_SLICE.stop))
    if not parts:
        raise ValueError("empty feature mask: enable at least one group")
    return np.concatenate(parts)
