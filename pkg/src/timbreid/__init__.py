"""Instrument timbre identification from short audio windows.

The pipeline: 100 ms frames -> a 32-dimensional feature vector (MFCC,
normalized linear-prediction coefficients, spectral-outline regression,
cepstrum peaks) -> one-vs-one linear SVMs -> per-window labels, smoothed
over a trailing second for streaming use.
"""

from .config import FeatureConfig, config_hash, load_config, save_config
from .dataset import (
    MASK_NAMES,
    ConfusionMatrix,
    LabeledDataset,
    ablation_run,
    build_dataset,
    evaluate,
    split_half,
)
from .dsp import (
    AudioClip,
    Cepstrum,
    Frame,
    Spectrum,
    apply_window,
    dct_ii,
    frame_signal,
    idct_ii,
    log_spectrum,
    power_spectrum,
    real_cepstrum,
    spectral_envelope,
)
from .features import (
    FEATURE_DIM,
    FEATURE_NAMES,
    LPC_SLICE,
    MFCC_SLICE,
    SO_CP_SLICE,
    DegenerateFrameWarning,
    build_mel_filterbank,
    cepstrum_peaks,
    extract_features,
    feature_mask,
    lpc_steepest_descent,
    mfcc,
    normalize_lpc,
    outline_regression,
)
from .kernels import BACKEND
from .stream import StreamEvent, StreamState, majority
from .svm import (
    ConfigMismatchError,
    ModelFormatError,
    MulticlassModel,
    SvmConfig,
    class_pairs,
    class_weights,
    load_model,
    predict,
    predict_batch,
    save_model,
    train_all_pairs,
)
from .synth import DEFAULT_PITCHES, DEFAULT_PROFILES, SynthProfile, synth_corpus, synth_note
from .wavfile import WavFormatError, read_wav, write_wav

__version__ = "0.1.0"

__all__ = [
    "AudioClip", "BACKEND", "ConfigMismatchError", "ConfusionMatrix",
    "Cepstrum", "DEFAULT_PITCHES", "DEFAULT_PROFILES", "DegenerateFrameWarning",
    "FEATURE_DIM", "FEATURE_NAMES", "FeatureConfig", "Frame", "LPC_SLICE",
    "LabeledDataset", "MASK_NAMES", "MFCC_SLICE", "ModelFormatError",
    "MulticlassModel", "SO_CP_SLICE", "Spectrum", "StreamEvent", "StreamState",
    "SvmConfig", "SynthProfile", "WavFormatError", "ablation_run",
    "apply_window", "build_dataset", "build_mel_filterbank", "cepstrum_peaks",
    "class_pairs", "class_weights", "config_hash", "dct_ii", "evaluate",
    "extract_features", "feature_mask", "frame_signal", "idct_ii",
    "load_config", "load_model", "log_spectrum", "lpc_steepest_descent",
    "majority", "mfcc", "normalize_lpc", "outline_regression",
    "power_spectrum", "predict", "predict_batch", "read_wav", "real_cepstrum",
    "save_config", "save_model", "spectral_envelope", "split_half",
    "synth_corpus", "synth_note", "train_all_pairs", "write_wav",
]
