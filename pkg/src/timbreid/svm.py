"""Class-weighted linear SVMs and the one-vs-one multiclass model.

One binary classifier is trained per unordered class pair. Prediction
runs every pair, gives the winner one vote, and picks the class with the
most votes; ties fall back to the summed absolute decision values of each
class's matches, then to class order.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from . import kernels

STD_FLOOR = 1e-8
MODEL_MAGIC = b"TMBR"
MODEL_VERSION = 1


class ModelFormatError(ValueError):
    """Serialized model bytes are malformed or truncated."""


class ConfigMismatchError(ValueError):
    """Model was trained under a different feature configuration."""


@dataclass(frozen=True)
class SvmConfig:
    """Training hyperparameters for the binary SVMs.

    The trainer is full-batch and deterministic; ``seed`` is accepted for
    interface stability but has no effect on the result.
    """

    C: float = 10.0
    epochs: int = 400
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be at least 1, got {self.epochs}")


@dataclass(frozen=True, eq=False)
class FeatureScaler:
    """Per-dimension standardization fitted on training data."""

    mean: np.ndarray
    std: np.ndarray

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.std


def fit_scaler(X: np.ndarray) -> FeatureScaler:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or len(X) == 0:
        raise ValueError("scaler needs a non-empty 2-d sample matrix")
    return FeatureScaler(
        mean=X.mean(axis=0), std=np.maximum(X.std(axis=0), STD_FLOOR)
    )


def class_weights(labels, classes: tuple[str, ...]) -> np.ndarray:
    """Inverse class frequencies 1/N_t, aligned with ``classes``.

    Weighting each sample's hinge loss by 1/N_t gives every class equal
    pull on the objective regardless of how many samples it contributed.
    """
    labels = np.asarray(labels)
    counts = np.array([(labels == c).sum() for c in classes], dtype=np.float64)
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        raise ValueError(f"class {classes[int(missing[0])]!r} has no samples")
    return 1.0 / counts


@dataclass(frozen=True, eq=False)
class LinearSvm:
    weights: np.ndarray
    bias: float

    def decision(self, x: np.ndarray) -> float:
        return float(self.weights @ x + self.bias)


def train_binary(
    X: np.ndarray,
    y: np.ndarray,
    sample_weights: np.ndarray,
    config: SvmConfig = SvmConfig(),
) -> LinearSvm:
    """Fit one weighted soft-margin SVM by averaged subgradient descent.

    ``y`` must be +1/-1. The objective is |w|^2/2 + C * sum_j s_j *
    hinge(y_j, x_j) with s_j the per-sample weight.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    s = np.asarray(sample_weights, dtype=np.float64)
    if X.ndim != 2 or len(X) != len(y) or len(y) != len(s):
        raise ValueError("X, y, and sample_weights must agree on sample count")
    if not np.isin(y, (-1.0, 1.0)).all():
        raise ValueError("labels must be +1 or -1")
    w, b = kernels.svm_fit(X, y, s, config.C, config.epochs)
    return LinearSvm(weights=w, bias=b)


def class_pairs(k: int) -> list[tuple[int, int]]:
    """Canonical one-vs-one pair order: (0,1), (0,2), .. ascending."""
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


@dataclass(frozen=True, eq=False)
class MulticlassModel:
    classes: tuple[str, ...]
    weights_per_class: np.ndarray
    scaler: FeatureScaler
    svms: tuple[LinearSvm, ...] = field(repr=False)
    config_hash: str = ""

    @property
    def dim(self) -> int:
        return len(self.scaler.mean)


def train_all_pairs(
    X: np.ndarray,
    labels,
    config: SvmConfig = SvmConfig(),
    config_hash: str = "",
    classes: tuple[str, ...] | None = None,
) -> MulticlassModel:
    """Train all C(k,2) pairwise SVMs on standardized features."""
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels)
    if classes is None:
        classes = tuple(sorted(set(labels.tolist())))
    if len(classes) < 2:
        raise ValueError(f"need at least 2 classes, got {len(classes)}")
    per_class = class_weights(labels, classes)

    scaler = fit_scaler(X)
    Xs = scaler.transform(X)

    svms = []
    for i, j in class_pairs(len(classes)):
        mask_i = labels == classes[i]
        mask_j = labels == classes[j]
        rows = mask_i | mask_j
        y = np.where(mask_i[rows], 1.0, -1.0)
        s = np.where(mask_i[rows], per_class[i], per_class[j])
        svms.append(train_binary(Xs[rows], y, s, config))

    return MulticlassModel(
        classes=classes,
        weights_per_class=per_class,
        scaler=scaler,
        svms=tuple(svms),
        config_hash=config_hash,
    )


def decision_values(model: MulticlassModel, x: np.ndarray) -> np.ndarray:
    """Raw pairwise decisions for one feature vector, in pair order."""
    xs = model.scaler.transform(np.asarray(x, dtype=np.float64))
    return np.array([svm.decision(xs) for svm in model.svms])


def predict(
    model: MulticlassModel, x: np.ndarray, config_hash: str | None = None
) -> str:
    """Predict the class of one feature vector by pairwise voting.

    A positive decision on pair (i, j) is a vote for class i, otherwise
    class j. Vote ties break by the larger sum of |decision| over the
    tied class's matches, then by class order.
    """
    if config_hash is not None and config_hash != model.config_hash:
        raise ConfigMismatchError(
            f"model trained under config {model.config_hash}, got {config_hash}"
        )
    votes, margins = _tally(model, x)
    best = np.flatnonzero(votes == votes.max())
    if len(best) > 1:
        best = best[margins[best] == margins[best].max()]
    return model.classes[int(best[0])]


def _tally(model: MulticlassModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = len(model.classes)
    votes = np.zeros(k, dtype=np.int64)
    margins = np.zeros(k)
    for (i, j), d in zip(class_pairs(k), decision_values(model, x)):
        votes[i if d > 0 else j] += 1
        margins[i] += abs(d)
        margins[j] += abs(d)
    return votes, margins


def predict_batch(model: MulticlassModel, X: np.ndarray) -> list[str]:
    return [predict(model, x) for x in np.asarray(X, dtype=np.float64)]


def _take(data: bytes, cursor: int, count: int, what: str) -> tuple[bytes, int]:
    if cursor + count > len(data):
        raise ModelFormatError(
            f"model truncated at byte {cursor}: needed {count} bytes for {what}, "
            f"only {len(data) - cursor} left"
        )
    return data[cursor : cursor + count], cursor + count


def _take_str(data: bytes, cursor: int, what: str) -> tuple[str, int]:
    raw, cursor = _take(data, cursor, 2, f"{what} length")
    (n,) = struct.unpack("<H", raw)
    raw, cursor = _take(data, cursor, n, what)
    return raw.decode("utf-8"), cursor


def _take_f64(data: bytes, cursor: int, count: int, what: str) -> tuple[np.ndarray, int]:
    raw, cursor = _take(data, cursor, 8 * count, what)
    return np.frombuffer(raw, dtype="<f8").copy(), cursor


def save_model(model: MulticlassModel) -> bytes:
    """Serialize to the stable little-endian binary format."""
    parts = [MODEL_MAGIC, struct.pack("<B", MODEL_VERSION)]
    hash_utf8 = model.config_hash.encode("utf-8")
    parts.append(struct.pack("<H", len(hash_utf8)) + hash_utf8)
    parts.append(struct.pack("<I", len(model.classes)))
    for name in model.classes:
        utf8 = name.encode("utf-8")
        if len(utf8) > 0xFFFF:
            raise ValueError(f"class name too long to serialize: {name[:32]!r}..")
        parts.append(struct.pack("<H", len(utf8)) + utf8)
    parts.append(model.weights_per_class.astype("<f8").tobytes())
    parts.append(struct.pack("<I", model.dim))
    parts.append(model.scaler.mean.astype("<f8").tobytes())
    parts.append(model.scaler.std.astype("<f8").tobytes())
    for svm in model.svms:
        parts.append(svm.weights.astype("<f8").tobytes())
        parts.append(struct.pack("<d", svm.bias))
    return b"".join(parts)


def load_model(data: bytes, config_hash: str | None = None) -> MulticlassModel:
    """Parse model bytes; refuses a config hash other than ``config_hash``."""
    raw, cursor = _take(data, 0, 4, "magic")
    if raw != MODEL_MAGIC:
        raise ModelFormatError(f"bad magic {raw!r} at byte 0, expected {MODEL_MAGIC!r}")
    raw, cursor = _take(data, cursor, 1, "version")
    if raw[0] != MODEL_VERSION:
        raise ModelFormatError(f"unsupported model version {raw[0]} at byte 4")

    stored_hash, cursor = _take_str(data, cursor, "config hash")
    if config_hash is not None and stored_hash != config_hash:
        raise ConfigMismatchError(
            f"model trained under config {stored_hash}, expected {config_hash}"
        )

    raw, cursor = _take(data, cursor, 4, "class count")
    (k,) = struct.unpack("<I", raw)
    if k < 2:
        raise ModelFormatError(f"model declares {k} classes, need at least 2")
    classes = []
    for idx in range(k):
        name, cursor = _take_str(data, cursor, f"class name {idx}")
        classes.append(name)
    per_class, cursor = _take_f64(data, cursor, k, "class weights")

    raw, cursor = _take(data, cursor, 4, "feature dimension")
    (dim,) = struct.unpack("<I", raw)
    if dim == 0:
        raise ModelFormatError("model declares zero feature dimensions")
    mean, cursor = _take_f64(data, cursor, dim, "scaler mean")
    std, cursor = _take_f64(data, cursor, dim, "scaler std")

    svms = []
    for i, j in class_pairs(k):
        w, cursor = _take_f64(data, cursor, dim, f"weights for pair ({i},{j})")
        raw, cursor = _take(data, cursor, 8, f"bias for pair ({i},{j})")
        svms.append(LinearSvm(weights=w, bias=struct.unpack("<d", raw)[0]))

    if cursor != len(data):
        raise ModelFormatError(
            f"{len(data) - cursor} trailing bytes after model data at byte {cursor}"
        )
    return MulticlassModel(
        classes=tuple(classes),
        weights_per_class=per_class,
        scaler=FeatureScaler(mean=mean, std=std),
        svms=tuple(svms),
        config_hash=stored_hash,
    )
