"""Corpus ingestion, half splits, evaluation, and feature ablations.

A dataset is one feature vector per 100 ms frame, labeled by the class
directory the source file sat in. Splits are keyed on a hash of
(seed, file, frame index) so they survive directory-enumeration order.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import FeatureConfig, config_hash
from .dsp import frame_signal
from .features import extract_features, feature_mask
from .svm import ConfigMismatchError, MulticlassModel, SvmConfig, predict, train_all_pairs
from .wavfile import WavFormatError, read_wav

MASK_NAMES = ("mfcc", "lpc", "so_cp", "mfcc+lpc", "mfcc+so_cp", "lpc+so_cp", "all")


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Parallel per-frame arrays plus the (file, frame) source ids."""

    features: np.ndarray  # (n, FEATURE_DIM)
    labels: np.ndarray  # (n,) str
    sources: tuple[tuple[str, int], ...]
    classes: tuple[str, ...]
    config_hash: str = ""

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def entries(self):
        """Iterate (vector, label, source-id) triples."""
        return zip(self.features, self.labels, self.sources)

    def subset(self, indices: np.ndarray) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.intp)
        return LabeledDataset(
            features=self.features[idx],
            labels=self.labels[idx],
            sources=tuple(self.sources[i] for i in idx),
            classes=self.classes,
            config_hash=self.config_hash,
        )


def build_dataset(root, cfg: FeatureConfig | None = None) -> LabeledDataset:
    """Extract features for every frame of every WAV under root/<class>/.

    Unreadable and too-short files are skipped with a warning; an empty
    class directory is excluded the same way.
    """
    cfg = cfg or FeatureConfig()
    root = Path(root)
    class_dirs = sorted(d for d in root.iterdir() if d.is_dir()) if root.is_dir() else []
    if not class_dirs:
        raise ValueError(f"no class directories under {root}")

    vectors, labels, sources, classes = [], [], [], []
    for class_dir in class_dirs:
        n_before = len(labels)
        for wav_path in sorted(class_dir.glob("*.wav")):
            rel = wav_path.relative_to(root).as_posix()
            try:
                clip = read_wav(wav_path)
                frames = frame_signal(clip, cfg.window_seconds, cfg.hop_seconds)
            except (WavFormatError, ValueError, OSError) as err:
                warnings.warn(f"skipping {rel}: {err}", stacklevel=2)
                continue
            for k, frame in enumerate(frames):
                vectors.append(extract_features(frame, cfg))
                labels.append(class_dir.name)
                sources.append((rel, k))
        if len(labels) == n_before:
            warnings.warn(f"class directory {class_dir.name!r} contributed no frames",
                          stacklevel=2)
        else:
            classes.append(class_dir.name)

    if not classes:
        raise ValueError(f"no usable audio under {root}")
    return LabeledDataset(
        features=np.array(vectors),
        labels=np.array(labels),
        sources=tuple(sources),
        classes=tuple(classes),
        config_hash=config_hash(cfg),
    )


def split_half(dataset: LabeledDataset, seed: int) -> tuple[LabeledDataset, LabeledDataset]:
    """Per-class random half split: floor(N_t/2) to train, leftover to test.

    Membership is decided by sorting each class's entries on
    sha256(seed | file | frame), so the split depends only on the entry
    set, not on the order the files were found in.
    """
    train_idx, test_idx = [], []
    for cls in dataset.classes:
        members = np.flatnonzero(dataset.labels == cls)
        if len(members) < 2:
            raise ValueError(f"class {cls!r} has {len(members)} entries, need at least 2")
        keys = [_split_key(seed, dataset.sources[i]) for i in members]
        members = members[np.argsort(keys)]
        cut = len(members) // 2
        train_idx.extend(members[:cut])
        test_idx.extend(members[cut:])
    return dataset.subset(np.sort(train_idx)), dataset.subset(np.sort(test_idx))


def _split_key(seed: int, source: tuple[str, int]) -> str:
    file, frame = source
    return hashlib.sha256(f"{seed}|{file}|{frame}".encode()).hexdigest()


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """counts[i][j] = entries of true class i predicted as class j."""

    classes: tuple[str, ...]
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.counts)) / self.total

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.classes)]
        for name, row in zip(self.classes, self.counts):
            lines.append(name + "," + ",".join(str(int(c)) for c in row))
        return "\n".join(lines) + "\n"


def evaluate(model: MulticlassModel, test: LabeledDataset) -> ConfusionMatrix:
    """Predict every test entry and tally true-vs-predicted counts."""
    if len(test) == 0:
        raise ValueError("cannot evaluate on an empty test set")
    if model.config_hash and test.config_hash and model.config_hash != test.config_hash:
        raise ConfigMismatchError(
            f"model config {model.config_hash} does not match "
            f"dataset config {test.config_hash}"
        )
    index = {c: i for i, c in enumerate(model.classes)}
    counts = np.zeros((len(model.classes), len(model.classes)), dtype=np.int64)
    for x, label, _ in test.entries:
        counts[index[label], index[predict(model, x)]] += 1
    return ConfusionMatrix(classes=model.classes, counts=counts)


def mask_indices(name: str) -> np.ndarray:
    """Feature indices for a mask name: a '+'-joined group subset or 'all'."""
    if name == "all":
        return feature_mask(True, True, True)
    groups = name.split("+")
    unknown = set(groups) - {"mfcc", "lpc", "so_cp"}
    if unknown or len(groups) != len(set(groups)):
        raise ValueError(f"bad mask name {name!r}; use '+'-joined subsets of mfcc,lpc,so_cp")
    return feature_mask("mfcc" in groups, "lpc" in groups, "so_cp" in groups)


def apply_mask(X: np.ndarray, keep: np.ndarray) -> np.ndarray:
    """Zero every feature dimension not listed in ``keep``."""
    masked = np.zeros_like(X)
    masked[:, keep] = X[:, keep]
    return masked


def _masked(dataset: LabeledDataset, keep: np.ndarray) -> LabeledDataset:
    return LabeledDataset(
        features=apply_mask(dataset.features, keep),
        labels=dataset.labels,
        sources=dataset.sources,
        classes=dataset.classes,
        config_hash=dataset.config_hash,
    )


def ablation_run(
    dataset: LabeledDataset,
    masks=MASK_NAMES,
    seed: int = 0,
    svm_config: SvmConfig = SvmConfig(),
) -> list[tuple[str, float]]:
    """Train and evaluate once per mask, zeroing the disabled dimensions.

    The same split (same ``seed``) is reused for every mask so rows
    differ only in which features the classifier could see. The scaler
    is refit on each masked training matrix.
    """
    train, test = split_half(dataset, seed)
    rows = []
    for name in masks:
        keep = mask_indices(name)
        m_train, m_test = _masked(train, keep), _masked(test, keep)
        model = train_all_pairs(
            m_train.features,
            m_train.labels,
            config=svm_config,
            config_hash=dataset.config_hash,
            classes=dataset.classes,
        )
        rows.append((name, evaluate(model, m_test).accuracy))
    return rows


def ablation_csv(rows: list[tuple[str, float]]) -> str:
    lines = ["mask,accuracy"]
    lines += [f"{name},{acc:.6f}" for name, acc in rows]
    return "\n".join(lines) + "\n"
