import numpy as np
import pytest

from timbreid.config import FeatureConfig, config_hash
from timbreid.dataset import (
    MASK_NAMES,
    ConfusionMatrix,
    LabeledDataset,
    ablation_csv,
    ablation_run,
    apply_mask,
    build_dataset,
    evaluate,
    mask_indices,
    split_half,
)
from timbreid.features import FEATURE_DIM
from timbreid.svm import ConfigMismatchError, SvmConfig, train_all_pairs
from timbreid.wavfile import write_wav


def _toy_dataset(counts, dim=4, seed=0, hash_=""):
    """In-memory dataset with the given per-class entry counts."""
    rng = np.random.default_rng(seed)
    features, labels, sources = [], [], []
    for cls, n in counts.items():
        for k in range(n):
            features.append(rng.standard_normal(dim))
            labels.append(cls)
            sources.append((f"{cls}/file{k // 3}.wav", k % 3))
    return LabeledDataset(
        features=np.array(features),
        labels=np.array(labels),
        sources=tuple(sources),
        classes=tuple(counts),
        config_hash=hash_,
    )


class TestSplitHalf:
    def test_even_class_splits_in_half(self):
        ds = _toy_dataset({"a": 10, "b": 6})
        train, test = split_half(ds, seed=0)
        assert (train.labels == "a").sum() == 5
        assert (test.labels == "a").sum() == 5
        assert (train.labels == "b").sum() == 3
        assert (test.labels == "b").sum() == 3

    def test_odd_leftover_goes_to_test(self):
        ds = _toy_dataset({"a": 7})
        train, test = split_half(ds, seed=0)
        assert len(train) == 3
        assert len(test) == 4

    def test_partition_is_disjoint_and_complete(self):
        ds = _toy_dataset({"a": 12, "b": 9, "c": 5})
        train, test = split_half(ds, seed=3)
        assert len(train) + len(test) == len(ds)
        assert set(train.sources).isdisjoint(test.sources)
        assert set(train.sources) | set(test.sources) == set(ds.sources)

    def test_same_seed_same_split(self):
        ds = _toy_dataset({"a": 20, "b": 20})
        a_train, _ = split_half(ds, seed=5)
        b_train, _ = split_half(ds, seed=5)
        assert a_train.sources == b_train.sources

    def test_different_seed_different_split(self):
        ds = _toy_dataset({"a": 20, "b": 20})
        a_train, _ = split_half(ds, seed=0)
        b_train, _ = split_half(ds, seed=1)
        assert set(a_train.sources) != set(b_train.sources)

    def test_split_ignores_row_order(self):
        ds = _toy_dataset({"a": 11, "b": 8})
        perm = np.random.default_rng(6).permutation(len(ds))
        train_a, _ = split_half(ds, seed=2)
        train_b, _ = split_half(ds.subset(perm), seed=2)
        assert set(train_a.sources) == set(train_b.sources)

    def test_tiny_class_rejected(self):
        ds = _toy_dataset({"a": 4, "b": 1})
        with pytest.raises(ValueError, match="'b' has 1 entries"):
            split_half(ds, seed=0)

    def test_subset_carries_metadata(self):
        ds = _toy_dataset({"a": 4, "b": 4}, hash_="aabbccdd00112233")
        train, test = split_half(ds, seed=0)
        assert train.classes == ds.classes
        assert test.config_hash == "aabbccdd00112233"


class TestBuildDataset:
    def test_small_corpus_layout(self, small_corpus):
        ds = build_dataset(small_corpus)
        assert ds.classes == ("brass", "clarinet")
        assert ds.features.shape == (len(ds), FEATURE_DIM)
        # 2 pitches x 2 notes x 5 whole frames of the 0.55 s clips
        assert (ds.labels == "brass").sum() == 20
        assert (ds.labels == "clarinet").sum() == 20
        assert ds.config_hash == config_hash(FeatureConfig())

    def test_sources_identify_file_and_frame(self, small_corpus):
        ds = build_dataset(small_corpus)
        rel, frame = ds.sources[0]
        assert rel.startswith("brass/")
        assert rel.endswith(".wav")
        assert frame == 0

    def test_unreadable_file_skipped_with_warning(self, tmp_path):
        root = tmp_path / "corpus"
        for cls in ("a", "b"):
            (root / cls).mkdir(parents=True)
            write_wav(root / cls / "ok.wav", np.random.default_rng(7).uniform(-0.5, 0.5, 4000),
                      16000)
        (root / "a" / "broken.wav").write_text("not audio")
        with pytest.warns(UserWarning, match="skipping a/broken.wav"):
            ds = build_dataset(root)
        assert ds.classes == ("a", "b")
        assert not any("broken" in rel for rel, _ in ds.sources)

    def test_too_short_file_skipped(self, tmp_path):
        root = tmp_path / "corpus"
        for cls in ("a", "b"):
            (root / cls).mkdir(parents=True)
            write_wav(root / cls / "ok.wav", np.zeros(4000) + 0.1, 16000)
        write_wav(root / "a" / "tiny.wav", np.zeros(100), 16000)
        with pytest.warns(UserWarning, match="skipping a/tiny.wav"):
            ds = build_dataset(root)
        assert len(ds) == 4  # two usable files, two frames each

    def test_empty_class_excluded(self, tmp_path):
        root = tmp_path / "corpus"
        for cls in ("a", "b", "empty"):
            (root / cls).mkdir(parents=True)
        for cls in ("a", "b"):
            write_wav(root / cls / "ok.wav", np.zeros(2000) + 0.1, 16000)
        with pytest.warns(UserWarning, match="'empty' contributed no frames"):
            ds = build_dataset(root)
        assert ds.classes == ("a", "b")

    def test_no_class_directories(self, tmp_path):
        (tmp_path / "flat").mkdir()
        with pytest.raises(ValueError, match="no class directories"):
            build_dataset(tmp_path / "flat")

    def test_no_usable_audio(self, tmp_path):
        root = tmp_path / "corpus"
        (root / "a").mkdir(parents=True)
        (root / "a" / "bad.wav").write_text("nope")
        with pytest.warns(UserWarning):
            with pytest.raises(ValueError, match="no usable audio"):
                build_dataset(root)


class TestConfusionMatrix:
    def test_accessors(self):
        cm = ConfusionMatrix(classes=("x", "y"),
                             counts=np.array([[8, 2], [1, 9]]))
        assert cm.total == 20
        assert cm.accuracy == pytest.approx(17 / 20)

    def test_csv_layout(self):
        cm = ConfusionMatrix(classes=("x", "y"),
                             counts=np.array([[8, 2], [1, 9]]))
        assert cm.to_csv() == ",x,y\nx,8,2\ny,1,9\n"


class TestEvaluate:
    def _blob_pair(self, seed=8):
        rng = np.random.default_rng(seed)
        n = 30
        X = np.vstack([
            rng.normal(3.0, 0.3, (n, 2)),
            rng.normal(-3.0, 0.3, (n, 2)),
        ])
        labels = np.array(["hi"] * n + ["lo"] * n)
        sources = tuple((f"{l}/f.wav", i) for i, l in enumerate(labels))
        ds = LabeledDataset(features=X, labels=labels, sources=sources,
                            classes=("hi", "lo"), config_hash="1111222233334444")
        model = train_all_pairs(X, labels, config_hash="1111222233334444")
        return model, ds

    def test_perfect_separation_is_diagonal(self):
        model, ds = self._blob_pair()
        cm = evaluate(model, ds)
        np.testing.assert_array_equal(cm.counts, [[30, 0], [0, 30]])
        assert cm.accuracy == 1.0

    def test_config_mismatch_refused(self):
        model, ds = self._blob_pair()
        bad = LabeledDataset(features=ds.features, labels=ds.labels,
                             sources=ds.sources, classes=ds.classes,
                             config_hash="ffffffffffffffff")
        with pytest.raises(ConfigMismatchError, match="does not match"):
            evaluate(model, bad)

    def test_empty_test_set_refused(self):
        model, ds = self._blob_pair()
        with pytest.raises(ValueError, match="empty test set"):
            evaluate(model, ds.subset(np.array([], dtype=int)))


class TestMasks:
    def test_group_indices(self):
        np.testing.assert_array_equal(mask_indices("mfcc"), np.arange(12))
        np.testing.assert_array_equal(mask_indices("lpc"), np.arange(12, 26))
        np.testing.assert_array_equal(mask_indices("so_cp"), np.arange(26, 32))
        np.testing.assert_array_equal(mask_indices("mfcc+so_cp"),
                                      np.r_[0:12, 26:32])
        assert len(mask_indices("all")) == FEATURE_DIM

    def test_bad_names_rejected(self):
        with pytest.raises(ValueError, match="bad mask name"):
            mask_indices("spectral")
        with pytest.raises(ValueError, match="bad mask name"):
            mask_indices("mfcc+mfcc")

    def test_apply_mask_zeroes_complement(self):
        X = np.arange(64, dtype=float).reshape(2, 32)
        keep = mask_indices("so_cp")
        masked = apply_mask(X, keep)
        np.testing.assert_array_equal(masked[:, 26:], X[:, 26:])
        assert (masked[:, :26] == 0).all()
        assert (X[:, :26] != 0).any()  # input untouched

    def test_mask_names_cover_seven_rows(self):
        assert len(MASK_NAMES) == 7
        assert MASK_NAMES[-1] == "all"


class TestAblation:
    def test_rows_and_identity_invariant(self, small_corpus):
        ds = build_dataset(small_corpus)
        cfg = SvmConfig(epochs=80)
        rows = ablation_run(ds, seed=0, svm_config=cfg)
        assert [name for name, _ in rows] == list(MASK_NAMES)
        assert all(0.0 <= acc <= 1.0 for _, acc in rows)

        train, test = split_half(ds, seed=0)
        model = train_all_pairs(train.features, train.labels, config=cfg,
                                config_hash=ds.config_hash, classes=ds.classes)
        direct = evaluate(model, test).accuracy
        all_row = dict(rows)["all"]
        assert all_row == pytest.approx(direct, abs=1e-12)

    def test_csv_format(self):
        text = ablation_csv([("mfcc", 0.8491), ("all", 1.0)])
        assert text == "mask,accuracy\nmfcc,0.849100\nall,1.000000\n"
