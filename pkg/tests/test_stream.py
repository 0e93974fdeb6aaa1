import dataclasses

import numpy as np
import pytest

from timbreid.config import FeatureConfig, config_hash
from timbreid.stream import StreamEvent, StreamState, majority
from timbreid.svm import ConfigMismatchError
from timbreid.synth import DEFAULT_PROFILES, synth_note

from . import oracles


def _note(name, seed, duration=1.0):
    profile = next(p for p in DEFAULT_PROFILES if p.name == name)
    return synth_note(profile, 330.0, duration, 16000, np.random.default_rng(seed))


class TestMajority:
    def test_simple_mode(self):
        assert majority(["a", "b", "a"]) == "a"

    def test_tie_goes_to_most_recent(self):
        assert majority(["a", "a", "b", "b"]) == "b"
        assert majority(["b", "b", "a", "a"]) == "a"
        assert majority(["a", "b"]) == "b"

    def test_singleton(self):
        assert majority(["x"]) == "x"

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty ring"):
            majority([])

    def test_matches_brute_force(self):
        rng = np.random.default_rng(40)
        alphabet = ["a", "b", "c", "d"]
        for _ in range(1000):
            ring = [alphabet[i] for i in rng.integers(0, 4, size=rng.integers(1, 11))]
            assert majority(ring) == oracles.brute_majority(ring)


class TestStreamEvent:
    def test_line_format(self):
        ev = StreamEvent(time=1.2345, window_label="flute", smoothed_label="brass")
        assert ev.line() == "1.234\tflute\tbrass"

    def test_zero_time(self):
        assert StreamEvent(0.0, "a", "a").line() == "0.000\ta\ta"


class TestStreamState:
    def test_ring_length_from_hop(self, model):
        state = StreamState(model, 16000)
        assert state.ring_length == 10
        unpinned = dataclasses.replace(model, config_hash="")
        state = StreamState(unpinned, 16000, FeatureConfig(window_seconds=0.1,
                                                           hop_seconds=0.05))
        assert state.ring_length == 20

    def test_config_mismatch_refused(self, model):
        other = FeatureConfig(n_mel_filters=30)
        assert model.config_hash != config_hash(other)
        with pytest.raises(ConfigMismatchError, match=model.config_hash):
            StreamState(model, 16000, other)

    def test_one_event_per_window(self, model):
        state = StreamState(model, 16000)
        events = state.push_samples(_note("flute", 50))
        assert len(events) == 10
        times = [e.time for e in events]
        np.testing.assert_allclose(times, np.arange(10) * 0.1, atol=1e-12)

    def test_short_push_emits_nothing(self, model):
        state = StreamState(model, 16000)
        assert state.push_samples(np.zeros(100) + 0.01) == []
        assert state.emitted == 0

    def test_chunking_invariance(self, model):
        stream = np.concatenate([_note("flute", 51), _note("brass", 52)])
        reference = StreamState(model, 16000).push_samples(stream)
        rng = np.random.default_rng(53)
        for _ in range(10):
            state = StreamState(model, 16000)
            events = []
            rest = stream
            while len(rest):
                n = min(len(rest), int(rng.integers(1, 5000)))
                events.extend(state.push_samples(rest[:n]))
                rest = rest[n:]
            assert [e.line() for e in events] == [e.line() for e in reference]

    def test_labels_track_source_instrument(self, model):
        state = StreamState(model, 16000)
        events = state.push_samples(_note("organ", 54))
        window_labels = [e.window_label for e in events]
        assert window_labels.count("organ") >= 8

    def test_smoothing_lags_a_source_switch(self, model):
        stream = np.concatenate([_note("flute", 55), _note("brass", 56)])
        events = StreamState(model, 16000).push_samples(stream)
        windows = [e.window_label for e in events]
        smoothed = [e.smoothed_label for e in events]
        assert windows[:10].count("flute") >= 9
        assert windows[10:].count("brass") >= 9
        # the ring majority must flip within ceil(R/2)+1 windows of the switch
        flip = smoothed.index("brass")
        assert 10 <= flip <= 10 + 6
        assert smoothed[:10] == ["flute"] * 10

    def test_trailing_partial_window_is_held(self, model):
        state = StreamState(model, 16000)
        events = state.push_samples(np.ones(1600 + 800) * 0.01)
        assert len(events) == 1
        # the leftover 800 samples wait for the rest of their window
        assert len(state._buffer) == 800
