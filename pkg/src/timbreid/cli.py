"""Command-line entry point.

Subcommands cover the whole pipeline: corpus synthesis, training,
evaluation, feature ablation, per-file prediction, and streaming. Every
command is deterministic under fixed seeds, writes output files
atomically (write-then-rename), and exits 1 with a one-line diagnostic
on any error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .config import FeatureConfig, config_hash, load_config
from .dataset import (
    MASK_NAMES,
    ablation_csv,
    ablation_run,
    build_dataset,
    evaluate,
    split_half,
)
from .dsp import frame_signal
from .features import extract_features
from .stream import StreamState, majority
from .svm import (
    ConfigMismatchError,
    SvmConfig,
    load_model,
    predict,
    save_model,
    train_all_pairs,
)
from .synth import DEFAULT_PITCHES, DEFAULT_PROFILES, synth_corpus
from .wavfile import read_wav


def _atomic_write(path, data) -> None:
    path = Path(path)
    if isinstance(data, str):
        data = data.encode("utf-8")
    tmp = path.parent / (path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _feature_config(args) -> FeatureConfig:
    if getattr(args, "config", None):
        return load_config(args.config)
    return FeatureConfig()


def _load_model_file(path):
    return load_model(Path(path).read_bytes())


def cmd_synth(args) -> int:
    pitches = (tuple(float(p) for p in args.pitches.split(","))
               if args.pitches else DEFAULT_PITCHES)
    root = synth_corpus(args.out, DEFAULT_PROFILES, pitches,
                        per_pitch=args.per_pitch, fs=args.rate, seed=args.seed,
                        duration=args.duration)
    n_files = len(DEFAULT_PROFILES) * len(pitches) * args.per_pitch
    print(f"wrote {n_files} files under {root}")
    return 0


def cmd_train(args) -> int:
    cfg = _feature_config(args)
    svm_cfg = SvmConfig(C=args.C, epochs=args.epochs, seed=args.seed)
    dataset = build_dataset(args.data, cfg)
    train_set, test_set = split_half(dataset, args.seed)
    model = train_all_pairs(train_set.features, train_set.labels, config=svm_cfg,
                            config_hash=dataset.config_hash, classes=dataset.classes)

    train_cm = evaluate(model, train_set)
    test_cm = evaluate(model, test_set)
    _atomic_write(args.out, save_model(model))
    _atomic_write(str(args.out) + ".confusion.csv", test_cm.to_csv())
    _atomic_write(str(args.out) + ".log", _run_log(args, cfg, svm_cfg, dataset.config_hash))
    print(f"train accuracy {train_cm.accuracy:.6f}")
    print(f"test accuracy {test_cm.accuracy:.6f}")
    return 0


def _run_log(args, cfg: FeatureConfig, svm_cfg: SvmConfig, cfg_hash: str) -> str:
    lines = [
        f"command = {args.command}",
        f"data = {args.data}",
        f"out = {args.out}",
        f"seed = {args.seed}",
        f"C = {svm_cfg.C}",
        f"epochs = {svm_cfg.epochs}",
        f"config_hash = {cfg_hash}",
    ]
    return "\n".join(lines) + "\n" + cfg.to_text()


def cmd_evaluate(args) -> int:
    cfg = _feature_config(args)
    model = _load_model_file(args.model)
    dataset = build_dataset(args.data, cfg)
    cm = evaluate(model, dataset)
    print(f"accuracy {cm.accuracy:.6f}")
    if args.out:
        _atomic_write(args.out, cm.to_csv())
    else:
        sys.stdout.write(cm.to_csv())
    return 0


def cmd_ablate(args) -> int:
    cfg = _feature_config(args)
    svm_cfg = SvmConfig(C=args.C, epochs=args.epochs, seed=args.seed)
    dataset = build_dataset(args.data, cfg)
    rows = ablation_run(dataset, MASK_NAMES, seed=args.seed, svm_config=svm_cfg)
    for name, acc in rows:
        print(f"{name} {acc:.6f}")
    if args.out:
        _atomic_write(args.out, ablation_csv(rows))
    return 0


def cmd_predict(args) -> int:
    cfg = _feature_config(args)
    model = _load_model_file(args.model)
    if model.config_hash and model.config_hash != config_hash(cfg):
        raise ConfigMismatchError(
            f"model trained under config {model.config_hash}, "
            f"current config is {config_hash(cfg)}"
        )
    for wav in args.files:
        clip = read_wav(wav)
        labels = [predict(model, extract_features(frame, cfg))
                  for frame in frame_signal(clip, cfg.window_seconds, cfg.hop_seconds)]
        print(f"{wav}\t{majority(labels)}")
    return 0


def cmd_stream(args) -> int:
    cfg = _feature_config(args)
    model = _load_model_file(args.model)
    if args.wav:
        clip = read_wav(args.wav)
        state = StreamState(model, clip.sample_rate, cfg)
        for start in range(0, len(clip.samples), 8192):
            for event in state.push_samples(clip.samples[start : start + 8192]):
                print(event.line())
        return 0

    state = StreamState(model, args.rate, cfg)
    carry = b""
    while True:
        chunk = sys.stdin.buffer.read(8192)
        if not chunk:
            break
        chunk = carry + chunk
        usable = len(chunk) - (len(chunk) % 2)
        carry = chunk[usable:]
        samples = np.frombuffer(chunk[:usable], dtype="<i2").astype(np.float64) / 32768.0
        for event in state.push_samples(samples):
            print(event.line())
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timbreid",
        description="Instrument timbre features, one-vs-one SVM training, "
                    "and streaming prediction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate the synthetic instrument corpus")
    p.add_argument("--out", required=True, help="corpus root directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pitches", help="comma-separated fundamentals in Hz")
    p.add_argument("--per-pitch", type=int, default=3, dest="per_pitch")
    p.add_argument("--rate", type=int, default=16000)
    p.add_argument("--duration", type=float, default=1.05)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train on a corpus with a 50/50 split")
    p.add_argument("--data", required=True, help="corpus root (root/<class>/*.wav)")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--C", type=float, default=SvmConfig().C)
    p.add_argument("--epochs", type=int, default=SvmConfig().epochs)
    p.add_argument("--config", help="feature configuration file")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="evaluate a model on a labeled directory")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", help="confusion CSV path (default: stdout)")
    p.add_argument("--config", help="feature configuration file")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ablate", help="train/evaluate every feature-group mask")
    p.add_argument("--data", required=True)
    p.add_argument("--out", help="ablation CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--C", type=float, default=SvmConfig().C)
    p.add_argument("--epochs", type=int, default=SvmConfig().epochs)
    p.add_argument("--config", help="feature configuration file")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("predict", help="label whole files by window majority")
    p.add_argument("--model", required=True)
    p.add_argument("--config", help="feature configuration file")
    p.add_argument("files", nargs="+", metavar="WAV")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("stream", help="emit per-window predictions as they arrive")
    p.add_argument("--model", required=True)
    p.add_argument("--wav", help="read this file instead of raw PCM on stdin")
    p.add_argument("--rate", type=int, default=16000,
                   help="sample rate of raw 16-bit mono PCM on stdin")
    p.add_argument("--config", help="feature configuration file")
    p.set_defaults(func=cmd_stream)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
