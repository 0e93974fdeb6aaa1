"""Minimal RIFF/WAVE reader and writer.

Reads 16-bit PCM and 32-bit float files, mono or stereo (stereo is
averaged down), and writes mono 16-bit PCM. Unknown chunks are skipped,
so files with LIST/INFO metadata load fine.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .dsp import AudioClip

_PCM = 1
_IEEE_FLOAT = 3


class WavFormatError(ValueError):
    """File is not a WAV this reader understands."""


def read_wav(path) -> AudioClip:
    data = Path(path).read_bytes()
    if len(data) < 12:
        raise WavFormatError(f"{path}: only {len(data)} bytes, not a RIFF file")
    if data[:4] != b"RIFF":
        raise WavFormatError(f"{path}: bad RIFF tag {data[:4]!r} at byte 0")
    if data[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: bad WAVE tag {data[8:12]!r} at byte 8")

    fmt = None
    samples = None
    offset = 12
    while offset + 8 <= len(data):
        chunk_id = data[offset : offset + 4]
        (size,) = struct.unpack_from("<I", data, offset + 4)
        body_start = offset + 8
        if body_start + size > len(data):
            raise WavFormatError(
                f"{path}: chunk {chunk_id!r} at byte {offset} claims {size} bytes, "
                f"file ends after {len(data) - body_start}"
            )
        if chunk_id == b"fmt ":
            fmt = _parse_fmt(data, body_start, size, path)
        elif chunk_id == b"data":
            if fmt is None:
                raise WavFormatError(f"{path}: data chunk at byte {offset} before fmt")
            samples = _decode_samples(data[body_start : body_start + size], fmt, path)
        offset = body_start + size + (size & 1)  # chunks are word-aligned

    if fmt is None:
        raise WavFormatError(f"{path}: no fmt chunk")
    if samples is None:
        raise WavFormatError(f"{path}: no data chunk")
    return AudioClip(samples=samples, sample_rate=fmt["rate"])


def _parse_fmt(data: bytes, start: int, size: int, path) -> dict:
    if size < 16:
        raise WavFormatError(f"{path}: fmt chunk is {size} bytes, need 16")
    code, channels, rate, _, block_align, bits = struct.unpack_from("<HHIIHH", data, start)
    if code not in (_PCM, _IEEE_FLOAT):
        raise WavFormatError(f"{path}: unsupported format code {code} (PCM or float only)")
    if code == _PCM and bits != 16:
        raise WavFormatError(f"{path}: {bits}-bit PCM unsupported, need 16")
    if code == _IEEE_FLOAT and bits != 32:
        raise WavFormatError(f"{path}: {bits}-bit float unsupported, need 32")
    if channels not in (1, 2):
        raise WavFormatError(f"{path}: {channels} channels unsupported")
    expected_align = channels * bits // 8
    if block_align != expected_align:
        raise WavFormatError(
            f"{path}: block align {block_align} inconsistent with "
            f"{channels} x {bits}-bit samples"
        )
    return {"code": code, "channels": channels, "rate": rate, "align": expected_align}


def _decode_samples(body: bytes, fmt: dict, path) -> np.ndarray:
    if len(body) % fmt["align"]:
        raise WavFormatError(
            f"{path}: data length {len(body)} is not a whole number of "
            f"{fmt['align']}-byte sample blocks"
        )
    if fmt["code"] == _PCM:
        x = np.frombuffer(body, dtype="<i2").astype(np.float64) / 32768.0
    else:
        x = np.clip(np.frombuffer(body, dtype="<f4").astype(np.float64), -1.0, 1.0)
    if fmt["channels"] == 2:
        x = x.reshape(-1, 2).mean(axis=1)
    return x


def write_wav(path, samples: np.ndarray, sample_rate: int) -> None:
    """Write mono 16-bit PCM; input is clipped to [-1, 1]."""
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected mono samples, got shape {x.shape}")
    pcm = np.clip(np.rint(x * 32767.0), -32768, 32767).astype("<i2")
    body = pcm.tobytes()
    header = b"RIFF" + struct.pack("<I", 36 + len(body)) + b"WAVE"
    header += b"fmt " + struct.pack("<IHHIIHH", 16, _PCM, 1, sample_rate,
                                    sample_rate * 2, 2, 16)
    header += b"data" + struct.pack("<I", len(body))
    Path(path).write_bytes(header + body)
