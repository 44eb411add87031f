"""Text-file ingest and emission for signals, annotations, and peaks.

All formats are line-oriented with a single `#` header line. Readers
reject malformed content with a line-numbered error; writers go through
a temp file and rename so no partial output is left behind on failure.
"""
from __future__ import annotations

import math
import os
import re
import tempfile
from dataclasses import dataclass

import numpy as np

from .cwt import EcgSignal
from .errors import (
    BadIndex,
    BadSample,
    EmptyFile,
    IoFailure,
    MissingHeader,
    NotIncreasing,
)


@dataclass(frozen=True)
class AnnotationSet:
    """Reference R-peak sample indices for one record."""

    r_samples: np.ndarray
    record_id: str = ""

    def __post_init__(self):
        r = np.asarray(self.r_samples, dtype=np.int64).copy()
        if r.ndim != 1:
            raise BadIndex("annotation indices must be a 1-d sequence")
        if r.size and (np.any(r < 0) or np.any(np.diff(r) <= 0)):
            raise NotIncreasing("annotation indices must be non-negative and strictly increasing")
        r.flags.writeable = False
        object.__setattr__(self, "r_samples", r)

    def __len__(self) -> int:
        return self.r_samples.size


def atomic_write(path, text: str) -> None:
    """Write text to path via a temp file in the same directory."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qrsadapt-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


_SIGNAL_HEADER = re.compile(r"^#\s*fs=(\S+)\s+record=(\S+)\s*$")
_ANN_HEADER = re.compile(r"^#\s*record=(\S+)\s*$")
_PEAKS_HEADER = re.compile(r"^#\s*record=(\S+)\s+wavelet=(.*\S)\s*$")


def _read_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or all(not l.strip() for l in lines):
        raise EmptyFile(f"{path} is empty")
    return lines


def read_signal_csv(path) -> EcgSignal:
    """Parse `# fs=<Hz> record=<id>` then one millivolt value per line."""
    lines = _read_lines(path)
    m = _SIGNAL_HEADER.match(lines[0])
    if not m:
        raise MissingHeader("expected '# fs=<Hz> record=<id>' header", line=1)
    try:
        fs = float(m.group(1))
    except ValueError:
        raise MissingHeader(f"bad sampling rate {m.group(1)!r}", line=1) from None
    if not (math.isfinite(fs) and fs > 0):
        raise MissingHeader(f"sampling rate must be finite and > 0, got {fs}", line=1)
    record_id = m.group(2)

    values = []
    for i, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text:
            continue
        try:
            v = float(text)
        except ValueError:
            raise BadSample(f"bad sample {text!r}", line=i) from None
        if not math.isfinite(v):
            raise BadSample(f"non-finite sample {text!r}", line=i)
        values.append(v)
    return EcgSignal(np.array(values), fs=fs, record_id=record_id)


def write_signal_csv(signal: EcgSignal, path) -> None:
    lines = [f"# fs={signal.fs:.17g} record={signal.record_id}"]
    lines += ["{:.17g}".format(v) for v in signal.samples]
    atomic_write(path, "\n".join(lines) + "\n")


def read_annotations_csv(path) -> AnnotationSet:
    """Parse `# record=<id>` then strictly increasing integer indices."""
    lines = _read_lines(path)
    m = _ANN_HEADER.match(lines[0])
    if not m:
        raise MissingHeader("expected '# record=<id>' header", line=1)
    record_id = m.group(1)

    indices = []
    for i, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text:
            continue
        try:
            v = int(text)
        except ValueError:
            raise BadIndex(f"bad index {text!r}", line=i) from None
        if v < 0:
            raise BadIndex(f"negative index {v}", line=i)
        if indices and v <= indices[-1]:
            raise NotIncreasing(f"index {v} after {indices[-1]}", line=i)
        indices.append(v)
    return AnnotationSet(np.array(indices, dtype=np.int64), record_id=record_id)


def write_annotations_csv(ann: AnnotationSet, path) -> None:
    lines = [f"# record={ann.record_id}"]
    lines += [str(int(v)) for v in ann.r_samples]
    atomic_write(path, "\n".join(lines) + "\n")


def write_peaks_csv(result, path) -> None:
    """Write `# record=<id> wavelet=<name>` then one line per peak.

    Columns: sample,time_s,scale_s,magnitude,polarity. Times carry six
    decimals; sample indices round-trip exactly.
    """
    lines = [f"# record={result.record_id} wavelet={result.selected_name}"]
    for p in result.peaks:
        lines.append(
            f"{p.sample},{p.time:.6f},{p.scale:.17g},{p.magnitude:.17g},{p.polarity:+d}"
        )
    atomic_write(path, "\n".join(lines) + "\n")


def read_peaks_csv(path):
    """Parse a peaks file; returns (record_id, wavelet_name, rows).

    Rows are (sample, time_s, scale_s, magnitude, polarity) tuples.
    """
    lines = _read_lines(path)
    m = _PEAKS_HEADER.match(lines[0])
    if not m:
        raise MissingHeader("expected '# record=<id> wavelet=<name>' header", line=1)
    record_id, wavelet = m.group(1), m.group(2)
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text:
            continue
        parts = text.split(",")
        if len(parts) != 5:
            raise BadSample(f"expected 5 comma-separated fields, got {len(parts)}", line=i)
        try:
            rows.append((int(parts[0]), float(parts[1]), float(parts[2]),
                         float(parts[3]), int(parts[4])))
        except ValueError:
            raise BadSample(f"bad peak row {text!r}", line=i) from None
    return record_id, wavelet, rows
