"""CSV and PGM writers, the series comparison harness and run manifests."""
from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

__all__ = [
    "write_csv",
    "read_csv",
    "write_pgm",
    "read_pgm",
    "Series",
    "ComparisonReport",
    "compare",
    "RunManifest",
    "canonical_json",
    "sha256_file",
]

FLOAT_FMT = "%.12e"


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return FLOAT_FMT % v
    return str(v)


def write_csv(columns: Mapping[str, Sequence], path) -> Path:
    """Write equal-length columns with a header row.

    Integers are written as integers, floats as ``%.12e``.  Lines end in LF.
    """
    path = Path(path)
    names = list(columns)
    cols = [np.asarray(columns[n]) for n in names]
    lengths = {c.shape[0] if c.ndim else 1 for c in cols}
    if len(lengths) > 1:
        raise ValueError(f"columns of unequal length for {path}: {sorted(lengths)}")
    n_rows = lengths.pop() if lengths else 0
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(names)
            for i in range(n_rows):
                w.writerow([_fmt(c[i].item()) for c in cols])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_csv(path) -> dict:
    """Read a file written by :func:`write_csv` into float arrays."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path} is empty")
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return {h: data[:, j] for j, h in enumerate(header)}


def write_pgm(matrix, path, scaling: str = "linear") -> Path:
    """Binary greyscale P5 image, one pixel per matrix entry.

    ``linear`` maps ``[0, max]`` to ``[0, 255]``; ``log`` maps
    ``log10(value)`` over four decades below the maximum.  The comment line
    records the data range and scaling.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"PGM needs a 2-d matrix, got shape {a.shape}")
    bad = np.argwhere(~np.isfinite(a))
    if bad.size:
        raise ValueError(f"matrix has NaN/inf at index {tuple(int(i) for i in bad[0])}")
    neg = np.argwhere(a < 0)
    if neg.size:
        raise ValueError(f"matrix has a negative entry at index {tuple(int(i) for i in neg[0])}")
    lo, hi = (float(a.min()), float(a.max())) if a.size else (0.0, 0.0)
    if scaling == "linear":
        scaled = a / hi if hi > 0 else np.zeros_like(a)
    elif scaling == "log":
        if hi > 0:
            floor = hi * 1e-4
            scaled = (np.log10(np.maximum(a, floor)) - np.log10(floor)) / 4.0
        else:
            scaled = np.zeros_like(a)
    else:
        raise ValueError(f"scaling must be 'linear' or 'log', got {scaling!r}")
    pix = np.clip(np.rint(scaled * 255), 0, 255).astype(np.uint8)
    h, w = a.shape
    head = f"P5\n# min={lo:.6e} max={hi:.6e} scaling={scaling}\n{w} {h}\n255\n".encode("ascii")
    path = Path(path)
    try:
        with open(path, "wb") as fh:
            fh.write(head + pix.tobytes())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_pgm(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    lines = raw.split(b"\n", 4)
    if lines[0] != b"P5":
        raise ValueError(f"{path} is not a binary PGM")
    w, h = (int(v) for v in lines[2].split())
    return np.frombuffer(lines[4], dtype=np.uint8).reshape(h, w)


@dataclass
class Series:
    label: str
    t: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.t.shape != self.values.shape or self.t.ndim != 1:
            raise ValueError(f"series {self.label!r}: abscissa and values must be matching 1-d arrays")


@dataclass
class ComparisonReport:
    a: Series
    b: Series
    grid: np.ndarray
    deviation: np.ndarray
    width: Optional[float] = None
    metrics: dict = field(default_factory=dict)

    @property
    def max_abs(self) -> float:
        return self.metrics["max_abs"]

    @property
    def l2(self) -> float:
        return self.metrics["l2"]

    @property
    def relative_to_width(self) -> float:
        return self.metrics["relative_to_width"]


def compare(series_a: Series, series_b: Series, width: Optional[float] = None) -> ComparisonReport:
    """Interpolate both series onto the finer grid over the common range.

    ``l2`` is the RMS deviation over that grid; ``relative_to_width`` divides
    the maximum deviation by ``width`` (NaN when no width is given).
    """
    lo = max(series_a.t.min(), series_b.t.min())
    hi = min(series_a.t.max(), series_b.t.max())
    if lo > hi:
        raise ValueError(
            f"series {series_a.label!r} and {series_b.label!r} have disjoint ranges"
        )
    fine = series_a if series_a.t.size >= series_b.t.size else series_b
    grid = fine.t[(fine.t >= lo) & (fine.t <= hi)]
    va = np.interp(grid, series_a.t, series_a.values)
    vb = np.interp(grid, series_b.t, series_b.values)
    dev = va - vb
    max_abs = float(np.max(np.abs(dev))) if dev.size else 0.0
    metrics = {
        "max_abs": max_abs,
        "l2": float(np.sqrt(np.mean(dev**2))) if dev.size else 0.0,
        "relative_to_width": max_abs / width if width else float("nan"),
    }
    return ComparisonReport(series_a, series_b, grid, dev, width, metrics)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_json_default)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Config echo, version, duration and content hashes of a run's outputs."""

    command: str
    config: dict
    version: str
    duration_s: float = 0.0
    files: dict = field(default_factory=dict)

    def add(self, path) -> None:
        path = Path(path)
        self.files[path.name] = sha256_file(path)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": json.loads(canonical_json(self.config)),
            "version": self.version,
            "duration_s": self.duration_s,
            "files": dict(sorted(self.files.items())),
        }

    def write(self, outdir) -> Path:
        """Write ``manifest.json`` after verifying every listed file."""
        outdir = Path(outdir)
        for name, digest in self.files.items():
            p = outdir / name
            if not p.exists() or sha256_file(p) != digest:
                raise OSError(f"manifest entry {name} is missing or changed")
        path = outdir / "manifest.json"
        path.write_text(canonical_json(self.to_dict()) + "\n")
        return path

    @classmethod
    def load(cls, path) -> "RunManifest":
        d = json.loads(Path(path).read_text())
        return cls(d["command"], d["config"], d["version"], d["duration_s"], d["files"])

    def verify(self, outdir) -> bool:
        return all(
            (Path(outdir) / n).exists() and sha256_file(Path(outdir) / n) == h
            for n, h in self.files.items()
        )
