"""Flat-file formats: curve, profile, apparatus and series CSVs plus JSON documents.

Numbers are written with ``repr`` so every float survives a round trip.
All writers go through a temporary file that is renamed into place, so an
interrupted run never leaves a truncated file behind.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .curve_core import CurveSample, FrenetApparatus, arclength_reparam, unit_speed_check
from .errors import Frenet4Error, TooFewSamples
from .frenet_ode import CurvatureProfile

CURVE_HEADER = ["s", "x", "y", "z", "w"]
PROFILE_HEADER = ["s", "k1", "k2", "k3"]
APPARATUS_HEADER = (["s"] + [f"{v}{i}" for v in ("T", "N", "B1", "B2") for i in range(1, 5)]
                    + ["k1", "k2", "k3"])


class CSVFormatError(Frenet4Error):
    pass


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _table_text(header, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    rows = np.column_stack(columns)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def write_table(path, header, columns) -> None:
    atomic_write_text(path, _table_text(header, columns))


def read_table(path, header) -> np.ndarray:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise CSVFormatError(f"cannot read {path}: {exc}") from exc
    if not rows or [c.strip() for c in rows[0]] != header:
        raise CSVFormatError(f"{path}: expected header {','.join(header)}")
    body = [r for r in rows[1:] if r]
    try:
        data = np.array([[float(x) for x in r] for r in body], dtype=float)
    except ValueError as exc:
        raise CSVFormatError(f"{path}: {exc}") from exc
    if data.size == 0:
        data = data.reshape(0, len(header))
    if data.ndim != 2 or data.shape[1] != len(header):
        raise CSVFormatError(f"{path}: every row needs {len(header)} fields")
    if not np.all(np.isfinite(data)):
        raise CSVFormatError(f"{path}: non-finite values")
    return data


def _check_monotone(path, s):
    if s.size > 1 and not np.all(np.diff(s) > 0):
        raise CSVFormatError(f"{path}: column s must be strictly increasing")


def write_curve_csv(path, curve: CurveSample) -> None:
    write_table(path, CURVE_HEADER, [curve.s, curve.points])


def read_curve_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Raw ``(s, points)`` from a curve CSV; ``s`` must increase but may be any parameter."""
    data = read_table(path, CURVE_HEADER)
    _check_monotone(path, data[:, 0])
    return data[:, 0], data[:, 1:]


def load_curve(path, speed_tol: float = 1e-6) -> CurveSample:
    """Curve CSV as a unit-speed CurveSample, reparameterizing unless already uniform arclength."""
    s, pts = read_curve_csv(path)
    if s.size < 9:
        raise TooFewSamples(f"{path}: need at least 9 samples, got {s.size}")
    steps = np.diff(s)
    h = (s[-1] - s[0]) / (s.size - 1)
    if np.max(np.abs(steps - h)) <= 1e-9 * max(h, 1.0):
        curve = CurveSample(float(s[0]), float(h), pts)
        if np.max(np.abs(unit_speed_check(curve) - 1.0)) <= speed_tol:
            return curve
    return arclength_reparam(pts, s0=float(s[0]))


def write_profile_csv(path, profile: CurvatureProfile) -> None:
    write_table(path, PROFILE_HEADER, [profile.s, profile.kappas])


def read_profile_csv(path) -> CurvatureProfile:
    data = read_table(path, PROFILE_HEADER)
    s = data[:, 0]
    _check_monotone(path, s)
    if s.size < 2:
        raise TooFewSamples(f"{path}: need at least 2 samples")
    h = (s[-1] - s[0]) / (s.size - 1)
    if np.max(np.abs(np.diff(s) - h)) > 1e-9 * max(h, 1.0):
        raise CSVFormatError(f"{path}: profile grid must be uniform")
    return CurvatureProfile.from_kappas(float(s[0]), float(h), data[:, 1:], "csv", (str(path),))


def write_apparatus_csv(path, app: FrenetApparatus) -> None:
    write_table(path, APPARATUS_HEADER, [app.s, app.frames.reshape(app.n, 16), app.kappas])


def read_apparatus_csv(path) -> FrenetApparatus:
    data = read_table(path, APPARATUS_HEADER)
    s = data[:, 0]
    _check_monotone(path, s)
    h = (s[-1] - s[0]) / (s.size - 1)
    return FrenetApparatus(float(s[0]), float(h), data[:, 1:17].reshape(-1, 4, 4), data[:, 17:])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(path, document: dict) -> None:
    atomic_write_text(path, json.dumps(_jsonable(document), indent=2) + "\n")


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
