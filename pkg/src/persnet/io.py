"""CSV and JSON readers and writers.

Floats are written with 12 significant digits and infinite deaths as the
string ``"inf"``, so repeated runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from datetime import date
from pathlib import Path
from typing import Iterable

import numpy as np

from .graph import PointCloud
from .market import DiagramDistanceSeries, PricePanel
from .persistence import PersistenceDiagram, PersistencePoint

log = logging.getLogger(__name__)

SIG_DIGITS = 12


def fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.{SIG_DIGITS}g}"


def _round(x: float) -> float:
    return float(fmt(x))


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="") as fh:
        return [row for row in csv.reader(fh) if row]


def ingest_prices(path) -> PricePanel:
    """Read a wide ``date,TICKER1,TICKER2,...`` file of adjusted closes.

    Rows out of date order are accepted and sorted (with a warning). Row numbers
    in error messages count the header as row 1.
    """
    rows = _read_rows(path)
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2 or header[0].lower() != "date":
        raise ValueError(f"{path}: header must be 'date,TICKER1,...', got {','.join(rows[0])!r}")
    tickers = header[1:]
    if len(set(tickers)) != len(tickers) or any(not t for t in tickers):
        raise ValueError(f"{path}: blank or duplicate ticker in header")
    records: list[tuple[date, list[float]]] = []
    seen: dict[date, int] = {}
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ValueError(f"{path}: row {line} has {len(row)} cells, expected {len(header)}")
        try:
            day = date.fromisoformat(row[0].strip())
        except ValueError:
            raise ValueError(f"{path}: row {line}, column 'date': unparseable date {row[0]!r}") from None
        if day in seen:
            raise ValueError(f"{path}: row {line}: duplicate date {day} (first at row {seen[day]})")
        seen[day] = line
        values = []
        for col, cell in zip(tickers, row[1:]):
            cell = cell.strip()
            if not cell:
                raise ValueError(f"{path}: row {line}, column {col!r}: missing value")
            try:
                v = float(cell)
            except ValueError:
                raise ValueError(f"{path}: row {line}, column {col!r}: unparseable number {cell!r}") from None
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{path}: row {line}, column {col!r}: price must be positive, got {cell!r}")
            values.append(v)
        records.append((day, values))
    if any(records[k][0] > records[k + 1][0] for k in range(len(records) - 1)):
        log.warning("%s: dates are not in ascending order; sorting", path)
        records.sort(key=lambda r: r[0])
    prices = np.array([v for _, v in records], dtype=float).reshape(len(records), len(tickers)).T
    return PricePanel(tuple(tickers), tuple(d for d, _ in records), prices)


def write_prices(panel: PricePanel, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", *panel.tickers])
        for k, day in enumerate(panel.dates):
            w.writerow([day.isoformat(), *(fmt(x) for x in panel.prices[:, k])])


def read_distance_matrix(path) -> tuple[np.ndarray, list[str]]:
    """First row holds the labels, each later row one matrix row."""
    rows = _read_rows(path)
    if not rows:
        raise ValueError(f"{path}: empty file")
    labels = [c.strip() for c in rows[0]]
    body = rows[1:]
    if len(body) != len(labels):
        raise ValueError(f"{path}: {len(labels)} labels but {len(body)} matrix rows")
    m = np.empty((len(labels), len(labels)))
    for i, row in enumerate(body):
        if len(row) != len(labels):
            raise ValueError(f"{path}: row {i + 2} has {len(row)} cells, expected {len(labels)}")
        for j, cell in enumerate(row):
            try:
                m[i, j] = float(cell)
            except ValueError:
                raise ValueError(f"{path}: row {i + 2}, column {labels[j]!r}: unparseable number {cell!r}") from None
    return m, labels


def write_distance_matrix(m, labels: Iterable[str], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(labels))
        for row in np.asarray(m, dtype=float):
            w.writerow([fmt(x) for x in row])


def read_point_cloud(path) -> PointCloud:
    """One point per row, coordinates only, no header."""
    pts = []
    for line, row in enumerate(_read_rows(path), start=1):
        try:
            pts.append(tuple(float(c) for c in row))
        except ValueError:
            raise ValueError(f"{path}: row {line}: unparseable coordinate in {row!r}") from None
    return PointCloud(tuple(pts))


def diagram_to_json(d: PersistenceDiagram, inf_cap_hint: float | None = None) -> dict:
    dims: dict[str, list] = {}
    for p in sorted(d.points, key=lambda p: (p.dim, p.birth, p.death)):
        death = "inf" if math.isinf(p.death) else _round(p.death)
        dims.setdefault(str(p.dim), []).append([_round(p.birth), death])
    out: dict = {"dims": dims}
    if inf_cap_hint is not None:
        out["inf_cap_hint"] = _round(inf_cap_hint)
    return out


def diagram_from_json(obj: dict, max_dim: int | None = None) -> PersistenceDiagram:
    try:
        dims = obj["dims"]
    except (KeyError, TypeError):
        raise ValueError("diagram JSON needs a 'dims' object") from None
    pts = []
    for key, pairs in dims.items():
        dim = int(key)
        for b, x in pairs:
            death = math.inf if x == "inf" else float(x)
            pts.append(PersistencePoint(dim, float(b), death))
    if max_dim is None:
        max_dim = max([int(k) + 1 for k in dims], default=1)
    return PersistenceDiagram(tuple(pts), max_dim)


def emit_diagram(d: PersistenceDiagram, path, inf_cap_hint: float | None = None) -> None:
    Path(path).write_text(json.dumps(diagram_to_json(d, inf_cap_hint)) + "\n")


def load_diagram(path, max_dim: int | None = None) -> PersistenceDiagram:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON: {exc}") from None
    return diagram_from_json(obj, max_dim)


def emit_series(s: DiagramDistanceSeries, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", *(f"dist_dim{k}" for k in range(s.max_dim))])
        for day, values in s.rows():
            w.writerow([day.isoformat(), *(fmt(v) for v in values)])


def load_series(path, reference_index: int = 0) -> DiagramDistanceSeries:
    rows = _read_rows(path)
    if not rows or rows[0][0] != "date":
        raise ValueError(f"{path}: missing 'date,dist_dim0,...' header")
    ndim = len(rows[0]) - 1
    dates = tuple(date.fromisoformat(r[0]) for r in rows[1:])
    cols = tuple(tuple(float(r[k + 1]) for r in rows[1:]) for k in range(ndim))
    return DiagramDistanceSeries(dates, cols, reference_index)
