"""CSV/GeoJSON input and output.

Coordinates are taken as planar meters (already projected); no coordinate
reference system conversion is done. Timestamps are epoch seconds or
ISO-8601 strings; naive ISO times are read as UTC.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from .core import Trajectory, duration, presence
from .evaluation import Labeling
from .hull import convex_hull
from .segmentation import MEMBER, TRANSITION, Segmentation

UNITS = {"s": 1.0, "min": 60.0, "h": 3600.0, "d": 86400.0}
_QUANTITY = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*(s|min|h|d)?\s*$")

POINT_FIELDS = ("index", "t", "x", "y", "class", "region")
REGION_FIELDS = ("id", "first", "last", "points", "presence", "duration", "msr_first", "msr_last", "unit")


class ParseError(ValueError):
    """Malformed input; ``line`` is the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_quantity(text: str, default_unit: str = "s"):
    """``"20d"`` -> ``(1728000.0, "d")``. A bare number uses ``default_unit``."""
    m = _QUANTITY.match(str(text))
    if m is None:
        raise ValueError(f"cannot read {text!r} as a duration (units: s, min, h, d)")
    unit = m.group(2) or default_unit
    return float(m.group(1)) * UNITS[unit], unit


def parse_time(text: str) -> float:
    text = text.strip()
    try:
        value = float(text)
    except ValueError:
        pass
    else:
        if not math.isfinite(value):
            raise ValueError(f"timestamp {text!r} is not finite")
        return value
    iso = text[:-1] + "+00:00" if text.endswith(("Z", "z")) else text
    stamp = datetime.fromisoformat(iso)
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.timestamp()


def _float(text, what, line):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ParseError(f"{what} {text!r} is not a number", line) from None
    if not math.isfinite(value):
        raise ParseError(f"{what} {text!r} is not finite", line)
    return value


def parse_trajectory(data):
    """Read a trajectory CSV (bytes, text or path).

    Required columns are ``t, x, y``; an optional ``label`` column holds
    ``C<k>``, ``N<k>`` or ``T``. The per-point output format (``class`` and
    ``region`` columns) is accepted as a label source too. Rows are sorted
    by time. Returns ``(trajectory, labeling or None)``.
    """
    if isinstance(data, (bytes, bytearray)):
        try:
            text = bytes(data).decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    elif isinstance(data, (str, os.PathLike)) and "\n" not in str(data) and os.path.exists(data):
        with open(data, "rb") as fh:
            return parse_trajectory(fh.read())
    else:
        text = str(data)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input", 1) from None
    header = [h.strip().lower() for h in header]
    col = {name: k for k, name in enumerate(header)}
    for name in ("t", "x", "y"):
        if name not in col:
            raise ParseError(f"missing column {name!r}", 1)
    has_label = "label" in col
    has_class = "class" in col
    rows = []
    for line, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) < len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", line)
        try:
            t = parse_time(row[col["t"]])
        except ValueError:
            raise ParseError(f"unreadable timestamp {row[col['t']]!r}", line) from None
        x = _float(row[col["x"]], "x", line)
        y = _float(row[col["y"]], "y", line)
        token = None
        if has_label:
            token = row[col["label"]].strip()
        elif has_class:
            kind = row[col["class"]].strip()
            token = kind if kind == TRANSITION else kind + row[col["region"]].strip() if "region" in col else kind
        if token is not None:
            try:
                Labeling.from_tokens([token])
            except ValueError:
                raise ParseError(f"unknown label {token!r}", line) from None
        rows.append((t, x, y, token, line))
    if not rows:
        raise ParseError("no data rows", 2)
    rows.sort(key=lambda r: r[0])
    for a, b in zip(rows, rows[1:]):
        if b[0] == a[0]:
            raise ParseError(f"duplicate timestamp {b[0]!r} (also on line {a[4]})", b[4])
    traj = Trajectory([(r[1], r[2]) for r in rows], [r[0] for r in rows])
    labels = Labeling.from_tokens([r[3] for r in rows]) if (has_label or has_class) else None
    return traj, labels


def format_float(v) -> str:
    """Shortest text that reads back to the same double."""
    return repr(float(v))


def write_trajectory(fh, traj: Trajectory, labels: Optional[Labeling] = None):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(("id", "t", "x", "y", "label") if labels is not None else ("id", "t", "x", "y"))
    tokens = labels.tokens() if labels is not None else None
    for i in range(len(traj)):
        x, y = traj.xy[i]
        row = [i + 1, format_float(traj.t[i]), format_float(x), format_float(y)]
        if tokens is not None:
            row.append(tokens[i])
        w.writerow(row)


def write_points(fh, seg: Segmentation, traj: Trajectory):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(POINT_FIELDS)
    for i in range(len(traj)):
        kind = str(seg.kinds[i])
        region = "" if kind == TRANSITION else int(seg.ordinals[i])
        x, y = traj.xy[i]
        w.writerow((i + 1, format_float(traj.t[i]), format_float(x), format_float(y), kind, region))


def region_rows(seg: Segmentation, traj: Trajectory, unit: str = "s"):
    scale = UNITS[unit]
    for r in seg.regions:
        yield {
            "id": r.id,
            "first": r.first,
            "last": r.last,
            "points": len(r.segment),
            "presence": presence(r.segment, traj) / scale,
            "duration": duration(r.segment, traj) / scale,
            "msr_first": r.msr.first,
            "msr_last": r.msr.last,
            "unit": unit,
        }


def write_regions(fh, seg: Segmentation, traj: Trajectory, unit: str = "s"):
    w = csv.DictWriter(fh, REGION_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in region_rows(seg, traj, unit):
        w.writerow(row)


def regions_geojson(seg: Segmentation, traj: Trajectory) -> dict:
    """FeatureCollection with the convex hull of every region, in path order."""
    features = []
    for r in seg.regions:
        idx = r.segment.indices()
        hull = convex_hull(traj.xy[idx - 1])
        coords = [list(map(float, p)) for p in hull]
        if len(coords) >= 3:
            geometry = {"type": "Polygon", "coordinates": [coords + [coords[0]]]}
        elif len(coords) == 2:
            geometry = {"type": "LineString", "coordinates": coords}
        else:
            geometry = {"type": "Point", "coordinates": coords[0]}
        features.append(
            {
                "type": "Feature",
                "geometry": geometry,
                "properties": {"region_id": r.id, "first": r.first, "last": r.last, "points": len(idx)},
            }
        )
    return {"type": "FeatureCollection", "features": features}


def write_segmentation(seg: Segmentation, traj: Trajectory, out_dir, unit: str = "s") -> dict:
    """Write ``points.csv``, ``regions.csv`` and ``regions.geojson`` into
    ``out_dir``; returns the paths written."""
    paths = {
        "points": os.path.join(out_dir, "points.csv"),
        "regions": os.path.join(out_dir, "regions.csv"),
        "geojson": os.path.join(out_dir, "regions.geojson"),
    }
    try:
        os.makedirs(out_dir, exist_ok=True)
        with open(paths["points"], "w", newline="", encoding="utf-8") as fh:
            write_points(fh, seg, traj)
        with open(paths["regions"], "w", newline="", encoding="utf-8") as fh:
            write_regions(fh, seg, traj, unit)
        with open(paths["geojson"], "w", encoding="utf-8") as fh:
            json.dump(regions_geojson(seg, traj), fh, indent=1)
    except OSError as exc:
        raise OSError(f"cannot write results to {out_dir}: {exc}") from exc
    return paths
