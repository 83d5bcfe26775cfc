"""Symbol series over fixed time slots and period detection.

A series is scored for each candidate period ``p`` by comparing it with its
own ``p``-shifted copy under dynamic time warping with a 0/1 symbol cost:

    confidence(p) = 1 - DTW(T[:n-p], T[p:]) / (n - p)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .analysis import TRANSITION_SYMBOL, SymbolicTrajectory

PER_ZONE = "per-zone"
FULL_BEHAVIOR = "full-behavior"


@dataclass(frozen=True)
class SymbolSeries:
    symbols: tuple
    resolution: float
    start: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(self.symbols) < 2:
            raise ValueError("a symbol series needs at least 2 slots")
        if not self.resolution > 0:
            raise ValueError("resolution must be positive")

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return "".join(str(s) for s in self.symbols)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.symbols)


def _slots(lo, hi, t0, res, n):
    """Slot range ``[a, b]`` touched by the closed time span ``[lo, hi]``.

    Slot ``k`` covers ``[t0 + k*res, t0 + (k+1)*res)``; the span end falls
    in the last slot.
    """
    a = min(int(math.floor((lo - t0) / res)), n - 1)
    b = min(int(math.floor((hi - t0) / res)), n - 1)
    return max(a, 0), b


def build_series(
    st: SymbolicTrajectory,
    resolution: float,
    mode: str = FULL_BEHAVIOR,
    zone: Optional[int] = None,
    span: Optional[tuple] = None,
) -> SymbolSeries:
    """Discretise ``st`` into slots of ``resolution`` seconds.

    ``per-zone``: 1 for every slot in which the object is inside ``zone`` at
    some instant, else 0, over the span from the zone's first to last visit.
    ``full-behavior``: the zone occupying each slot (the one with the longest
    overlap if several do), else ``TRANSITION_SYMBOL``, over the whole
    trajectory. ``span`` overrides the time range; slots start at its start.
    """
    if not len(st):
        raise ValueError("empty symbolic trajectory")
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    visits = [e for e in st if e.symbol != TRANSITION_SYMBOL]
    if mode == PER_ZONE:
        if zone is None:
            raise ValueError("per-zone mode needs a zone id")
        visits = [e for e in visits if e.symbol == zone]
        if not visits and span is None:
            raise ValueError(f"zone {zone} is never visited")
        default = (visits[0].start, visits[-1].end) if visits else None
    elif mode == FULL_BEHAVIOR:
        default = st.span
    else:
        raise ValueError(f"unknown mode {mode!r}")
    t0, t1 = span if span is not None else default
    width = t1 - t0
    if resolution > width:
        raise ValueError(f"resolution {resolution} exceeds the span {width}")
    n = max(int(math.ceil(width / resolution)), 1)
    if mode == PER_ZONE:
        out = np.zeros(n, dtype=int)
        for e in visits:
            if e.end < t0 or e.start > t1:
                continue
            a, b = _slots(e.start, e.end, t0, resolution, n)
            out[a : b + 1] = 1
    else:
        out = np.full(n, TRANSITION_SYMBOL, dtype=int)
        best = np.full(n, -1.0)
        for e in visits:
            if e.end < t0 or e.start > t1:
                continue
            a, b = _slots(e.start, e.end, t0, resolution, n)
            for k in range(a, b + 1):
                lo = t0 + k * resolution
                hi = t1 if k == n - 1 else lo + resolution
                overlap = min(e.end, hi) - max(e.start, lo)
                if overlap > best[k]:
                    best[k] = overlap
                    out[k] = e.symbol
    return SymbolSeries(tuple(out.tolist()), resolution, float(t0))


def _values(x):
    if isinstance(x, SymbolSeries):
        return list(x.symbols)
    return list(x)


def dtw(a, b) -> float:
    """DTW cost between two symbol sequences with cost 0 for equal symbols
    and 1 otherwise. No warping window."""
    if isinstance(a, SymbolSeries) and isinstance(b, SymbolSeries) and a.resolution != b.resolution:
        raise ValueError("series have different resolutions")
    a, b = _values(a), _values(b)
    if not a or not b:
        raise ValueError("dtw needs non-empty sequences")
    # map symbols to integer codes so the comparison vectorises
    codes: dict = {}
    ca = np.array([codes.setdefault(s, len(codes)) for s in a])
    cb = np.array([codes.setdefault(s, len(codes)) for s in b])
    m = len(cb)
    cost = (ca[0] != cb).astype(float)
    prev = np.cumsum(cost)
    for i in range(1, len(ca)):
        c = (ca[i] != cb).astype(float)
        # D[j] = c[j] + min(prev[j], prev[j-1], D[j-1]); the horizontal term
        # unrolls to S[j] + min_k (E[k] - S[k]) with S the running cost sum.
        diag = np.empty(m)
        diag[0] = prev[0]
        np.minimum(prev[1:], prev[:-1], out=diag[1:])
        e = c + diag
        s = np.cumsum(c)
        cur = s + np.minimum.accumulate(e - s)
        prev = cur
    return float(prev[-1])


class PeriodRow(NamedTuple):
    period: int
    confidence: float


@dataclass(frozen=True)
class PeriodReport:
    rows: tuple

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def confidence(self, period: int) -> float:
        return self.rows[period - 1].confidence

    @property
    def periods(self) -> np.ndarray:
        return np.array([r.period for r in self.rows], dtype=int)

    @property
    def confidences(self) -> np.ndarray:
        return np.array([r.confidence for r in self.rows])


def warp(series) -> PeriodReport:
    """Confidence for every candidate period ``1 .. n // 2``."""
    values = _values(series)
    n = len(values)
    if n < 4:
        raise ValueError("need at least 4 slots")
    rows = []
    for p in range(1, n // 2 + 1):
        cost = dtw(values[: n - p], values[p:])
        conf = min(max(1.0 - cost / (n - p), 0.0), 1.0)
        rows.append(PeriodRow(p, conf))
    return PeriodReport(tuple(rows))


def best_period(report: PeriodReport, min_confidence: float = 0.0, tol: float = 1e-12) -> Optional[PeriodRow]:
    """Smallest period among those with the highest confidence, provided
    that confidence reaches ``min_confidence``."""
    if not report.rows:
        return None
    top = max(r.confidence for r in report.rows)
    if top < min_confidence:
        return None
    for r in report.rows:
        if r.confidence >= top - tol:
            return r
    return None


def zone_series(st: SymbolicTrajectory, resolution: float, zone_ids: Sequence[int]) -> dict:
    """Per-zone binary series for each zone id."""
    return {z: build_series(st, resolution, PER_ZONE, zone=z) for z in zone_ids}
