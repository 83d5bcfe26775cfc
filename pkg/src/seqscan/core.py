"""Trajectories, index intervals, segments and the presence/duration measures.

Indices are 1-based throughout: a trajectory of ``n`` points is the index
interval ``[1, n]``. A *segment* is a union of disjoint index intervals, kept
in canonical form (sorted, with overlapping or index-adjacent runs merged).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class TrajectoryPoint(NamedTuple):
    index: int
    x: float
    y: float
    t: float


class Interval(NamedTuple):
    """Closed index interval ``[lo, hi]``."""

    lo: int
    hi: int

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, i) -> bool:
        return self.lo <= i <= self.hi


@dataclass(frozen=True)
class Params:
    """Segmentation parameters.

    ``eps`` is the neighbourhood radius (meters), ``min_pts`` the minimum
    neighbourhood size of a core point (the point itself included) and
    ``presence`` the minimum presence threshold in seconds.
    """

    eps: float
    min_pts: int
    presence: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.eps) and self.eps > 0):
            raise ValueError(f"eps must be a positive finite number, got {self.eps!r}")
        if int(self.min_pts) != self.min_pts or self.min_pts < 1:
            raise ValueError(f"min_pts must be an integer >= 1, got {self.min_pts!r}")
        if not (math.isfinite(self.presence) and self.presence >= 0):
            raise ValueError(f"presence must be >= 0, got {self.presence!r}")
        object.__setattr__(self, "min_pts", int(self.min_pts))

    def with_presence(self, presence: float) -> "Params":
        return Params(self.eps, self.min_pts, presence)


class Trajectory:
    """An immutable, time-ordered sequence of 2-D points.

    Positions are planar coordinates in meters, timestamps are seconds on a
    strictly increasing clock. Point ``i`` (1-based) is ``xy[i - 1]``.
    """

    __slots__ = ("_xy", "_t")

    def __init__(self, xy, t):
        xy = np.array(xy, dtype=float, copy=True).reshape(-1, 2)
        t = np.array(t, dtype=float, copy=True).reshape(-1)
        if len(xy) != len(t):
            raise ValueError(f"got {len(xy)} positions but {len(t)} timestamps")
        if not (np.isfinite(xy).all() and np.isfinite(t).all()):
            raise ValueError("positions and timestamps must be finite")
        if len(t) > 1:
            steps = np.diff(t)
            if (steps <= 0).any():
                k = int(np.argmax(steps <= 0)) + 2
                raise ValueError(f"timestamps must strictly increase (violated at index {k})")
        xy.flags.writeable = False
        t.flags.writeable = False
        self._xy = xy
        self._t = t

    @classmethod
    def from_points(cls, points: Iterable[TrajectoryPoint]) -> "Trajectory":
        points = list(points)
        for k, p in enumerate(points, start=1):
            if p.index != k:
                raise ValueError(f"point indices must be 1..n without gaps, found {p.index} at position {k}")
        return cls([(p.x, p.y) for p in points], [p.t for p in points])

    @property
    def xy(self) -> np.ndarray:
        return self._xy

    @property
    def t(self) -> np.ndarray:
        return self._t

    def __len__(self) -> int:
        return len(self._t)

    def __getitem__(self, i: int) -> TrajectoryPoint:
        self._check(i)
        x, y = self._xy[i - 1]
        return TrajectoryPoint(i, float(x), float(y), float(self._t[i - 1]))

    def __iter__(self):
        for i in range(1, len(self) + 1):
            yield self[i]

    def __repr__(self):
        return f"Trajectory(n={len(self)})"

    def _check(self, i):
        if not 1 <= i <= len(self):
            raise IndexError(f"index {i} outside [1, {len(self)}]")

    def position(self, i: int) -> np.ndarray:
        self._check(i)
        return self._xy[i - 1]

    def time(self, i: int) -> float:
        self._check(i)
        return float(self._t[i - 1])

    def temporal_distance(self, i: int, j: int) -> float:
        return abs(self.time(j) - self.time(i))

    def spatial_distance(self, i: int, j: int) -> float:
        return float(np.hypot(*(self.position(j) - self.position(i))))

    @property
    def duration(self) -> float:
        return float(self._t[-1] - self._t[0]) if len(self) else 0.0

    def subset(self, indices: Sequence[int]) -> "Trajectory":
        """New trajectory made of the given (increasing) indices, renumbered 1..m."""
        idx = np.asarray(indices, dtype=int) - 1
        return Trajectory(self._xy[idx], self._t[idx])


class Segment:
    """Canonical union of disjoint index intervals.

    Construct with :func:`canonicalize` (or ``Segment.from_indices``) unless the
    intervals are already canonical; the constructor validates them.
    """

    __slots__ = ("_intervals",)

    def __init__(self, intervals: Iterable[tuple[int, int]] = ()):
        ivs = tuple(Interval(int(lo), int(hi)) for lo, hi in intervals)
        for a, b in zip(ivs, ivs[1:]):
            if b.lo < a.hi + 2:
                raise ValueError(f"intervals {a} and {b} are not canonical")
        for iv in ivs:
            if iv.lo > iv.hi:
                raise ValueError(f"empty interval {iv}")
        self._intervals = ivs

    @classmethod
    def from_indices(cls, indices) -> "Segment":
        idx = np.unique(np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=int))
        if idx.size == 0:
            return cls()
        breaks = np.flatnonzero(np.diff(idx) > 1)
        starts = np.concatenate(([idx[0]], idx[breaks + 1]))
        ends = np.concatenate((idx[breaks], [idx[-1]]))
        seg = cls.__new__(cls)
        seg._intervals = tuple(Interval(int(a), int(b)) for a, b in zip(starts, ends))
        return seg

    @property
    def intervals(self) -> tuple[Interval, ...]:
        return self._intervals

    @property
    def first(self) -> int:
        if not self._intervals:
            raise ValueError("empty segment")
        return self._intervals[0].lo

    @property
    def last(self) -> int:
        if not self._intervals:
            raise ValueError("empty segment")
        return self._intervals[-1].hi

    @property
    def extent(self) -> Interval:
        return Interval(self.first, self.last)

    def indices(self) -> np.ndarray:
        if not self._intervals:
            return np.empty(0, dtype=int)
        return np.concatenate([np.arange(lo, hi + 1) for lo, hi in self._intervals])

    def __len__(self) -> int:
        return sum(len(iv) for iv in self._intervals)

    def __bool__(self) -> bool:
        return bool(self._intervals)

    def __contains__(self, i) -> bool:
        for iv in self._intervals:
            if iv.lo <= i <= iv.hi:
                return True
            if i < iv.lo:
                return False
        return False

    def __iter__(self):
        for lo, hi in self._intervals:
            yield from range(lo, hi + 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, Segment) and self._intervals == other._intervals

    def __hash__(self):
        return hash(self._intervals)

    def issubset(self, other: "Segment") -> bool:
        return all(i in other for i in self)

    def holes(self) -> "Segment":
        """Indices inside ``[first, last]`` that are not in the segment."""
        gaps = [(a.hi + 1, b.lo - 1) for a, b in zip(self._intervals, self._intervals[1:])]
        seg = Segment.__new__(Segment)
        seg._intervals = tuple(Interval(lo, hi) for lo, hi in gaps)
        return seg

    def __str__(self):
        if not self._intervals:
            return "{}"
        return "∪".join(f"[{lo},{hi}]" for lo, hi in self._intervals)

    def __repr__(self):
        return f"Segment({str(self)})"


def canonicalize(intervals: Iterable[tuple[int, int]]) -> Segment:
    """Sort and merge overlapping or index-adjacent intervals."""
    ivs = sorted((int(lo), int(hi)) for lo, hi in intervals)
    merged: list[list[int]] = []
    for lo, hi in ivs:
        if lo > hi:
            raise ValueError(f"interval [{lo},{hi}] has lo > hi")
        if merged and lo <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return Segment(merged)


def _check_segment(seg: Segment, traj: Trajectory):
    if not seg:
        raise ValueError("segment is empty")
    if seg.first < 1 or seg.last > len(traj):
        raise ValueError(f"segment {seg} has indices outside [1, {len(traj)}]")


def duration(seg: Segment, traj: Trajectory) -> float:
    """Time between the first and last point of the segment, holes included."""
    _check_segment(seg, traj)
    t = traj.t
    return float(t[seg.last - 1] - t[seg.first - 1])


def presence(seg: Segment, traj: Trajectory) -> float:
    """Sum of the durations of the segment's connected intervals."""
    _check_segment(seg, traj)
    t = traj.t
    return math.fsum(t[hi - 1] - t[lo - 1] for lo, hi in seg.intervals)
