"""Analysis on top of a segmentation.

* spatial separation between two stay regions (an asymmetric relation);
* the step function mapping the presence threshold to the number of stay
  regions, built by repeated scans;
* spatial similarity of stay regions, similarity classes and zones;
* rewriting a segmentation as a symbolic trajectory over zones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .core import Params, Trajectory, presence
from .density import batch_core_points
from .segmentation import Segmentation, StayRegion, seqscan

TRANSITION_SYMBOL = 0


# -- spatial separation ------------------------------------------------------


class SeparationReport(NamedTuple):
    pair: tuple
    separated: bool
    witness: Optional[int] = None


def region_core(region: StayRegion, traj: Trajectory, params: Params) -> np.ndarray:
    """Indices of the region's core points, recomputed from its members alone."""
    idx = region.segment.indices()
    mask = batch_core_points(traj.xy[idx - 1], params.eps, params.min_pts)
    return idx[mask]


def spatially_separated(
    s2: StayRegion, s1: StayRegion, traj: Trajectory, params: Params, use_msr: bool = False
) -> SeparationReport:
    """Whether ``s2`` is spatially separated by ``s1``.

    True when no point of ``s2`` or of its local noise lies within ``eps`` of
    a core point of ``s1``. With ``use_msr`` the test applies to the minimal
    stay region of ``s2`` and its local noise instead. The witness is the
    lowest violating index.
    """
    core = region_core(s1, traj, params)
    seg = s2.msr if use_msr else s2.segment
    candidates = np.arange(seg.first, seg.last + 1)
    if core.size == 0:
        return SeparationReport((s2.id, s1.id), True)
    tree = cKDTree(traj.xy[core - 1])
    hits = tree.query_ball_point(traj.xy[candidates - 1], r=params.eps, return_length=True)
    bad = candidates[np.asarray(hits) > 0]
    if bad.size:
        return SeparationReport((s2.id, s1.id), False, int(bad[0]))
    return SeparationReport((s2.id, s1.id), True)


# -- presence sweep ----------------------------------------------------------


class FRow(NamedTuple):
    lo: float
    hi: float
    count: int


@dataclass(frozen=True)
class FTable:
    """Rows ``[lo, hi] -> count`` of the presence-to-region-count function.

    Between ``hi`` of one row and ``lo`` of the next (a gap of ``theta``) no
    scan was run; :meth:`count_at` reports the next row's count there, which
    is exact whenever presence values are multiples of ``theta``.
    """

    rows: tuple
    theta: float

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def count_at(self, delta: float) -> int:
        for row in self.rows:
            if delta <= row.hi:
                return row.count
        return 0


def min_msr_presence(seg: Segmentation, traj: Trajectory) -> float:
    return min(presence(r.msr, traj) for r in seg.regions)


def f_table(traj: Trajectory, eps: float, min_pts: int, theta: Optional[float] = None, max_runs: Optional[int] = None) -> FTable:
    """Region count as a function of the presence threshold.

    Starting from threshold 0, scan, record ``[threshold, smallest MSR
    presence] -> number of regions`` and restart just above that presence,
    until a scan finds no region. ``theta`` defaults to 1/1000 of the
    trajectory duration.
    """
    if theta is None:
        theta = traj.duration / 1000 if traj.duration > 0 else 1.0
    if not theta > 0:
        raise ValueError("theta must be positive")
    rows = []
    delta = 0.0
    while max_runs is None or len(rows) < max_runs:
        seg = seqscan(traj, Params(eps, min_pts, delta))
        if not seg.regions:
            break
        low = min_msr_presence(seg, traj)
        rows.append(FRow(delta, low, len(seg.regions)))
        delta = low + theta
    return FTable(tuple(rows), theta)


# -- similarity and zones ----------------------------------------------------


def _core_sets(regions, traj, params):
    return [traj.xy[region_core(r, traj, params) - 1] for r in regions]


def _reached_fraction(a, b, eps):
    """Fraction of points of ``a`` within ``eps`` of some point of ``b``."""
    if len(a) == 0:
        return 0.0
    if len(b) == 0:
        return 0.0
    hits = cKDTree(b).query_ball_point(a, r=eps, return_length=True)
    return float(np.count_nonzero(hits) / len(a))


def sim(s1: StayRegion, s2: StayRegion, traj: Trajectory, params: Params) -> float:
    """Largest fraction of one region's core points that lie within ``eps``
    of the other region's core points."""
    c1, c2 = _core_sets([s1, s2], traj, params)
    return max(_reached_fraction(c1, c2, params.eps), _reached_fraction(c2, c1, params.eps))


def similarity_matrix(regions: Sequence[StayRegion], traj: Trajectory, params: Params) -> np.ndarray:
    cores = _core_sets(regions, traj, params)
    m = len(regions)
    out = np.eye(m)
    for i in range(m):
        if len(cores[i]) == 0:
            out[i, i] = 0.0
        for j in range(i + 1, m):
            a = _reached_fraction(cores[i], cores[j], params.eps)
            b = _reached_fraction(cores[j], cores[i], params.eps)
            out[i, j] = out[j, i] = max(a, b)
    return out


def similar(value: float, psi: float) -> bool:
    """Similarity test; a threshold of 0 still requires some overlap."""
    return value > 0 if psi == 0 else value >= psi


def similarity_classes(
    regions: Sequence[StayRegion], psi: float, traj: Trajectory, params: Params, matrix=None
) -> list:
    """Partition of region ids into maximal classes of transitively similar
    regions, ordered by their smallest id."""
    if not 0 <= psi <= 1:
        raise ValueError("psi must lie in [0, 1]")
    m = len(regions)
    if m == 0:
        return []
    if matrix is None:
        matrix = similarity_matrix(regions, traj, params)
    related = matrix > 0 if psi == 0 else matrix >= psi
    _, comp = connected_components(coo_matrix(related), directed=False)
    ids = [r.id for r in regions]
    groups: dict[int, list] = {}
    for rid, c in zip(ids, comp.tolist()):
        groups.setdefault(c, []).append(rid)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


@dataclass(frozen=True, eq=False)
class Zone:
    id: int
    members: tuple
    indices: np.ndarray
    footprint: np.ndarray

    def __len__(self):
        return len(self.indices)


def zones(classes: Sequence[Sequence[int]], regions: Sequence[StayRegion], traj: Trajectory) -> list:
    """One zone per similarity class; zone ids follow the class order."""
    by_id = {r.id: r for r in regions}
    seen = set()
    out = []
    for k, cls in enumerate(classes, start=1):
        for rid in cls:
            if rid in seen:
                raise ValueError(f"region {rid} appears in two classes")
            if rid not in by_id:
                raise ValueError(f"unknown region {rid}")
            seen.add(rid)
        idx = np.unique(np.concatenate([by_id[rid].segment.indices() for rid in cls]))
        out.append(Zone(k, tuple(sorted(cls)), idx, traj.xy[idx - 1]))
    return out


# -- symbolic trajectory -----------------------------------------------------


class SymbolicEntry(NamedTuple):
    start: float
    end: float
    symbol: int  # zone id, or TRANSITION_SYMBOL


@dataclass(frozen=True)
class SymbolicTrajectory:
    """Temporally ordered ``(start, end, symbol)`` entries.

    Zone entries are the closed temporal extents of the stay regions.
    Transition entries span the time between the surrounding regions (or the
    trajectory ends) and are open where they touch a region.
    """

    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def symbols(self, include_transitions=True) -> list:
        return [e.symbol for e in self.entries if include_transitions or e.symbol != TRANSITION_SYMBOL]

    @property
    def span(self):
        return self.entries[0].start, self.entries[-1].end


def symbolic_trajectory(seg: Segmentation, zone_list: Sequence[Zone], traj: Trajectory) -> SymbolicTrajectory:
    """Rewrite the path as zone visits and non-empty transitions; local
    noise is dropped."""
    zone_of = {}
    for z in zone_list:
        for rid in z.members:
            zone_of[rid] = z.id
    t = traj.t
    entries = []
    prev_end = t[0]
    for gap, r in enumerate(seg.regions):
        if r.id not in zone_of:
            raise ValueError(f"region {r.id} belongs to no zone")
        if len(seg.transitions(gap)):
            entries.append(SymbolicEntry(float(prev_end), float(t[r.first - 1]), TRANSITION_SYMBOL))
        entries.append(SymbolicEntry(float(t[r.first - 1]), float(t[r.last - 1]), zone_of[r.id]))
        prev_end = t[r.last - 1]
    if len(seg.transitions(len(seg.regions))):
        entries.append(SymbolicEntry(float(prev_end), float(t[-1]), TRANSITION_SYMBOL))
    return SymbolicTrajectory(tuple(entries))
