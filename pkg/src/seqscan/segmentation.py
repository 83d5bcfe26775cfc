"""Cluster-based segmentation: the sequential scan producing the first path.

The scan keeps two incrementally clustered point sets. The *context* holds
every point since the active stay region was found and is used to expand
it; the *pool* holds the points that could not be added to the active
region since its last expansion and is searched for the next minimal stay
region (MSR). When the pool yields an MSR the active region is closed, the
pool becomes the new context and a fresh pool is started.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .core import Interval, Params, Segment, Trajectory, duration
from .density import REMAINED_NOISE, ClusterState

MEMBER = "C"
LOCAL_NOISE = "N"
TRANSITION = "T"


@dataclass(frozen=True, eq=False)
class StayRegion:
    """A closed stay region of a segmentation.

    ``core`` holds the indices of the region's core points in the context it
    was expanded in, and ``context`` the index range of that context.
    """

    id: int
    segment: Segment
    msr: Segment
    presence: float
    duration: float
    core: frozenset = field(default=frozenset(), repr=False)
    context: Optional[Interval] = None

    @property
    def first(self) -> int:
        return self.segment.first

    @property
    def last(self) -> int:
        return self.segment.last

    @property
    def extent(self) -> Interval:
        return self.segment.extent

    def local_noise(self) -> Segment:
        return self.segment.holes()

    def __len__(self):
        return len(self.segment)

    def __eq__(self, other):
        return (
            isinstance(other, StayRegion)
            and self.id == other.id
            and self.segment == other.segment
            and self.msr == other.msr
        )

    def __hash__(self):
        return hash((self.id, self.segment, self.msr))


class PointClass(NamedTuple):
    kind: str  # "C", "N" or "T"
    ordinal: int  # region id for C/N, gap ordinal for T


class Segmentation:
    """Stay regions of a trajectory plus a class for every point.

    ``kinds[i - 1]`` is ``"C"`` (member), ``"N"`` (local noise) or ``"T"``
    (transition); ``ordinals[i - 1]`` is the region id for members and local
    noise, and for transitions the number of regions that precede the point
    (gap 0 lies before the first region).
    """

    def __init__(self, regions: Sequence[StayRegion], kinds, ordinals, params: Optional[Params] = None):
        self.regions = tuple(regions)
        self.kinds = np.asarray(kinds)
        self.ordinals = np.asarray(ordinals, dtype=int)
        self.params = params

    def __len__(self):
        return len(self.regions)

    def __repr__(self):
        return f"Segmentation({len(self.regions)} regions over {len(self.kinds)} points)"

    @property
    def n(self) -> int:
        return len(self.kinds)

    def point_class(self, i: int) -> PointClass:
        return PointClass(str(self.kinds[i - 1]), int(self.ordinals[i - 1]))

    def _select(self, kind, ordinal=None):
        mask = self.kinds == kind
        if ordinal is not None:
            mask &= self.ordinals == ordinal
        return np.flatnonzero(mask) + 1

    def local_noise(self, region_id: Optional[int] = None) -> np.ndarray:
        return self._select(LOCAL_NOISE, region_id)

    def transitions(self, gap: Optional[int] = None) -> np.ndarray:
        return self._select(TRANSITION, gap)

    def members(self, region_id: Optional[int] = None) -> np.ndarray:
        return self._select(MEMBER, region_id)


def classify(traj_or_n, regions: Sequence[StayRegion]):
    """Per-point ``(kinds, ordinals)`` arrays for a list of stay regions.

    Members keep their region; unclustered points inside a region's temporal
    extent are its local noise; everything else is a transition labelled with
    its gap ordinal.
    """
    n = traj_or_n if isinstance(traj_or_n, (int, np.integer)) else len(traj_or_n)
    for a, b in zip(regions, regions[1:]):
        if b.first <= a.last:
            raise ValueError(f"regions {a.id} and {b.id} are not temporally separated")
    kinds = np.full(n, TRANSITION, dtype="<U1")
    idx = np.arange(1, n + 1)
    lasts = np.array([r.last for r in regions], dtype=int)
    ordinals = np.searchsorted(lasts, idx, side="left")
    for r in regions:
        if r.first < 1 or r.last > n:
            raise ValueError(f"region {r.id} lies outside [1, {n}]")
        kinds[r.first - 1 : r.last] = LOCAL_NOISE
        ordinals[r.first - 1 : r.last] = r.id
        m = r.segment.indices() - 1
        kinds[m] = MEMBER
    return kinds, ordinals


class MSRCandidate(NamedTuple):
    cluster: int
    segment: Segment
    presence: float


def find_msr(pool: ClusterState, params: Params, clusters=None) -> Optional[MSRCandidate]:
    """First cluster of ``pool`` meeting the minimum presence constraint.

    Only ``clusters`` (by default all of them) are examined; the scan passes
    the clusters touched by the latest insertion. When several qualify at
    once the one reaching furthest back in time wins.
    """
    if clusters is None:
        clusters = pool.cluster_ids()
    best = None
    for c in clusters:
        if pool.member_count(c) < params.min_pts:
            continue
        if not pool.satisfies_presence(c, params.presence):
            continue
        runs = pool.runs(c)
        if best is None or runs[0][0] < best[1][0][0]:
            best = (c, runs)
    if best is None:
        return None
    c, runs = best
    return MSRCandidate(c, Segment(runs), pool.presence(c))


def can_expand(context: ClusterState, cluster: int, i: int) -> bool:
    """Whether point ``i`` (already inserted) belongs to ``cluster``."""
    return context.has_member(cluster, i)


class _Active:
    """The stay region being expanded, tracked through a core point because
    cluster ids change when clusters merge."""

    __slots__ = ("context", "anchor", "msr", "context_start")

    def __init__(self, context, cand, context_start):
        self.context = context
        self.msr = cand.segment
        members = context.members(cand.cluster)
        self.anchor = min(p for p in members if context.is_core(p))
        self.context_start = context_start

    @property
    def cluster(self):
        return self.context.cluster_of(self.anchor)

    def close(self, region_id, traj, context_end):
        ctx = self.context
        c = self.cluster
        seg = Segment(ctx.runs(c))
        core = frozenset(p for p in ctx.members(c) if ctx.is_core(p))
        return StayRegion(
            id=region_id,
            segment=seg,
            msr=self.msr,
            presence=ctx.presence(c),
            duration=duration(seg, traj),
            core=core,
            context=Interval(self.context_start, context_end),
        )


def seqscan(traj: Trajectory, params: Params) -> Segmentation:
    """Segment ``traj`` into the first path of stay regions."""
    # plain lists: scalar indexing is far cheaper than on numpy arrays
    times = traj.t.tolist()
    xy = traj.xy.tolist()
    eps, k = params.eps, params.min_pts
    regions: list[StayRegion] = []
    active: Optional[_Active] = None
    pool: Optional[ClusterState] = None
    pool_start = 0
    for i in range(1, len(traj) + 1):
        p = xy[i - 1]
        if active is not None:
            active.context.insert(i, p)
            if can_expand(active.context, active.cluster, i):
                pool = None
                continue
        if pool is None:
            pool = ClusterState(eps, k, times)
            pool_start = i
        effect = pool.insert(i, p)
        if effect.kind == REMAINED_NOISE:
            continue
        cand = find_msr(pool, params, effect.touched)
        if cand is None:
            continue
        if active is not None:
            regions.append(active.close(len(regions) + 1, traj, i))
        active = _Active(pool, cand, pool_start)
        pool = None
    if active is not None:
        regions.append(active.close(len(regions) + 1, traj, len(traj)))
    kinds, ordinals = classify(len(traj), regions)
    return Segmentation(regions, kinds, ordinals, params)
