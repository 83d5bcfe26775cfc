"""Insert-only incremental DBSCAN over a growing point set.

A :class:`ClusterState` answers neighbourhood queries through a uniform grid
(cell side ``eps``) and keeps the DBSCAN cluster structure up to date after
every insertion: neighbourhood counts, core flags, cluster labels (merged
through a label table, never by rewriting per-point labels) and, for each
cluster, its member set together with the connected index runs needed to
evaluate presence.

A cluster's members are its core points plus every point within ``eps`` of
one of them. A border point reachable from two clusters is a member of both;
:meth:`ClusterState.cluster_of` still reports a single label for it, the
cluster of the reaching core point with the smallest id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

REMAINED_NOISE = "remained-noise"
JOINED = "joined"
CREATED = "created"
MERGED = "merged"


@dataclass(frozen=True)
class InsertEffect:
    """What an insertion did to the point that was inserted.

    ``kind`` is one of ``remained-noise``, ``joined``, ``created`` or
    ``merged``. ``cluster`` is the (post-merge) cluster id the point belongs
    to, ``merged`` the ids that disappeared into it, and ``touched`` every
    cluster whose member set changed during the insertion.
    """

    kind: str
    cluster: Optional[int] = None
    merged: frozenset = frozenset()
    touched: frozenset = frozenset()


class _Cell:
    __slots__ = ("arr", "n")

    def __init__(self):
        self.arr = np.empty(8, dtype=np.int64)
        self.n = 0

    def append(self, slot):
        if self.n == len(self.arr):
            self.arr = np.concatenate((self.arr, np.empty(len(self.arr), dtype=np.int64)))
        self.arr[self.n] = slot
        self.n += 1


class _Members:
    """Member ids of one cluster plus its connected index runs."""

    __slots__ = ("ids", "start_of", "end_of", "approx_presence", "lo", "hi")

    def __init__(self):
        self.ids: set[int] = set()
        self.start_of: dict[int, int] = {}  # run end -> run start
        self.end_of: dict[int, int] = {}  # run start -> run end
        self.approx_presence = 0.0
        self.lo = math.inf
        self.hi = -math.inf

    def add(self, pid, times):
        if pid in self.ids:
            return False
        self.ids.add(pid)
        if pid < self.lo:
            self.lo = pid
        if pid > self.hi:
            self.hi = pid
        lo = hi = pid
        gain = 0.0
        if pid - 1 in self.start_of:
            lo = self.start_of.pop(pid - 1)
            del self.end_of[lo]
            if times is not None:
                gain -= times[pid - 2] - times[lo - 1]
        if pid + 1 in self.end_of:
            hi = self.end_of.pop(pid + 1)
            del self.start_of[hi]
            if times is not None:
                gain -= times[hi - 1] - times[pid]
        self.start_of[hi] = lo
        self.end_of[lo] = hi
        if times is not None:
            gain += times[hi - 1] - times[lo - 1]
            self.approx_presence += gain
        return True

    def runs(self):
        return sorted(self.end_of.items())

    def exact_presence(self, times):
        return math.fsum(times[hi - 1] - times[lo - 1] for lo, hi in self.end_of.items())


class ClusterState:
    """Incrementally maintained DBSCAN clustering of a point set.

    Parameters
    ----------
    eps : float
        Neighbourhood radius; also the grid cell side.
    min_pts : int
        Minimum neighbourhood size (the point itself counts) of a core point.
    times : array-like, optional
        Timestamps indexed by ``point_id - 1``. Required for presence
        queries, which treat point ids as trajectory indices.
    """

    def __init__(self, eps, min_pts, times=None, capacity=64):
        if eps <= 0:
            raise ValueError("eps must be positive")
        if min_pts < 1:
            raise ValueError("min_pts must be >= 1")
        self.eps = float(eps)
        self.min_pts = int(min_pts)
        self._eps2 = self.eps * self.eps
        self._times = times
        self._n = 0
        self._ids = np.empty(capacity, dtype=np.int64)
        self._xy = np.empty((capacity, 2))
        self._count = np.zeros(capacity, dtype=np.int64)
        self._core = np.zeros(capacity, dtype=bool)
        self._lab = np.full(capacity, -1, dtype=np.int64)
        self._multi = np.zeros(capacity, dtype=bool)
        self._slot: dict[int, int] = {}
        self._grid: dict[tuple[int, int], _Cell] = {}
        # label id -> cluster id; a cluster id is the label id of its root
        self._root = np.empty(16, dtype=np.int64)
        self._nlabels = 0
        self._clusters: dict[int, _Members] = {}

    # -- storage -----------------------------------------------------------

    def __len__(self):
        return self._n

    def __contains__(self, pid):
        return pid in self._slot

    def _grow(self):
        cap = 2 * len(self._ids)
        pad = cap - len(self._ids)
        self._ids = np.concatenate((self._ids, np.empty(pad, dtype=np.int64)))
        self._xy = np.concatenate((self._xy, np.empty((pad, 2))))
        self._count = np.concatenate((self._count, np.zeros(pad, dtype=np.int64)))
        self._core = np.concatenate((self._core, np.zeros(pad, dtype=bool)))
        self._lab = np.concatenate((self._lab, np.full(pad, -1, dtype=np.int64)))
        self._multi = np.concatenate((self._multi, np.zeros(pad, dtype=bool)))

    def _cell(self, x, y):
        return (math.floor(x / self.eps), math.floor(y / self.eps))

    def _neighbor_slots(self, x, y):
        cx, cy = self._cell(x, y)
        grid = self._grid
        parts = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                cell = grid.get((cx + dx, cy + dy))
                if cell is not None:
                    parts.append(cell.arr[: cell.n])
        if not parts:
            return np.empty(0, dtype=np.int64)
        cand = parts[0] if len(parts) == 1 else np.concatenate(parts)
        d = self._xy[cand] - (x, y)
        return cand[(d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1]) <= self._eps2]

    def _new_label(self):
        if self._nlabels == len(self._root):
            self._root = np.concatenate((self._root, np.empty(len(self._root), dtype=np.int64)))
        lab = self._nlabels
        self._root[lab] = lab
        self._nlabels += 1
        self._clusters[lab] = _Members()
        return lab

    def _merge(self, roots):
        """Fold the clusters ``roots`` into the largest one; return its id."""
        roots = sorted(roots, key=lambda r: (-len(self._clusters[r].ids), r))
        target = roots[0]
        keep = self._clusters[target]
        labels = self._root[: self._nlabels]
        for r in roots[1:]:
            labels[labels == r] = target
            gone = self._clusters.pop(r)
            for pid in gone.ids:
                keep.add(pid, self._times)
        return target

    # -- queries -----------------------------------------------------------

    def neighborhood(self, pos, eps=None) -> set:
        """Ids of member points within ``eps`` (inclusive) of ``pos``."""
        x, y = float(pos[0]), float(pos[1])
        if eps is None or eps == self.eps:
            return set(self._ids[self._neighbor_slots(x, y)].tolist())
        if eps <= 0:
            raise ValueError("eps must be positive")
        d = self._xy[: self._n] - (x, y)
        hit = (d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1]) <= eps * eps
        return set(self._ids[: self._n][hit].tolist())

    def _slot_of(self, pid):
        try:
            return self._slot[pid]
        except KeyError:
            raise ValueError(f"unknown point id {pid}") from None

    def is_core(self, pid) -> bool:
        return bool(self._core[self._slot_of(pid)])

    def core_points(self) -> set:
        n = self._n
        return set(self._ids[:n][self._core[:n]].tolist())

    def _reaching_roots(self, s):
        """Cluster ids whose core points lie within eps of slot ``s``."""
        if self._core[s]:
            return [int(self._root[self._lab[s]])]
        if self._lab[s] < 0:
            return []
        if not self._multi[s]:
            return [int(self._root[self._lab[s]])]
        nb = self._neighbor_slots(*self._xy[s])
        nb = nb[self._core[nb]]
        return sorted(set(self._root[self._lab[nb]].tolist()))

    def clusters_reaching(self, pid) -> set:
        """Every cluster that has ``pid`` as a member."""
        return set(self._reaching_roots(self._slot_of(pid)))

    def cluster_of(self, pid) -> Optional[int]:
        """Cluster id of ``pid`` after all merges, or None for noise.

        A border point reachable from several clusters is reported in the
        cluster of the reaching core point with the smallest id.
        """
        s = self._slot_of(pid)
        if self._core[s] or self._lab[s] < 0 or not self._multi[s]:
            return None if self._lab[s] < 0 else int(self._root[self._lab[s]])
        nb = self._neighbor_slots(*self._xy[s])
        nb = nb[self._core[nb]]
        best = nb[np.argmin(self._ids[nb])]
        return int(self._root[self._lab[best]])

    def cluster_ids(self) -> list:
        return sorted(self._clusters)

    def members(self, cluster) -> frozenset:
        return frozenset(self._clusters[cluster].ids)

    def has_member(self, cluster, pid) -> bool:
        return pid in self._clusters[cluster].ids

    def member_count(self, cluster) -> int:
        return len(self._clusters[cluster].ids)

    def runs(self, cluster) -> list:
        """Connected index runs ``(lo, hi)`` of a cluster, ascending."""
        return self._clusters[cluster].runs()

    def presence(self, cluster) -> float:
        if self._times is None:
            raise ValueError("presence requires timestamps")
        return self._clusters[cluster].exact_presence(self._times)

    def satisfies_presence(self, cluster, threshold) -> bool:
        """``presence(cluster) >= threshold`` without a full recount when the
        running total is clearly below the threshold."""
        m = self._clusters[cluster]
        if m.approx_presence < threshold - 1e-6 * max(abs(threshold), 1.0):
            return False
        return m.exact_presence(self._times) >= threshold

    def labels(self) -> dict:
        """``{point id: cluster id or None}`` using :meth:`cluster_of`."""
        return {int(pid): self.cluster_of(int(pid)) for pid in self._ids[: self._n]}

    # -- update ------------------------------------------------------------

    def insert(self, pid, pos) -> InsertEffect:
        """Add point ``pid`` at ``pos`` and update the clustering."""
        pid = int(pid)
        if pid in self._slot:
            raise ValueError(f"point id {pid} already inserted")
        x, y = float(pos[0]), float(pos[1])
        if self._n == len(self._ids):
            self._grow()
        s = self._n
        self._n += 1
        self._slot[pid] = s
        self._ids[s] = pid
        self._xy[s] = (x, y)
        key = self._cell(x, y)
        cell = self._grid.get(key)
        if cell is None:
            cell = self._grid[key] = _Cell()
        cell.append(s)

        nb = self._neighbor_slots(x, y)
        self._count[nb] += 1
        self._count[s] = len(nb)
        times = self._times
        lab = self._lab
        core = self._core
        touched = set()
        merged = set()
        created = False

        old_core = nb[core[nb]]
        if old_core.size:
            roots = set(self._root[lab[old_core]].tolist())
            for r in roots:
                self._clusters[r].add(pid, times)
                touched.add(r)
            lab[s] = lab[old_core[np.argmin(self._ids[old_core])]]
            if len(roots) > 1:
                self._multi[s] = True

        new_core = nb[(self._count[nb] >= self.min_pts) & ~core[nb]]
        if new_core.size:
            core[new_core] = True
            for c in new_core[np.argsort(self._ids[new_core])].tolist():
                nbc = nb if c == s else self._neighbor_slots(*self._xy[c])
                cn = nbc[core[nbc]]
                cn = cn[lab[cn] >= 0]
                roots = set(self._root[lab[cn]].tolist())
                if not roots:
                    target = self._new_label()
                    created = True
                elif len(roots) == 1:
                    target = roots.pop()
                else:
                    target = self._merge(roots)
                    merged.update(r for r in roots if r != target)
                if lab[c] < 0:
                    lab[c] = target
                fresh = nbc[lab[nbc] < 0]
                lab[fresh] = target
                members = self._clusters[target]
                for q in self._ids[fresh].tolist():
                    members.add(q, times)
                known = nbc[lab[nbc] >= 0]
                other = known[self._root[lab[known]] != target]
                if other.size:
                    self._multi[other] = True
                    for q in self._ids[other].tolist():
                        members.add(q, times)
                # a core point reaches all its neighbours, which may only have
                # been labelled just now
                members.add(int(self._ids[c]), times)
                touched.add(target)

        if lab[s] < 0:
            return InsertEffect(REMAINED_NOISE)
        touched = frozenset(int(self._root[r]) for r in touched)
        cluster = self.cluster_of(pid)
        merged = frozenset(merged)
        if merged:
            kind = MERGED
        elif created:
            kind = CREATED
        else:
            kind = JOINED
        return InsertEffect(kind, cluster, merged, touched)


def batch_core_points(xy, eps, min_pts) -> np.ndarray:
    """Boolean core mask for a static point set (kd-tree neighbour counts)."""
    from scipy.spatial import cKDTree

    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    if len(xy) == 0:
        return np.zeros(0, dtype=bool)
    tree = cKDTree(xy)
    counts = tree.query_ball_point(xy, r=eps, return_length=True)
    return np.asarray(counts) >= min_pts
