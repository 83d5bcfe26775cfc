"""External evaluation of a segmentation against labelled ground truth.

Both sides are reduced to a :class:`Labeling` (member of cluster ``k``,
local noise of cluster ``k``, or transition). Clusters are matched by point
overlap only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .core import Trajectory
from .segmentation import LOCAL_NOISE, MEMBER, TRANSITION, Segmentation

WITH_LOCAL_NOISE = "with-local-noise"
NO_LOCAL_NOISE = "no-local-noise"

_TOKEN = re.compile(r"^(?:([CN])(\d+)|T)$")


class UndefinedMetricError(ValueError):
    """Raised when a metric has no clustered points to work with."""


class Labeling:
    """Per-point class labels: ``kinds`` in {C, N, T}, ``ordinals`` the
    cluster number for C/N (0 for transitions)."""

    def __init__(self, kinds, ordinals):
        kinds = np.asarray(kinds, dtype="<U1")
        ordinals = np.asarray(ordinals, dtype=int)
        if kinds.shape != ordinals.shape:
            raise ValueError("kinds and ordinals differ in length")
        bad = ~np.isin(kinds, (MEMBER, LOCAL_NOISE, TRANSITION))
        if bad.any():
            raise ValueError(f"unknown class {kinds[bad][0]!r}")
        self.kinds = kinds
        self.ordinals = np.where(kinds == TRANSITION, 0, ordinals)

    @classmethod
    def from_tokens(cls, tokens) -> "Labeling":
        """Parse tokens such as ``C3``, ``N3`` and ``T``."""
        kinds, ords = [], []
        for tok in tokens:
            m = _TOKEN.match(str(tok).strip())
            if m is None:
                raise ValueError(f"unknown label token {tok!r}")
            kinds.append(m.group(1) or TRANSITION)
            ords.append(int(m.group(2) or 0))
        return cls(kinds, ords)

    @classmethod
    def from_segmentation(cls, seg: Segmentation) -> "Labeling":
        return cls(seg.kinds, seg.ordinals)

    def tokens(self) -> list[str]:
        return [k if k == TRANSITION else f"{k}{o}" for k, o in zip(self.kinds.tolist(), self.ordinals.tolist())]

    def __len__(self):
        return len(self.kinds)

    def __eq__(self, other):
        return (
            isinstance(other, Labeling)
            and np.array_equal(self.kinds, other.kinds)
            and np.array_equal(self.ordinals, other.ordinals)
        )

    def __repr__(self):
        return f"Labeling(n={len(self)}, clusters={self.cluster_count})"

    @property
    def cluster_count(self) -> int:
        return len(np.unique(self.ordinals[self.kinds == MEMBER]))

    def subset(self, indices) -> "Labeling":
        idx = np.asarray(indices, dtype=int) - 1
        return Labeling(self.kinds[idx], self.ordinals[idx])

    def cluster_ids(self, noise_mode: str = WITH_LOCAL_NOISE) -> np.ndarray:
        """Cluster id per point, -1 for unclustered points.

        In ``no-local-noise`` mode local noise counts as part of its cluster.
        """
        if noise_mode == WITH_LOCAL_NOISE:
            clustered = self.kinds == MEMBER
        elif noise_mode == NO_LOCAL_NOISE:
            clustered = self.kinds != TRANSITION
        else:
            raise ValueError(f"unknown noise mode {noise_mode!r}")
        return np.where(clustered, self.ordinals, -1)


LabelSource = Union[Labeling, Segmentation]


def _labeling(x: LabelSource) -> Labeling:
    return Labeling.from_segmentation(x) if isinstance(x, Segmentation) else x


def _contingency(truth, result, noise_mode):
    r = _labeling(truth).cluster_ids(noise_mode)
    s = _labeling(result).cluster_ids(noise_mode)
    if len(r) != len(s):
        raise ValueError(f"labelings cover {len(r)} and {len(s)} points")
    if (r < 0).all() or (s < 0).all():
        raise UndefinedMetricError("no clustered points on one side")
    _, ri = np.unique(r, return_inverse=True)
    _, si = np.unique(s, return_inverse=True)
    table = np.zeros((ri.max() + 1, si.max() + 1), dtype=np.int64)
    np.add.at(table, (ri, si), 1)
    # drop the unclustered row/column (label -1 sorts first)
    if (r < 0).any():
        table = table[1:]
    if (s < 0).any():
        table = table[:, 1:]
    return table, int((r >= 0).sum()), int((s >= 0).sum())


def _harmonic(a, b):
    return 0.0 if a + b == 0 else 2 * a * b / (a + b)


def h_purity(truth: LabelSource, result: LabelSource, noise_mode: str = WITH_LOCAL_NOISE):
    """``(purity, inverse purity, harmonic mean)`` of result vs. truth."""
    table, n_r, n_s = _contingency(truth, result, noise_mode)
    purity = table.max(axis=0).sum() / n_s if table.size else 0.0
    inv = table.max(axis=1).sum() / n_r if table.size else 0.0
    return float(purity), float(inv), float(_harmonic(purity, inv))


def _pairs(x):
    x = np.asarray(x, dtype=np.int64)
    return int((x * (x - 1) // 2).sum())


def pair_counts(truth: LabelSource, result: LabelSource, noise_mode: str = WITH_LOCAL_NOISE):
    """``(TP, FP, FN)`` over unordered point pairs.

    Pairs with a point that is unclustered on either side are not counted.
    """
    table, _, _ = _contingency(truth, result, noise_mode)
    tp = _pairs(table)
    fp = _pairs(table.sum(axis=0)) - tp
    fn = _pairs(table.sum(axis=1)) - tp
    return tp, fp, fn


def pairwise_f(truth: LabelSource, result: LabelSource, noise_mode: str = WITH_LOCAL_NOISE, exact: bool = False):
    """Pairwise ``(precision, recall, F)``; with ``exact`` as Fractions.

    With no same-cluster pair on either side the two clusterings agree on
    every pair and all three scores are 1; other empty ratios score 0.
    """
    tp, fp, fn = pair_counts(truth, result, noise_mode)
    num = Fraction if exact else (lambda a, b: a / b)
    if tp == fp == fn == 0:
        one = num(1, 1)
        return (one, one, one) if exact else (1.0, 1.0, 1.0)
    precision = num(tp, tp + fp) if tp + fp else num(0, 1)
    recall = num(tp, tp + fn) if tp + fn else num(0, 1)
    f = 2 * precision * recall / (precision + recall) if precision + recall else num(0, 1)
    if exact:
        return precision, recall, f
    return float(precision), float(recall), float(f)


def diff(truth: LabelSource, result: LabelSource) -> int:
    """Absolute difference of the number of clusters."""
    return abs(_labeling(result).cluster_count - _labeling(truth).cluster_count)


@dataclass(frozen=True)
class MetricReport:
    purity: float
    inv_purity: float
    h_purity: float
    pairwise_precision: float
    pairwise_recall: float
    pairwise_f: float
    diff: int


def evaluate(truth: LabelSource, result: LabelSource, noise_mode: str = WITH_LOCAL_NOISE) -> MetricReport:
    """All metrics in one report. ``noise_mode`` applies to both H-Purity and
    the pairwise counts."""
    p, ip, hp = h_purity(truth, result, noise_mode)
    pr, rc, f = pairwise_f(truth, result, noise_mode)
    return MetricReport(p, ip, hp, pr, rc, f, diff(truth, result))


def resample_indices(traj: Trajectory, interval: float) -> np.ndarray:
    """Indices kept when thinning ``traj`` to one point per ``interval``.

    For every instant ``t0 + k * interval`` up to the last timestamp, the
    nearest not-yet-kept point is kept (earlier point on ties).
    """
    t = traj.t
    n = len(t)
    if n < 2:
        raise ValueError("need at least 2 points to resample")
    native = float(np.median(np.diff(t)))
    if not interval >= native * (1 - 1e-12):
        raise ValueError(f"target interval {interval} is below the native median interval {native}")
    taken = np.zeros(n, dtype=bool)
    steps = int(np.floor((t[-1] - t[0]) / interval + 1e-9))
    for k in range(steps + 1):
        g = t[0] + k * interval
        j = int(np.searchsorted(t, g))
        left, right = j - 1, j
        while left >= 0 and taken[left]:
            left -= 1
        while right < n and taken[right]:
            right += 1
        best = None
        if left >= 0:
            best = left
        if right < n and (best is None or t[right] - g < g - t[best]):
            best = right
        if best is None:
            break
        taken[best] = True
    kept = np.flatnonzero(taken) + 1
    if len(kept) < 2:
        raise ValueError("fewer than 2 points survive resampling")
    return kept


def resample(traj: Trajectory, interval: float) -> Trajectory:
    """Thinned copy of ``traj`` (see :func:`resample_indices`), renumbered."""
    return traj.subset(resample_indices(traj, interval))
