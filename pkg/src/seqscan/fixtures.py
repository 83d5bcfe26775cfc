"""Synthetic labelled trajectories for tests, demos and acceptance runs.

Clusters sit on the x axis ``spacing`` meters apart, unless explicit
``sites`` and a ``route`` over them are given. The object dwells in
each one for ``points_per_cluster`` samples scattered uniformly over a disc
of ``radius`` meters, then travels to the next centre along a straight line
(``transition_length`` points). A fraction ``noise_rate`` of the inner dwell
samples are excursions: displaced sideways to more than ``2 * radius + eps``
from the centre, hence more than ``eps`` from every point of the dwell.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Trajectory
from .evaluation import Labeling
from .segmentation import LOCAL_NOISE, MEMBER, TRANSITION


@dataclass(frozen=True)
class FixtureSpec:
    cluster_count: int = 2
    points_per_cluster: int = 100
    radius: float = 50.0
    spacing: float = 1000.0
    sampling_interval: float = 60.0
    noise_rate: float = 0.0
    transition_length: int = 5
    eps: float = 50.0
    # dwell duration per cluster in seconds; defaults to the sampling interval
    # times the number of dwell samples
    dwell: Optional[float] = None
    seed: int = 0
    # optional site coordinates and the site visited by each dwell; by
    # default dwell k sits at (k * spacing, 0)
    sites: Optional[tuple] = None
    route: Optional[tuple] = None

    def centres(self) -> np.ndarray:
        if self.sites is None:
            return np.column_stack((np.arange(self.cluster_count) * self.spacing, np.zeros(self.cluster_count)))
        sites = np.asarray(self.sites, dtype=float).reshape(-1, 2)
        route = range(self.cluster_count) if self.route is None else self.route
        return sites[list(route)]

    def validate(self):
        if self.cluster_count < 1 or self.points_per_cluster < 1:
            raise ValueError("need at least one cluster of at least one point")
        if self.radius < 0 or self.eps <= 0 or self.sampling_interval <= 0:
            raise ValueError("radius must be >= 0, eps and sampling_interval > 0")
        if not 0 <= self.noise_rate < 1:
            raise ValueError("noise_rate must lie in [0, 1)")
        if self.transition_length < 0:
            raise ValueError("transition_length must be >= 0")
        if self.sites is None and self.cluster_count > 1 and self.spacing <= 2 * self.radius + self.eps:
            raise ValueError(
                f"spacing {self.spacing} <= 2*radius + eps = {2 * self.radius + self.eps}: clusters would overlap"
            )
        if self.route is not None and len(self.route) != self.cluster_count:
            raise ValueError("route must name one site per cluster")
        if self.sites is not None:
            sites = np.asarray(self.sites, dtype=float).reshape(-1, 2)
            d = np.hypot(*(sites[:, None, :] - sites[None, :, :]).transpose(2, 0, 1))
            np.fill_diagonal(d, np.inf)
            if len(sites) > 1 and d.min() <= 2 * self.radius + self.eps:
                raise ValueError("sites are closer than 2*radius + eps")
            route = range(self.cluster_count) if self.route is None else self.route
            if any(not 0 <= r < len(sites) for r in route):
                raise ValueError("route refers to an unknown site")
            if any(a == b for a, b in zip(route, list(route)[1:])):
                raise ValueError("consecutive dwells must use different sites")
        if self.dwell is not None and self.dwell <= 0:
            raise ValueError("dwell must be positive")


def _disc(rng, n, radius):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    a = rng.uniform(0, 2 * np.pi, n)
    return np.column_stack((r * np.cos(a), r * np.sin(a)))


def generate_fixture(spec: FixtureSpec):
    """Return ``(trajectory, truth labeling)`` for ``spec``; deterministic in
    ``spec.seed``."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    m = spec.points_per_cluster
    step_in = spec.sampling_interval if spec.dwell is None else spec.dwell / max(m - 1, 1)
    near = 2 * spec.radius + spec.eps
    xy, t, kinds, ords = [], [], [], []
    centres = spec.centres()
    now = 0.0
    for k in range(spec.cluster_count):
        centre = centres[k]
        pts = centre + _disc(rng, m, spec.radius)
        kind = np.full(m, MEMBER)
        inner = np.arange(1, m - 1)
        n_noise = min(int(round(spec.noise_rate * m)), len(inner))
        if n_noise:
            picked = rng.choice(inner, size=n_noise, replace=False)
            ang = rng.uniform(np.pi / 3, 2 * np.pi / 3, n_noise) * rng.choice((-1, 1), n_noise)
            dist = near * 1.05 + rng.uniform(0, 10 * spec.eps, n_noise)
            pts[picked] = centre + np.column_stack((dist * np.cos(ang), dist * np.sin(ang)))
            kind[picked] = LOCAL_NOISE
        xy.append(pts)
        t.append(now + step_in * np.arange(m))
        now = t[-1][-1]
        kinds.extend(kind.tolist())
        ords.extend([k + 1] * m)
        if k + 1 < spec.cluster_count and spec.transition_length:
            L = spec.transition_length
            frac = np.arange(1, L + 1) / (L + 1)
            nxt = centres[k + 1]
            xy.append(centre + frac[:, None] * (nxt - centre))
            t.append(now + spec.sampling_interval * np.arange(1, L + 1))
            now = t[-1][-1]
            kinds.extend([TRANSITION] * L)
            ords.extend([0] * L)
        now += spec.sampling_interval
    traj = Trajectory(np.concatenate(xy), np.concatenate(t))
    return traj, Labeling(kinds, ords)
