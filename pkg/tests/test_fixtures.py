import numpy as np
import pytest

from seqscan import FixtureSpec, Params, generate_fixture, seqscan
from seqscan.evaluation import Labeling, pairwise_f


def test_noise_free_pair_is_recovered_exactly():
    spec = FixtureSpec(cluster_count=2, points_per_cluster=50, seed=3)
    traj, truth = generate_fixture(spec)
    seg = seqscan(traj, Params(spec.eps, 4))
    assert len(seg.regions) == 2 and seg.local_noise().size == 0
    assert Labeling.from_segmentation(seg) == truth


def test_noise_fraction_near_the_rate():
    for seed in range(5):
        spec = FixtureSpec(cluster_count=5, points_per_cluster=100, noise_rate=0.1, seed=seed)
        _, truth = generate_fixture(spec)
        assert len(truth) >= 500
        assert abs(np.mean(truth.kinds == "N") - 0.1) <= 0.02


def test_same_seed_same_output():
    spec = FixtureSpec(cluster_count=3, points_per_cluster=30, noise_rate=0.2, seed=11)
    (a, la), (b, lb) = generate_fixture(spec), generate_fixture(spec)
    assert a.xy.tobytes() == b.xy.tobytes() and a.t.tobytes() == b.t.tobytes() and la == lb
    c, _ = generate_fixture(FixtureSpec(cluster_count=3, points_per_cluster=30, noise_rate=0.2, seed=12))
    assert c.xy.tobytes() != a.xy.tobytes()


def test_local_noise_is_far_from_its_dwell():
    spec = FixtureSpec(cluster_count=4, points_per_cluster=60, noise_rate=0.25, seed=5)
    traj, truth = generate_fixture(spec)
    for k in range(1, 5):
        dwell = np.flatnonzero(truth.ordinals == k)
        members = traj.xy[dwell[truth.kinds[dwell] == "C"]]
        noise = traj.xy[dwell[truth.kinds[dwell] == "N"]]
        d = np.hypot(noise[:, None, 0] - members[None, :, 0], noise[:, None, 1] - members[None, :, 1])
        assert d.min() > spec.eps


def test_truth_clusters_are_temporally_separated():
    _, truth = generate_fixture(FixtureSpec(cluster_count=4, points_per_cluster=20, seed=2))
    ords = truth.ordinals[truth.kinds != "T"]
    assert np.all(np.diff(ords) >= 0)


def test_sampling_and_dwell_timing():
    traj, _ = generate_fixture(FixtureSpec(cluster_count=2, points_per_cluster=10, sampling_interval=30.0, transition_length=0))
    assert np.allclose(np.diff(traj.t), 30.0)
    traj, _ = generate_fixture(FixtureSpec(cluster_count=1, points_per_cluster=11, dwell=1000.0))
    assert traj.t[-1] - traj.t[0] == pytest.approx(1000.0)


def test_routes_over_sites():
    sites = ((0.0, 0.0), (1000.0, 0.0), (0.0, 1000.0))
    spec = FixtureSpec(cluster_count=4, points_per_cluster=25, sites=sites, route=(0, 1, 2, 0), seed=1)
    traj, truth = generate_fixture(spec)
    centre = traj.xy[truth.ordinals == 4].mean(axis=0)
    assert np.hypot(*centre) < spec.radius
    seg = seqscan(traj, Params(spec.eps, 4))
    assert pairwise_f(truth, seg) == (1.0, 1.0, 1.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(spacing=140.0),
        dict(noise_rate=1.0),
        dict(cluster_count=0),
        dict(transition_length=-1),
        dict(sites=((0.0, 0.0), (100.0, 0.0))),
        dict(sites=((0.0, 0.0), (1000.0, 0.0)), route=(0, 0)),
        dict(sites=((0.0, 0.0), (1000.0, 0.0)), route=(0, 2)),
        dict(sites=((0.0, 0.0), (1000.0, 0.0)), route=(0,)),
        dict(dwell=0.0),
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        generate_fixture(FixtureSpec(**kwargs))
