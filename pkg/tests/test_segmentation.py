import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invariants import maximality_violations, random_case, segmentation_violations, reach_violations
from oracles import brute_dbscan
from seqscan import Params, Segment, Trajectory, seqscan
from seqscan.core import presence
from seqscan.density import ClusterState
from seqscan.segmentation import StayRegion, can_expand, classify, find_msr


def test_walkthrough_regions(walk):
    traj, params = walk
    seg = seqscan(traj, params)
    assert [str(r.segment) for r in seg.regions] == ["[1,1]∪[3,5]∪[8,8]", "[10,13]"]
    assert [str(r.msr) for r in seg.regions] == ["[1,1]∪[3,5]", "[10,13]"]
    assert seg.local_noise(1).tolist() == [2, 6, 7]
    assert seg.transitions().tolist() == [9]
    assert "".join(seg.kinds) == "CNCCCNNCTCCCC"
    assert seg.point_class(9) == ("T", 1)
    assert seg.point_class(6) == ("N", 1)
    assert seg.regions[0].presence == 2 and seg.regions[0].duration == 7


def test_fewer_points_than_min_pts():
    traj = Trajectory(np.zeros((3, 2)), [0, 1, 2])
    seg = seqscan(traj, Params(1.0, 4))
    assert seg.regions == ()
    assert seg.kinds.tolist() == ["T"] * 3 and seg.ordinals.tolist() == [0] * 3


def test_all_colocated_gives_one_region():
    traj = Trajectory(np.zeros((9, 2)), np.arange(9.0))
    seg = seqscan(traj, Params(1.0, 4))
    assert [r.segment for r in seg.regions] == [Segment([(1, 9)])]
    assert seg.local_noise().size == 0


def test_msr_is_first_satisfying_cluster():
    # point 1 is only reachable once point 6 arrives
    xy = [(1.5, 0.0)] + [(0.0, 0.0)] * 4 + [(0.75, 0.0)]
    traj = Trajectory(xy, np.arange(6.0))
    seg = seqscan(traj, Params(1.0, 4))
    (region,) = seg.regions
    assert region.msr == Segment([(2, 5)])
    assert region.segment == Segment([(1, 6)])


def test_presence_threshold_delays_msr():
    times = [0.0, 5.0, 10.0, 25.0, 31.0, 40.0]
    traj = Trajectory(np.zeros((6, 2)), times)
    params = Params(1.0, 4, presence=30.0)
    pool = ClusterState(1.0, 4, traj.t)
    found = []
    for i in range(1, 7):
        eff = pool.insert(i, traj.xy[i - 1])
        cand = find_msr(pool, params, eff.touched)
        found.append(None if cand is None else cand.segment)
    # replay: the cluster exists from point 4 on, presence 25 then 31
    assert presence(Segment([(1, 4)]), traj) == 25.0
    assert presence(Segment([(1, 5)]), traj) == 31.0
    assert found[:4] == [None] * 4
    assert found[4] == Segment([(1, 5)])
    assert seqscan(traj, params).regions[0].msr == Segment([(1, 5)])


def test_find_msr_needs_min_pts():
    pool = ClusterState(1.0, 4, np.arange(3.0))
    for i in range(1, 4):
        pool.insert(i, (0.0, 0.0))
    assert find_msr(pool, Params(1.0, 4)) is None


def test_can_expand_and_merge_absorption():
    # site A (1-8), a side cluster too small to qualify (9-11) and a point
    # bridging the two (12); unit time, presence threshold 5
    a = [(0.0, 0.0), (0.1, 0.0), (0.0, 0.1), (-0.1, 0.0), (0.0, -0.1), (0.1, 0.1), (-0.1, -0.1), (0.05, 0.0)]
    side = [(1.6, 0.0), (1.7, 0.0), (1.6, 0.1)]
    bridge = [(0.8, 0.0)]
    xy = np.array(a + side + bridge)
    traj = Trajectory(xy, np.arange(12.0))
    params = Params(1.0, 4, 5.0)
    seg = seqscan(traj, params)
    (region,) = seg.regions
    core, comp, members = brute_dbscan(xy, 1.0, 4)
    assert set(region.segment) == {i + 1 for i in members[comp[0]]}
    assert {9, 10, 11} <= set(region.segment)

    ctx = ClusterState(1.0, 4, traj.t)
    for i in range(1, 12):
        ctx.insert(i, xy[i - 1])
    active = ctx.cluster_of(1)
    assert not can_expand(ctx, active, 11)
    ctx.insert(12, xy[11])
    assert can_expand(ctx, ctx.cluster_of(1), 12)


def test_isolated_point_cannot_expand():
    ctx = ClusterState(1.0, 2)
    ctx.insert(1, (0, 0))
    ctx.insert(2, (0, 0.5))
    ctx.insert(3, (9, 9))
    assert not can_expand(ctx, ctx.cluster_of(1), 3)


def _region(rid, intervals):
    seg = Segment(intervals)
    return StayRegion(rid, seg, seg, 0.0, 0.0)


def test_classify_examples(walk):
    traj, params = walk
    kinds, ords = classify(traj, seqscan(traj, params).regions)
    assert np.flatnonzero(kinds == "N").tolist() == [1, 5, 6]
    assert np.flatnonzero(kinds == "T").tolist() == [8]
    kinds, ords = classify(10, [])
    assert set(kinds.tolist()) == {"T"} and set(ords.tolist()) == {0}
    kinds, ords = classify(12, [_region(1, [(1, 5), (9, 9)])])
    assert kinds[5:8].tolist() == ["N"] * 3 and ords[5:8].tolist() == [1] * 3
    assert kinds[9:].tolist() == ["T"] * 3 and ords[9:].tolist() == [1] * 3


def test_classify_rejects_overlap():
    with pytest.raises(ValueError):
        classify(20, [_region(1, [(1, 5), (9, 9)]), _region(2, [(7, 12)])])


def test_weak_separation_is_accepted():
    # after its MSR, the second region walks back along a dense chain until
    # it is within eps of the first region's core points
    a = [(0.0, 0.0), (0.2, 0.0), (-0.2, 0.0)]
    b = [(5.0, 0.0), (5.2, 0.0), (4.8, 0.0)]
    chain = [(x, 0.0) for x in np.arange(4.3, 0.4, -0.5)]
    xy = np.array(a + b + chain)
    traj = Trajectory(xy, np.arange(len(xy), dtype=float))
    params = Params(1.0, 3)
    seg = seqscan(traj, params)
    first, second = seg.regions
    assert len(second.segment) == 3 + len(chain)
    core_a = xy[[i - 1 for i in sorted(first.core)]]
    tail = xy[second.segment.indices() - 1]
    gap = np.hypot(tail[:, None, 0] - core_a[None, :, 0], tail[:, None, 1] - core_a[None, :, 1])
    assert gap.min() <= params.eps
    assert reach_violations(seg, traj, params) == []
    assert segmentation_violations(seg, traj, params) == []


def test_non_consecutive_regions_may_overlap():
    a = [(0.0, 0.0), (0.2, 0.0), (0.0, 0.2), (-0.2, 0.0)]
    b = [(5.0, 0.0), (5.2, 0.0), (5.0, 0.2), (4.8, 0.0)]
    a2 = [(0.1, 0.0), (0.0, 0.1), (-0.1, 0.0), (0.0, -0.1)]
    xy = np.array(a + b + a2)
    traj = Trajectory(xy, np.arange(12.0))
    seg = seqscan(traj, Params(1.0, 4))
    assert [str(r.segment) for r in seg.regions] == ["[1,4]", "[5,8]", "[9,12]"]


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_random_fixtures_keep_invariants(seed):
    traj, _, params = random_case(seed)
    seg = seqscan(traj, params)
    assert segmentation_violations(seg, traj, params) == []
    assert reach_violations(seg, traj, params) == []
    assert maximality_violations(seg, traj, params) == []


def test_deterministic():
    traj, _, params = random_case(42)
    a, b = seqscan(traj, params), seqscan(traj, params)
    assert a.regions == b.regions
    assert np.array_equal(a.kinds, b.kinds)


def test_region_core_matches_context_core():
    from seqscan.analysis import region_core

    for seed in range(20):
        traj, _, params = random_case(seed)
        for r in seqscan(traj, params).regions:
            assert set(region_core(r, traj, params).tolist()) == set(r.core)
