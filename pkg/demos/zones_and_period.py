"""From stay regions to zones to a period.

Run with ``python demos/zones_and_period.py``. A synthetic animal visits four
sites on a square in a fixed order, three rounds in all, dwelling 300 s at
each site and travelling 360 s between them. Regions at the same site are
similar and merge into one zone; the zone sequence is then scanned for a
period.
"""

from seqscan import FixtureSpec, Params, generate_fixture, seqscan
from seqscan.analysis import TRANSITION_SYMBOL, similarity_classes, similarity_matrix, symbolic_trajectory, zones
from seqscan.periodicity import best_period, build_series, warp

spec = FixtureSpec(
    cluster_count=12,
    points_per_cluster=30,
    dwell=300.0,
    noise_rate=0.1,
    sites=((0.0, 0.0), (1000.0, 0.0), (1000.0, 1000.0), (0.0, 1000.0)),
    route=(0, 1, 2, 3) * 3,
    seed=3,
)
traj, truth = generate_fixture(spec)
params = Params(50.0, 5)
seg = seqscan(traj, params)
print(f"{len(traj)} points, {len(seg.regions)} stay regions")

sims = similarity_matrix(seg.regions, traj, params)
print("\nsimilarity of region 1 to the others:", " ".join(f"{v:.2f}" for v in sims[0]))
classes = similarity_classes(seg.regions, 0.0, traj, params, matrix=sims)
zone_list = zones(classes, seg.regions, traj)
for z in zone_list:
    print(f"zone {z.id}: regions {list(z.members)}")

st = symbolic_trajectory(seg, zone_list, traj)


def show(series):
    return "".join("." if s == TRANSITION_SYMBOL else str(s) for s in series.symbols)


# One 330 s slot per visit and one per transition: a round is 8 slots.
coarse = build_series(st, 330.0)
report = warp(coarse)
print(f"\nseries at 330 s: {show(coarse)}")
print("best period:", best_period(report))
print("confidence by period:", " ".join(f"{p}:{c:.2f}" for p, c in report))

# At a finer resolution each visit fills several slots. Warping then lines
# the series up with itself shifted by one slot almost for free, so the
# shortest shift scores highest.
fine = build_series(st, 60.0)
report = warp(fine)
print(f"\nseries at 60 s: {show(fine)}")
print("best period:", best_period(report), " confidence at one round (44 slots):", round(report.confidence(44), 3))
