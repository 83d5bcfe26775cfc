"""How the number of stay regions depends on the presence threshold, and
how a segmentation scores against labelled truth.

Run with ``python demos/sweep_and_metrics.py``.
"""

from seqscan import FixtureSpec, Params, generate_fixture, seqscan
from seqscan.analysis import f_table
from seqscan.evaluation import NO_LOCAL_NOISE, WITH_LOCAL_NOISE, evaluate, resample_indices

spec = FixtureSpec(cluster_count=4, points_per_cluster=40, noise_rate=0.15, transition_length=4, seed=5)
traj, truth = generate_fixture(spec)

# One row per breakpoint of the step function; consecutive rows with the
# same count are merged for display.
table = f_table(traj, spec.eps, 4, theta=60.0)
print(f"presence threshold (s) -> regions, {len(table)} rows")
shown = []
for row in table:
    if shown and shown[-1][2] == row.count:
        shown[-1][1] = row.hi
    else:
        shown.append([row.lo, row.hi, row.count])
for lo, hi, count in shown:
    print(f"  [{lo:6.0f}, {hi:6.0f}]  {count}")

seg = seqscan(traj, Params(spec.eps, 4))
print()
for mode in (WITH_LOCAL_NOISE, NO_LOCAL_NOISE):
    m = evaluate(truth, seg, mode)
    print(f"{mode:17s} H-purity {m.h_purity:.3f}  pairwise F {m.pairwise_f:.3f}  diff {m.diff}")

# Thin the samples and segment again. Pairs with a point left unclustered on
# either side are not counted, so F can stay high while regions are lost;
# diff shows the loss.
print("\ninterval  points  regions  pairwise F  diff")
for factor in (1, 2, 4, 8):
    keep = resample_indices(traj, 60.0 * factor)
    sub, sub_truth = traj.subset(keep), truth.subset(keep)
    sub_seg = seqscan(sub, Params(spec.eps, 4))
    m = evaluate(sub_truth, sub_seg)
    print(f"{60 * factor:6d} s  {len(sub):6d}  {len(sub_seg.regions):7d}  {m.pairwise_f:10.3f}  {m.diff:4d}")
