"""Thirteen points, two sites, a few excursions.

Run with ``python demos/walkthrough.py``. The object starts at site A,
makes three short excursions (points 2, 6, 7), leaves for site B through
point 9 and stays there. With K=4 and eps=10 m the scan finds one stay
region per site; the excursions inside A's time span become A's local noise
and point 9 is the transition.
"""

import numpy as np

from seqscan import Params, Trajectory, seqscan
from seqscan.io import region_rows

A, B = (0.0, 0.0), (1000.0, 0.0)
xy = [
    A, (300.0, 400.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (-300.0, 400.0), (300.0, -400.0),
    (0.0, -1.0), (500.0, 0.0), B, (1001.0, 0.0), (1000.0, 1.0), (999.0, 0.0),
]
traj = Trajectory(xy, np.arange(1.0, 14.0))
seg = seqscan(traj, Params(eps=10.0, min_pts=4))

print("point classes:", " ".join(f"{k}{o if k != 'T' else ''}" for k, o in zip(seg.kinds, seg.ordinals)))
for region in seg.regions:
    print(f"S{region.id} = {region.segment}  grown from MSR {region.msr}")
print("local noise of S1:", seg.local_noise(1).tolist())
print("transitions:", seg.transitions().tolist())
print()
for row in region_rows(seg, traj):
    print(row)

# S1's connected runs add up to 2 time units of presence, B's to 3, so a
# threshold of 3 keeps only B.
strict = seqscan(traj, Params(10.0, 4, presence=3.0))
print("\nwith presence >= 3:", [str(r.segment) for r in strict.regions])
