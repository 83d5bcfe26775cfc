import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from seqscan import Params, Trajectory  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# Two sites 1000 m apart; points 2, 6, 7 are short excursions, 9 lies on the
# way from A to B. Unit time steps.
_A, _B = (0.0, 0.0), (1000.0, 0.0)
_WALK = [
    (_A[0] + 0.0, _A[1] + 0.0),  # 1
    (300.0, 400.0),  # 2
    (_A[0] + 1.0, _A[1] + 0.0),  # 3
    (_A[0] + 0.0, _A[1] + 1.0),  # 4
    (_A[0] - 1.0, _A[1] + 0.0),  # 5
    (-300.0, 400.0),  # 6
    (300.0, -400.0),  # 7
    (_A[0] + 0.0, _A[1] - 1.0),  # 8
    (500.0, 0.0),  # 9
    (_B[0] + 0.0, _B[1] + 0.0),  # 10
    (_B[0] + 1.0, _B[1] + 0.0),  # 11
    (_B[0] + 0.0, _B[1] + 1.0),  # 12
    (_B[0] - 1.0, _B[1] + 0.0),  # 13
]


def walkthrough():
    traj = Trajectory(_WALK, np.arange(1.0, 14.0))
    return traj, Params(eps=10.0, min_pts=4, presence=0.0)


@pytest.fixture
def walk():
    return walkthrough()
