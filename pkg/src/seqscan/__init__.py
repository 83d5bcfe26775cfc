"""Stay-region segmentation of movement trajectories.

The sequential scan partitions a trajectory into stay regions (density
clusters that the object occupies for a minimum cumulative time), their
local noise and the transitions between them. On top of a segmentation the
package offers a presence-threshold sweep, region similarity and zones,
symbolic trajectories with period detection, and external evaluation
against labelled ground truth.
"""

from .analysis import (
    FTable,
    SeparationReport,
    SymbolicTrajectory,
    Zone,
    f_table,
    sim,
    similarity_classes,
    similarity_matrix,
    spatially_separated,
    symbolic_trajectory,
    zones,
)
from .core import Interval, Params, Segment, Trajectory, TrajectoryPoint, canonicalize, duration, presence
from .density import ClusterState, batch_core_points
from .evaluation import (
    NO_LOCAL_NOISE,
    WITH_LOCAL_NOISE,
    Labeling,
    MetricReport,
    UndefinedMetricError,
    evaluate,
    h_purity,
    pairwise_f,
    resample,
)
from .fixtures import FixtureSpec, generate_fixture
from .hull import convex_hull
from .io import ParseError, parse_trajectory, write_segmentation
from .periodicity import PeriodReport, SymbolSeries, best_period, build_series, dtw, warp
from .segmentation import Segmentation, StayRegion, seqscan

__version__ = "0.1.0"
