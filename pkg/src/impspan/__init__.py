"""Well-separated pair decompositions for disjoint balls and imprecise spanners."""

from .geometry import (AxisBox, Ball, BallSet, DimensionMismatch, GeometryError, OverlapError,
                       ball_distance, bounding_box, enclosing_ball, pairwise_disjoint,
                       unit_ball_volume_coeff)
from .splittree import SplitTree, SplitTreeNode, build_split_tree, node_parent
from .wspd_points import NodePair, PointWspd, compute_point_wspd, nodes_well_separated
from .wspd_balls import (BallPair, BallWspd, ball_pair_well_separated, compute_ball_wspd,
                         find_pairs, packing_bound, singleton_separation_test)
from .spanner import (ImpreciseSpanner, InstanceGraph, PreciseInstance, build_imprecise_spanner,
                      dilation, dilation_report, sample_instance, separation_for_stretch)
from .lowerbound import (Segment, adversarial_instance, generate_otn,
                         verify_completeness_required)
from .oracle import (VerificationReport, all_pairs_dilation_oracle, check_coverage,
                     check_definition2, check_lemma2_instances)

__version__ = "0.1.0"
