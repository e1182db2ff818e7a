"""Curvature verification and positivity certificates for handle cobordisms."""

from .linkconfig import (ApplicabilityVerdict, BlackGraph, LinkConfig,
                         black_graph_check, parse_config, theorem_applicable)
from .profile import (HandleProfile, ProfileJet, Variant,
                      check_boundary_conditions, eval_jet, make_profile)
from .psc import (RegionPartition, ScanReport, alpha_scaled_scan, find_epsilon,
                  find_min_R, fiber_rescale_invariance, leading_term,
                  radius_one_scan, region_inequality_min, region_partition,
                  scan_scalar_curvature)
from .stepfn import SmoothStep, build_step, check_limit_ratios, eval_step
from .tensor import (ChartPoint, CurvatureBundle, MetricJet, christoffel,
                     dh_rank_check, embed_point, induced_metric_oracle,
                     metric_closed_form, metric_inverse, riemann,
                     ricci_and_scalar, verify_closed_forms)

__version__ = "0.1.0"
