"""Site percolation on embedded planar graphs and the adic strip-tree counterexample family."""

__version__ = "0.1.0"

from .adic import AdicParams, ImplicitGraph, ImplicitTilde, addr, block_range, implicit_corridor, lr_boundary
from .boundary import ArmResult, ArmSpec, FBoundary, arm_event_occurs, f_boundary, separation_count
from .engine import (Configuration, ClusterPartition, LazyTree, PercolationSample, clusters,
                     configuration_at, connectivity_probability, domination_violations,
                     estimate_pc, explore_zero_cluster, or_projection, sample_uniforms)
from .errors import PercolationError
from .experiments import (ExperimentConfig, audit_structure, cone_law, crossing_frequency,
                          fit_decay, fit_points, parse_config, run_experiment,
                          verify_distance_bounds)
from .generators import (bary_tree, cone_tree, corridor_subgraph, counterexample_graph,
                         double_and_glue, fan_triangulate, reference_graph, strip_graph,
                         triangular_lattice)
from .graph import EmbeddedGraph, build_graph, components_after_removal, faces, interior
from .graphio import read_graph, write_graph
from .phi import (BoundParams, cutset_inequality_check, le85_bound, phi_threshold_scan,
                  phi_value, supercritical_lower_bound)
