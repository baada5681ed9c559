"""Proper q-colorings of finite windows of the Z^d lattice.

Construction and verification of frozen colorings, list coloring of
boxes through orientations and kernels, boundary fillability, mixing
diagnostics, exact counts and Glauber sampling -- all at desk scale,
with exhaustive checks wherever the state space allows.
"""

__version__ = "0.1.0"

from .lattice import (BoxRegion, PartialColoring, ProperColoring,
                      coloring_from_json, coloring_to_json, edge_counts,
                      external_boundary, is_proper, load_coloring, neighbors,
                      render_ascii, render_pgm, save_coloring, zd_neighbors)
from .frozen import (KempeComponent, LiftedColoringRule, LinearColoringRule,
                     ShiftedRule, canonical_frozen, coloring_from_rule,
                     find_single_site_rule, frozen_obstruction, is_frozen_on,
                     kempe_components, kempe_swap, lift_frozen,
                     single_site_frozen)
from .listcolor import (HallViolation, ListAssignment, Orientation,
                        boundary_cycle_orientation, check_subgraph_inequality,
                        cube_witness_report, find_kernel, hall_orientation,
                        has_odd_directed_cycle, induced_edges, level_sets,
                        list_bound, list_color, random_list_assignment,
                        search_unlistable, shell_color)
from .fill import (FillProblem, boundary_lists, box_list_bound,
                   fep_cover_indices, fep_extend, fill_box, fill_union,
                   non_extendable_boundary)
from .mixing import (AxisTubeRule, MixingWitness, MoveGraphReport,
                     axis_forcing_oracle, count_boundary_fillings,
                     forcing_report, move_graph, si_violation_witness,
                     tssm_witness, verify_forcing)
from .census import (CountReport, SamplerConfig, UnsatisfiableError,
                     count_exact, entropy_series, glauber_chain,
                     glauber_sample, random_proper_coloring,
                     tv_distance_to_uniform)
