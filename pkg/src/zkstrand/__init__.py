"""Exact Stanley–Reisner homological algebra: Betti tables via Hochster's
formula, the sweep action and quasi-linear strand, and the linearity
classification of simplicial complexes."""

from .classify import (NOT_EQUIGENERATED, ClassificationReport, classify, green_lazarsfeld_index,
                       has_almost_linear_resolution, has_linear_resolution, is_cohen_macaulay,
                       is_componentwise_almost_linear, is_componentwise_linear, is_gorenstein_star, is_sequentially_cm)
from .complexes import (SimplicialComplex, alexander_dual, chordless_cycle_threshold, combinatorial_predicates,
                        connected_sum, cycle, cyclic, deletion, from_facets, full_subcomplex, generate_family,
                        generated_by_faces_of_size, join_of_boundaries, link, minimal_nonfaces, simplex,
                        simplex_boundary, stacked, stellar_subdivide_facet)
from .errors import CapExceeded, InvariantViolation, UnsupportedOperation, ValidationError, ZKError
from .formats import parse_betti_table, parse_facet_text, parse_lutz_library, render_betti_table
from .hochster import (GradedBettiTable, betti_table, cokoszul_homology_ranks, homological_invariants,
                       multigraded_betti, poincare_sum_pairs)
from .homology import induced_homology_map, integral_reduced_homology, is_homology_sphere, reduced_homology
from .linalg import GF, QQ, ZZ, CoefficientSpec, Matrix, column_reduce, rank, smith_normal_form, solve_in_span
from .monomial import (MonomialIdeal, component_ideal, componentwise_profile, monomial_betti_table,
                       stanley_reisner_ideal, taylor_betti_oracle, upper_koszul_complex)
from .strand import (deletion_criterion, is_almost_quasi_koszul, is_hmf, is_quasi_koszul, quasi_linear_strand,
                     sweep_map)
from .survey import survey

__version__ = "0.1.0"
