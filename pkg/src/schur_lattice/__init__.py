"""Invariant lattices of Schur-module representations over discretely
valued fields: exact representation matrices, integral-span orders,
fixed-point sets on the lattice-class building, residue irreducibility
tests, and lattice Gaussian sampling.
"""

from .building import (FixSet, ResidueRep, convexity_check, detect_graduated,
                       diagonal_lattice, entry_profile, fix_bfs,
                       fix_polytrope, invariant_subspaces, is_invariant,
                       min_plus_closure, residue_generator_rep,
                       spans_end_residue)
from .dvr import (HNFResult, Lattice, LatticeClass, MatrixModule,
                  class_distance, compute_order, congruence_level, full_rank,
                  group_generator_matrices, hnf_dvr, lattice_dual,
                  lattice_intersection, lattice_sum, membership,
                  module_add_and_saturate, module_from_matrices,
                  relative_divisors, smith_divisors, standard_lattice,
                  uniformizer_diagonal_matrices)
from .errors import (CapExceeded, InternalInvariantViolation, NegativeCycle,
                     NegativeValuation, NonIntegralInput, NotFullRank,
                     SchurLatticeError, ShapeMismatch, Singular)
from .fields import (GF, INF, FieldSpec, LaurentRational, RationalAtP,
                     RationalFunctionOverFq, field_from_descriptor,
                     unit_sample_set)
from .gaussian import LatticeGaussian, chi2_uniform_counts, invariance_report, sample
from .partitions import (conjugate, dimension, hook_lengths, is_core,
                         partitions_of, ssyt_enumerate, validate_partition)
from .schur import SchurModule, character, residue_rep, rho

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "FieldSpec", "FixSet", "GF", "HNFResult", "INF",
    "InternalInvariantViolation", "Lattice", "LatticeClass",
    "LatticeGaussian", "LaurentRational", "MatrixModule", "NegativeCycle",
    "NegativeValuation", "NonIntegralInput", "NotFullRank", "RationalAtP",
    "RationalFunctionOverFq", "ResidueRep", "SchurLatticeError",
    "SchurModule", "ShapeMismatch", "Singular", "character",
    "chi2_uniform_counts", "class_distance", "compute_order", "congruence_level",
    "conjugate", "convexity_check", "detect_graduated", "diagonal_lattice",
    "dimension", "entry_profile", "field_from_descriptor", "fix_bfs",
    "fix_polytrope", "full_rank", "group_generator_matrices", "hnf_dvr",
    "hook_lengths", "invariance_report", "invariant_subspaces",
    "is_core", "is_invariant", "lattice_dual", "lattice_intersection",
    "lattice_sum", "membership", "min_plus_closure",
    "module_add_and_saturate", "module_from_matrices", "partitions_of",
    "relative_divisors", "residue_generator_rep", "residue_rep", "rho",
    "sample", "smith_divisors", "spans_end_residue", "ssyt_enumerate",
    "standard_lattice", "uniformizer_diagonal_matrices", "unit_sample_set",
    "validate_partition",
]
