"""Contractions of real Lie algebras given by structure constants.

Exact tools (Laurent-rational contraction matrices, the tensor action,
diagonal-realization feasibility, derivation invariants) plus a certificate
and a numerical experiment showing that ``a(n) -> a0(n)`` needs unbounded
contraction matrices.
"""

from fractions import Fraction

from .certificate import certify, key_identity, residuals_direct, residuals_formula, row_reducer
from .contraction import lemma1_transfer, standard_family, sample_sequence, verify_realization
from .giw import build_problem, lp_feasible, necessity_query, solve
from .invariants import center_dimension, derivation_dimension, is_automorphism
from .linalg import det, lq_decompose, mat_inv
from .paramscalar import T, ParamScalar, limit_at_zero_plus, parse_param, valuation
from .tensor import StructureTensor, act, catalog, direct_sum, jacobi_defects, limit_tensor

Rational = Fraction

__version__ = "0.1.0"
