"""CM values of Borcherds products, Gross-Zagier singular moduli, and the
Eisenstein/theta coefficients that compute them."""

from .arith import (
    DiscriminantError,
    factorize,
    hilbert,
    ideal_count,
    is_fundamental,
    kronecker,
    sturm_condition,
)
from .cmidentity import (
    CoefficientTable,
    IdentityReport,
    coefficient_sum,
    delta_weight,
    eisenstein_table,
    sturm_check,
    verify_averaged,
    verify_individual,
)
from .eiskappa import diff_set, kappa, kappa_constant, lambda_completed_at_0
from .grosszagier import epsilon, gz_rhs_factorization, log_abs_psi, norm_product, psi_value
from .petersson import characters, eta_cm_value, petersson_norm_eta, petersson_quadrature, theta_psi
from .precision import PrecisionContext
from .qforms import BinaryQuadraticForm, class_group, cm_point, compose, genus_character, reduce, square_class
from .qseries import QExpansion, ThetaExpansion, eisenstein_series, eta, j_invariant, theta_form
from .weilrep import FiniteQuadraticModule, fqm_for_gz, scalar_coset_map, verify_relations, weil_matrices

__version__ = "0.1.0"
