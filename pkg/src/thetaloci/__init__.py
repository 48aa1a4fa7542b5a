"""Numerical Riemann theta functions with characteristics, theta-null type
loci, and Jacobian-rank probes at explicit period matrices."""

from .characteristics import Characteristic, act, enumerate_chars, in_congruence_subgroup, parity, two_torsion_point
from .core import (
    DEFAULT_TOL,
    SiegelPoint,
    SymplecticMatrix,
    Tolerance,
    numerical_rank,
    random_siegel,
    symplectic_action,
    symplectic_generators,
    validate_siegel,
)
from .errors import NumericalError, ThetaLociError, ValidationError
from .loci import (
    ABOVE_CAP,
    char_multiplicity,
    d2_theta_null_witnesses,
    d_theta_null_witnesses,
    dk_theta_null_witnesses,
    in_A_k,
    multiplicity_at,
    theta_null_witnesses,
)
from .modforms import D2_form, D_form, even_jet_matrix, gradient_matrix
from .probes import (
    EXCLUDED,
    codg_L_matrix,
    fj_leading_ratio,
    irred_jacobian,
    tsing_jacobian,
    y_locus_jacobian,
)
from .theta import ThetaJet, heat_factor, theta, theta_jet, theta_tau_derivative, truncation_radius

__version__ = "0.1.0"
