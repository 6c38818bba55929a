"""midconv: middle convolution on local monodromy data, exactly.

The package computes the Katz transformation on semisimple local
monodromy data for rank-r local systems on the n-punctured projective
line, runs the rank-reduction loop, classifies moduli-space dimensions,
verifies the transformation numerically through explicit twisted-
homology matrices, and constructs degree-zero cyclotomic parabolic
Higgs bundles in the nonnegative-defect range.
"""

from .divisors import EigDivisor, MonodromyVector
from .errors import MidconvError
from .higgs import (Arrangement, HiggsData, construct, good_arrangement,
                    parabolic_degree, partial_move)
from .homology import (NumericInstance, generate_instance,
                       middle_convolution_rep, raw_convolution_rep,
                       verify_instance)
from .katz import (AlgorithmTrace, ConventionReport, Convoluter,
                   EmptinessCertificate, NoneffectiveReport, TerminalStatus,
                   check_conventions, check_involution, defect, detect_empty,
                   is_one_generic, kappa, kappa_de_rham, kappa_local, partner,
                   run_algorithm)
from .moduli import (DimensionReport, classify_dim2, dim2_census,
                     dimension_report, middle_h1_dim)
from .scalars import GroupElement, GroupMode, ScalarExpr

__version__ = "0.1.0"

__all__ = [
    "ScalarExpr", "GroupMode", "GroupElement",
    "EigDivisor", "MonodromyVector",
    "Convoluter", "ConventionReport", "NoneffectiveReport",
    "EmptinessCertificate", "AlgorithmTrace", "TerminalStatus",
    "defect", "kappa", "kappa_local", "kappa_de_rham", "partner",
    "check_involution", "check_conventions", "is_one_generic",
    "detect_empty", "run_algorithm",
    "DimensionReport", "dimension_report", "classify_dim2",
    "middle_h1_dim", "dim2_census",
    "NumericInstance", "raw_convolution_rep", "middle_convolution_rep",
    "generate_instance", "verify_instance",
    "Arrangement", "HiggsData", "good_arrangement", "partial_move",
    "parabolic_degree", "construct",
    "MidconvError",
]
