"""Waring decompositions of ternary quintics and binary forms.

Ternary quintics are written as sums of at most ten fifth powers of linear
forms through an apolar configuration of lines; binary forms get their exact
Waring rank and a minimal decomposition.
"""
from .apolarity import Decomposition, binary_decompose, binary_rank, catalecticant, line_decompose
from .decompose import RunReport, decompose, decompose_ternary_quintic, verify
from .errors import WaringError
from .lineconfig import LineConfiguration, certify, refine_configuration
from .poly import Form, contract, evaluate_dual, parse_form
from .ranklocus import RankTwoPencil, build_r, sample_rank_two
from .scalar import DEFAULT_POLICY, TolerancePolicy

__all__ = [
    "DEFAULT_POLICY",
    "Decomposition",
    "Form",
    "LineConfiguration",
    "RankTwoPencil",
    "RunReport",
    "TolerancePolicy",
    "WaringError",
    "binary_decompose",
    "binary_rank",
    "build_r",
    "catalecticant",
    "certify",
    "contract",
    "decompose",
    "decompose_ternary_quintic",
    "evaluate_dual",
    "line_decompose",
    "parse_form",
    "refine_configuration",
    "sample_rank_two",
    "verify",
]
