"""Formal and sectorial analysis of plane foliation singularities.

Truncated power series over exact Gaussian rationals or doubles, normal
forms of one-variable germs, classification and blow-up reduction of
singular points of ``A dx + B dy``, Camacho-Sad indices, holonomy, and a
numerical laboratory for asymptotic expansions on sectors.
"""

from .asymptotics import Sector, borel_ritt_realize, estimate_expansion, verify_asymptotic
from .bivariate import BivariateSeries, OneForm
from .blowup import DivisorGraph, blowup_pullback, divisor_singularities, reduce
from .errors import FoliateError
from .fields import APPROX, EXACT, ApproxField, ExactField, GaussianRational
from .foliation import SingularityClass, SingularityTag, classify_singularity, tangent_cone_R
from .index import camacho_sad_index, formal_separatrix, verify_index_theorem
from .normal_forms import classify_germ, invariance_order_and_generator, monomialize
from .report import emit, parse_request, run_pipeline
from .series import (
    TruncatedSeries,
    compose,
    compositional_inverse,
    formal_exp,
    formal_log,
    invert,
    multiply,
    nth_root,
)
from .transport import dulac_transport_formal, fit_holonomy, numeric_holonomy

__version__ = "0.1.0"

__all__ = [
    "APPROX", "EXACT", "ApproxField", "BivariateSeries", "DivisorGraph", "ExactField",
    "FoliateError", "GaussianRational", "OneForm", "Sector", "SingularityClass", "SingularityTag",
    "TruncatedSeries", "blowup_pullback", "borel_ritt_realize", "camacho_sad_index",
    "classify_germ", "classify_singularity", "compose", "compositional_inverse",
    "divisor_singularities", "dulac_transport_formal", "emit", "estimate_expansion",
    "fit_holonomy", "formal_exp", "formal_log", "formal_separatrix",
    "invariance_order_and_generator", "invert", "monomialize", "multiply", "nth_root",
    "numeric_holonomy", "parse_request", "reduce", "run_pipeline", "tangent_cone_R",
    "verify_asymptotic", "verify_index_theorem",
]
