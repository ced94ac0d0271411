"""Exact commutative algebra and constructive Neron desingularization.

The package is a library first: an exact rational polynomial kernel with
global, local and mixed term orders, a standard-basis engine, the ideal
operations that feed the one-dimensional desingularization algorithm, a
Greenberg-type strong approximation lifter, and a small command line driver
around a textual problem-file format.
"""

from .errors import (ActiveElementNotFound, BoundTooSmall, CertificateFailed,
                     CompletionFailed, ConditionStarStarFailed,
                     DecompositionIncomplete, DivisibilityViolated,
                     DivisionFailed, HypothesisViolated, JetDivisionFailed,
                     NeronError, NoContraction, NotAUnit, NotDivisible,
                     NotInIdeal, PolyParseError, PreconditionFailed,
                     SeparabilityFailure, TargetInsidePrime,
                     VerificationFailed)
from .orders import (ALGEBRA, AUX, BASE, COEFF, INVERTER, SLACK, TANGENT,
                     BlockOrder, DegRevLex, Lex, NegDegRevLex, TermOrder,
                     VarTable, elim_order, global_order, local_order,
                     mixed_order)
from .poly import Polynomial, format_poly, jacobian, parse_poly, taylor_coefficients
from .linalg import PolyMatrix, det, det_adjugate, identity, minors
from .groebner import (DivisionWitness, IdealHandle, buchberger_criterion,
                       divide_with_witness, lift_division, normal_form,
                       normal_form_against, std_basis)
from .idealops import (divide_out, eliminate, ideal_equal, ideal_quotient,
                       intersect, krull_dim, radical_membership, saturate,
                       syzygies)

__all__ = [n for n in dir() if not n.startswith("_")]
