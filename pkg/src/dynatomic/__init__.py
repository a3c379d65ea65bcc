"""Combinatorics and numerics for periodic dynamics of z -> z^d + c.

The package splits into an exact combinatorial half (angles, words,
kneading sequences, the primitive/satellite criterion and the loop
connection algorithm) and a numerical half (periodic-point solving,
dynatomic division, ray tracing, quadratic-differential certificates and
monodromy continuation).
"""

from .angles import (Angle, angle_from_word, d_expansion, exact_period,
                     kneading_sequence, maximal_in_orbit, orbit, tau_iterate)
from .engine import (ConnectionPlan, MonodromyMove, connect,
                     move_for_primitive, special_cycle_move,
                     transitivity_certificate)
from .parabolic import (BetaFamily, Classification, Verdict, beta_family,
                        classify_angle, itinerary_of_angle, special_data)
from .words import (CyclicExpression, KneadingSequence, Word,
                    cyclic_expression, primitive_root)

__version__ = "0.1.0"

__all__ = [
    "Angle", "Word", "KneadingSequence", "CyclicExpression",
    "tau_iterate", "exact_period", "orbit", "d_expansion", "angle_from_word",
    "maximal_in_orbit", "kneading_sequence", "primitive_root",
    "cyclic_expression",
    "Classification", "Verdict", "classify_angle", "itinerary_of_angle",
    "BetaFamily", "beta_family", "special_data",
    "MonodromyMove", "ConnectionPlan", "move_for_primitive",
    "special_cycle_move", "connect", "transitivity_certificate",
    "__version__",
]
