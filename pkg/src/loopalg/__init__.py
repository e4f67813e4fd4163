"""Goldman brackets, their Poisson and enveloping algebras, and their centers,
computed on hyperbolic surfaces given by Fuchsian representations."""

from loopalg.center import CentralityVerdict, ClassKind, center_theorem_suite, classify_class, is_central, probe_set
from loopalg.goldman import GoldmanEngine, LoopLinComb, UnorientedLinComb, bracket_power, goldman_bracket, gw_bracket
from loopalg.hyperbolic import (
    Isometry,
    Representation,
    TwistFamily,
    fn_twist,
    parse_surface,
    rep_modular,
    rep_once_holed_torus,
    rep_pair_of_pants,
)
from loopalg.intersect import EnumerationConfig, intersection_data, is_simple, self_intersection_data
from loopalg.poisson import (
    DeformParam,
    PBWElement,
    SymPolynomial,
    commutator,
    hs_stacking,
    pbw_normalize,
    sk_bracket,
    specialize,
    sym_bracket,
    vh_multiply,
)
from loopalg.words import OrientedClass, UnorientedClass, canonical_class, parse_word, power, unoriented

__version__ = "0.1.0"
