"""Goldman and Thurston-Wolpert-Goldman brackets."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from loopalg.errors import FoldFailure
from loopalg.hyperbolic import Representation
from loopalg.intersect import DEFAULT_CONFIG, EnumerationConfig, coincident_crossing_data, intersection_data
from loopalg.words import (
    OrientedClass,
    UnorientedClass,
    equal_or_inverse_roots,
    format_word,
    inverse_class,
    peripheral_power,
    power,
    unoriented,
    word_key,
)


class LinComb:
    """Finite linear combination of classes with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for c, v in (terms or {}).items():
            v = Fraction(v)
            if v:
                clean[c] = clean.get(c, 0) + v
        self.terms = {c: v for c, v in clean.items() if v}

    @classmethod
    def of(cls, c, coeff=1):
        return cls({c: coeff})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: word_key(kv[0].word))

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, c) -> Fraction:
        return self.terms.get(c, Fraction(0))

    def __add__(self, other):
        out = dict(self.terms)
        for c, v in other.terms.items():
            out[c] = out.get(c, 0) + v
        return type(self)(out)

    def __neg__(self):
        return type(self)({c: -v for c, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return type(self)({c: v * k for c, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LinComb) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def map_classes(self, f):
        out = {}
        for c, v in self.terms.items():
            d = f(c)
            out[d] = out.get(d, 0) + v
        return type(self)(out)

    def to_dict(self) -> dict[str, str]:
        return {format_word(c.word): _frac_text(v) for c, v in self.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, v in self.items():
            parts.append(f"{_frac_text(v)}*({format_word(c.word)})")
        return " + ".join(parts)


def _frac_text(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class LoopLinComb(LinComb):
    __slots__ = ()


class UnorientedLinComb(LinComb):
    __slots__ = ()


class GoldmanEngine:
    """Memoizing bracket evaluator for one representation.

    Trivial and peripheral classes bracket to zero without touching the
    geometry, and so does a class with itself (antisymmetry).  A class and a
    different class on the same geodesic, such as x and x^-1, can have a
    nonzero bracket when the geodesic is not simple.
    """

    def __init__(self, rep: Representation, cfg: EnumerationConfig = DEFAULT_CONFIG):
        self.rep = rep
        self.cfg = cfg
        self.boundary = rep.boundary_classes
        self._cache: dict[tuple, LoopLinComb] = {}
        self._gw_cache: dict[tuple, UnorientedLinComb] = {}

    def is_inert(self, c: OrientedClass) -> bool:
        return c.is_trivial or peripheral_power(c, self.boundary) != 0

    def bracket(self, x: OrientedClass, y: OrientedClass) -> LoopLinComb:
        key = (x, y)
        if key in self._cache:
            return self._cache[key]
        if (y, x) in self._cache:
            return -self._cache[(y, x)]
        if self.is_inert(x) or self.is_inert(y) or x == y:
            out = LoopLinComb()
        else:
            acc: dict[OrientedClass, int] = {}
            for d in self.crossings(x, y):
                acc[d.product] = acc.get(d.product, 0) + d.sign
            out = LoopLinComb(acc)
        self._cache[key] = out
        return out

    def crossings(self, x: OrientedClass, y: OrientedClass):
        """Crossing data behind [x, y]; shared geodesics use pushed-off copies."""
        if equal_or_inverse_roots(x, y):
            return coincident_crossing_data(self.rep, x, y, self.cfg)
        return intersection_data(self.rep, x, y, self.cfg)

    def bracket_lin(self, p: LinComb, q: LinComb) -> LoopLinComb:
        out = LoopLinComb()
        for x, u in p.items():
            for y, v in q.items():
                out = out + self.bracket(x, y) * (u * v)
        return out

    def gw(self, ux: UnorientedClass, uy: UnorientedClass) -> UnorientedLinComb:
        key = (ux, uy)
        if key in self._gw_cache:
            return self._gw_cache[key]
        lifted = self.bracket_lin(lift_unoriented(ux), lift_unoriented(uy))
        out = fold(lifted)
        self._gw_cache[key] = out
        return out


def lift_unoriented(u: UnorientedClass) -> LoopLinComb:
    """The embedding u~ -> u + u^-1 (no 1/2 factor)."""
    return LoopLinComb({u.rep: 1}) + LoopLinComb({inverse_class(u.rep): 1})


def fold(p: LinComb) -> UnorientedLinComb:
    """Fold an i-invariant element of the Goldman algebra onto unoriented classes."""
    out = {}
    for c, v in p.items():
        inv = inverse_class(c)
        if p.coefficient(inv) != v:
            raise FoldFailure(f"coefficients of {c} and its inverse differ")
        u = unoriented(c)
        if c == u.rep:
            out[u] = v if c != inv else v / 2
    return UnorientedLinComb(out)


@lru_cache(maxsize=64)
def engine_for(rep: Representation, cfg: EnumerationConfig = DEFAULT_CONFIG) -> GoldmanEngine:
    return GoldmanEngine(rep, cfg)


def as_engine(rep, cfg: EnumerationConfig | None = None) -> GoldmanEngine:
    if isinstance(rep, GoldmanEngine):
        return rep
    return engine_for(rep, cfg or DEFAULT_CONFIG)


def goldman_bracket(rep, cx: OrientedClass, cy: OrientedClass, cfg: EnumerationConfig | None = None) -> LoopLinComb:
    return as_engine(rep, cfg).bracket(cx, cy)


def bracket_power(rep, cx: OrientedClass, n: int, cy: OrientedClass, cfg: EnumerationConfig | None = None) -> LoopLinComb:
    """[x^n, y] assembled from the crossings of x and y themselves.

    Each crossing of x with y contributes n times the class of x^n g y g^-1;
    this is checked against the direct bracket of the power class in tests.
    """
    if n < 1:
        raise ValueError("n must be positive")
    eng = as_engine(rep, cfg)
    if eng.is_inert(cx) or eng.is_inert(cy) or (cx == cy and n == 1):
        return LoopLinComb()
    from loopalg.words import canonical_class, inverse_word

    xn = cx.word * n
    acc: dict[OrientedClass, int] = {}
    for d in eng.crossings(cx, cy):
        prod = canonical_class(xn + d.witness + cy.word + inverse_word(d.witness))
        acc[prod] = acc.get(prod, 0) + n * d.sign
    return LoopLinComb(acc)


def gw_bracket(rep, ux: UnorientedClass, uy: UnorientedClass, cfg: EnumerationConfig | None = None) -> UnorientedLinComb:
    return as_engine(rep, cfg).gw(ux, uy)


def involution(p: LinComb) -> LoopLinComb:
    return LoopLinComb(p.map_classes(inverse_class).terms)


__all__ = [
    "GoldmanEngine",
    "LinComb",
    "LoopLinComb",
    "UnorientedLinComb",
    "as_engine",
    "bracket_power",
    "engine_for",
    "fold",
    "goldman_bracket",
    "gw_bracket",
    "involution",
    "lift_unoriented",
    "power",
]
