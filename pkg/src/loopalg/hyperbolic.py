"""Isometries of the upper half-plane and built-in surface groups.

Points of H are Python complex numbers; boundary points are floats with
``math.inf`` for the point at infinity.  The upper half-plane carries its
standard (anti-clockwise) orientation.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace

from loopalg.errors import (
    InputError,
    NoRegisteredSplitting,
    NonHyperbolic,
    NotDiscreteInput,
    NotLinked,
    TangencyUnresolved,
)
from loopalg.words import (
    OrientedClass,
    Word,
    canonical_class,
    format_word,
    inverse_word,
    parse_word,
)

TOL = 1e-9
SCHEMA = 1


class Isometry:
    """A unit-determinant real 2x2 matrix acting by Mobius transformation."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: float, b: float, c: float, d: float, rescale: bool = True):
        if rescale:
            det = a * d - b * c
            if det <= 0:
                raise InputError(f"matrix determinant {det} is not positive")
            s = math.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        self.a, self.b, self.c, self.d = float(a), float(b), float(c), float(d)

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1.0, 0.0, 0.0, 1.0, rescale=False)

    @classmethod
    def from_rows(cls, rows) -> "Isometry":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self) -> list[list[float]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, o: "Isometry") -> "Isometry":
        return Isometry(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            rescale=False,
        )

    def inverse(self) -> "Isometry":
        return Isometry(self.d, -self.b, -self.c, self.a, rescale=False)

    @property
    def trace(self) -> float:
        return self.a + self.d

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def normalized(self) -> "Isometry":
        """Same element of PSL2(R), with the first nonzero entry positive."""
        first = next((x for x in (self.a, self.b, self.c, self.d) if x != 0.0), 1.0)
        m = Isometry(self.a, self.b, self.c, self.d)
        if first < 0:
            m = Isometry(-m.a, -m.b, -m.c, -m.d, rescale=False)
        return m

    def __call__(self, z):
        """Mobius action on H (complex) or on the boundary (float, inf allowed)."""
        a, b, c, d = self.a, self.b, self.c, self.d
        if isinstance(z, float) and math.isinf(z):
            return a / c if c != 0 else math.inf
        den = c * z + d
        if den == 0:
            return math.inf
        return (a * z + b) / den

    def _key(self):
        m = self.normalized()
        return (m.a, m.b, m.c, m.d)

    def __eq__(self, other) -> bool:
        return isinstance(other, Isometry) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def allclose(self, other: "Isometry", tol: float = 1e-9) -> bool:
        p, q = self.normalized(), other.normalized()
        return all(abs(x - y) <= tol * (1 + abs(x)) for x, y in zip(p._key(), q._key()))

    def __repr__(self) -> str:
        return f"Isometry([[{self.a!r}, {self.b!r}], [{self.c!r}, {self.d!r}]])"


@dataclass(frozen=True)
class AxisGeo:
    repelling: float
    attracting: float
    length: float

    def reversed(self) -> "AxisGeo":
        return AxisGeo(self.attracting, self.repelling, self.length)


def translation_length(m: Isometry, tol: float = TOL) -> float:
    t = abs(m.trace)
    if t <= 2 + tol:
        raise NonHyperbolic(f"|trace| = {t} is not > 2")
    return 2.0 * math.acosh(t / 2.0)


def is_hyperbolic(m: Isometry, tol: float = TOL) -> bool:
    return abs(m.trace) > 2 + tol


def _eigvec(m: Isometry, lam: float) -> tuple[float, float]:
    v1 = (m.b, lam - m.a)
    v2 = (lam - m.d, m.c)
    return v1 if math.hypot(*v1) >= math.hypot(*v2) else v2


def _boundary_point(v) -> float:
    p, q = v
    return math.inf if q == 0 else p / q


def frame(m: Isometry, tol: float = TOL) -> Isometry:
    """N with N(0) = repelling point, N(inf) = attracting point of m.

    N^-1 m N is diagonal with entries (lam, 1/lam), |lam| > 1, so in this
    frame m acts as z -> lam^2 z.
    """
    translation_length(m, tol)
    t = m.trace
    sgn = 1.0 if t > 0 else -1.0
    s = abs(t)
    lam = (s + math.sqrt(s * s - 4.0)) / 2.0
    mm = Isometry(sgn * m.a, sgn * m.b, sgn * m.c, sgn * m.d, rescale=False)
    va = _eigvec(mm, lam)
    vr = _eigvec(mm, 1.0 / lam)
    det = va[0] * vr[1] - vr[0] * va[1]
    if det < 0:
        vr = (-vr[0], -vr[1])
        det = -det
    return Isometry(va[0], vr[0], va[1], vr[1])


def frame_from_endpoints(repelling: float, attracting: float) -> Isometry:
    if math.isinf(attracting):
        return Isometry(1.0, repelling, 0.0, 1.0)
    if math.isinf(repelling):
        return Isometry(attracting, -1.0, 1.0, 0.0)
    if repelling > attracting:
        return Isometry(attracting, -repelling, 1.0, -1.0)
    return Isometry(attracting, repelling, 1.0, 1.0)


def axis(m: Isometry, tol: float = TOL) -> AxisGeo:
    n = frame(m, tol)
    return AxisGeo(n(0.0), n(math.inf), translation_length(m, tol))


def map_axis(g: Isometry, ax: AxisGeo) -> AxisGeo:
    return AxisGeo(g(ax.repelling), g(ax.attracting), ax.length)


def _circle_angle(x: float) -> float:
    # Cayley transform of the boundary point onto the unit circle.
    if math.isinf(x):
        return 0.0
    return cmath.phase((x - 1j) / (x + 1j))


def _arc_gap(s: float, t: float) -> float:
    d = abs(s - t) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def axes_linked(a1: AxisGeo, a2: AxisGeo, tol: float = TOL) -> bool:
    p = [_circle_angle(a1.repelling), _circle_angle(a1.attracting)]
    q = [_circle_angle(a2.repelling), _circle_angle(a2.attracting)]
    if min(_arc_gap(s, t) for s in p for t in q) < tol:
        raise TangencyUnresolved("axes share an endpoint within tolerance")
    lo, hi = sorted(p)
    inside = [lo < t < hi for t in q]
    return inside[0] != inside[1]


def crossing_in_frame(u: float, v: float) -> tuple[float, float]:
    """Crossing of the geodesic u -> v with the imaginary axis 0 -> inf.

    Returns (log-height of the crossing, directed angle from the upward
    direction to the u -> v direction).  Requires u * v < 0.
    """
    y0 = math.sqrt(-u * v)
    c = (u + v) / 2.0
    dx, dy = (y0, c) if u < v else (-y0, -c)
    return math.log(y0), math.atan2(-dx, dy)


def _in_frame(a1: AxisGeo, a2: AxisGeo) -> tuple[Isometry, float, float]:
    n = frame_from_endpoints(a1.repelling, a1.attracting)
    ni = n.inverse()
    return n, ni(a2.repelling), ni(a2.attracting)


def crossing_point(a1: AxisGeo, a2: AxisGeo, tol: float = TOL) -> complex:
    if not axes_linked(a1, a2, tol):
        raise NotLinked("axes do not cross")
    n, u, v = _in_frame(a1, a2)
    s, _ = crossing_in_frame(u, v)
    return n(1j * math.exp(s))


def directed_angle(a1: AxisGeo, a2: AxisGeo, tol: float = TOL) -> float:
    if not axes_linked(a1, a2, tol):
        raise NotLinked("axes do not cross")
    _, u, v = _in_frame(a1, a2)
    return crossing_in_frame(u, v)[1]


def hyperbolic_distance(z: complex, w: complex) -> float:
    return 2.0 * math.asinh(abs(z - w) / (2.0 * math.sqrt(z.imag * w.imag)))


def distance_to_axis(z: complex, ax: AxisGeo) -> float:
    n = frame_from_endpoints(ax.repelling, ax.attracting)
    w = n.inverse()(z)
    # distance from w to the imaginary axis
    return math.asinh(abs(w.real) / w.imag)


def geodesic_through(z: complex, w: complex) -> AxisGeo:
    """The geodesic oriented from z to w (length field unused, set to 0)."""
    if abs(z.real - w.real) <= 1e-15 * (1 + abs(z) + abs(w)):
        x = (z.real + w.real) / 2.0
        return AxisGeo(x, math.inf, 0.0) if w.imag > z.imag else AxisGeo(math.inf, x, 0.0)
    c = (abs(w) ** 2 - abs(z) ** 2) / (2.0 * (w.real - z.real))
    r = abs(z - c)
    return AxisGeo(c - r, c + r, 0.0) if w.real > z.real else AxisGeo(c + r, c - r, 0.0)


def midpoint(z: complex, w: complex) -> complex:
    """Hyperbolic midpoint of the segment from z to w.

    In the hyperboloid model the midpoint is (P + Q) / 2cosh(d/2); the only
    coordinates needed are t - v = 1/y and u = x/y, which add without
    cancellation.
    """
    if z == w:
        return z
    norm = 2.0 * math.cosh(hyperbolic_distance(z, w) / 2.0)
    tv = 1.0 / z.imag + 1.0 / w.imag
    u = z.real / z.imag + w.real / w.imag
    y = norm / tv
    return complex(u * y / norm, y)


def point_along(ax: AxisGeo, z: complex, dist: float) -> complex:
    """Point at signed distance dist from z (on ax) in the forward direction."""
    n = frame_from_endpoints(ax.repelling, ax.attracting)
    w = n.inverse()(z)
    return n(w * math.exp(dist))


@dataclass(frozen=True)
class Representation:
    """A marked hyperbolic structure given by generator images in SL2(R).

    An empty ``intersection_form`` means the homology pairing is unknown;
    the homological cross-check in ``loopalg.intersect`` is then skipped.
    """

    generators: tuple[Isometry, ...]
    boundary_words: tuple[Word, ...] = ()
    intersection_form: tuple[tuple[int, ...], ...] = ()
    label: str = ""
    kind: str = "custom"
    _inverses: tuple[Isometry, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.generators) < 2:
            raise InputError("a representation needs rank >= 2")
        object.__setattr__(self, "_inverses", tuple(g.inverse() for g in self.generators))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def boundary_classes(self) -> tuple[OrientedClass, ...]:
        return tuple(canonical_class(w) for w in self.boundary_words)

    def letter(self, x: int) -> Isometry:
        if x == 0 or abs(x) > self.rank:
            raise InputError(f"letter {x} outside rank {self.rank}")
        return self.generators[x - 1] if x > 0 else self._inverses[-x - 1]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "label": self.label,
            "kind": self.kind,
            "generators": [g.rows() for g in self.generators],
            "boundary_words": [format_word(w) for w in self.boundary_words],
            "intersection_form": [list(r) for r in self.intersection_form],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Representation":
        if d.get("schema") != SCHEMA:
            raise InputError(f"unsupported representation schema {d.get('schema')!r}")
        gens = tuple(Isometry.from_rows(m) for m in d["generators"])
        rank = len(gens)
        form = tuple(tuple(int(x) for x in row) for row in d.get("intersection_form", ()))
        if form and (len(form) != rank or any(len(r) != rank for r in form)):
            raise InputError("intersection form must be rank x rank")
        return cls(
            generators=gens,
            boundary_words=tuple(parse_word(w, rank) for w in d.get("boundary_words", ())),
            intersection_form=form,
            label=d.get("label", ""),
            kind=d.get("kind", "custom"),
        )

    @classmethod
    def from_json(cls, s: str) -> "Representation":
        return cls.from_dict(json.loads(s))


def evaluate(rep: Representation, w: Word) -> Isometry:
    m = Isometry.identity()
    for x in w:
        m = m @ rep.letter(x)
    return m


def _flip_orientation(m: Isometry) -> Isometry:
    # conjugation by z -> -conj(z)
    return Isometry(m.a, -m.b, -m.c, m.d, rescale=False)


def _crossing_sign(rep: Representation, w1: Word, w2: Word) -> int:
    ax1 = axis(evaluate(rep, w1))
    ax2 = axis(evaluate(rep, w2))
    return 1 if directed_angle(ax1, ax2) > 0 else -1


HOLED_TORUS_FORM = ((0, 1), (-1, 0))


def rep_once_holed_torus(tr_a: float, tr_b: float, tr_ab: float, label: str | None = None) -> Representation:
    """Holed or punctured torus with prescribed traces of a, b and ab.

    The matrices are oriented so that the a-axis crosses the b-axis with
    positive sign, matching the form [[0, 1], [-1, 0]].
    """
    x, y, z = float(tr_a), float(tr_b), float(tr_ab)
    t = x * x + y * y + z * z - x * y * z - 2.0
    if t > -2.0 + 1e-12:
        raise NotDiscreteInput(f"commutator trace {t} is not <= -2")
    s = (z + math.copysign(math.sqrt(z * z - 4.0), z)) / 2.0
    a = Isometry(x, -1.0, 1.0, 0.0)
    b = Isometry(0.0, s, -1.0 / s, y)
    rep = Representation((a, b), ((1, 2, -1, -2),), HOLED_TORUS_FORM, label or f"holed-torus:{x:g},{y:g},{z:g}", "holed-torus")
    if _crossing_sign(rep, (1,), (2,)) < 0:
        rep = replace(rep, generators=(_flip_orientation(a), _flip_orientation(b)))
    return rep


def rep_modular() -> Representation:
    """The modular torus, A = [[1,1],[1,2]], B = [[1,-1],[-1,2]] (cusped)."""
    a = Isometry(1.0, 1.0, 1.0, 2.0)
    b = Isometry(1.0, -1.0, -1.0, 2.0)
    rep = Representation((a, b), ((1, 2, -1, -2),), HOLED_TORUS_FORM, "modular", "holed-torus")
    # These fixed matrices cross a -> b with negative sign; the pairing
    # follows the geometry so that signed counts match homology.
    sign = _crossing_sign(rep, (1,), (2,))
    form = tuple(tuple(sign * v for v in row) for row in HOLED_TORUS_FORM)
    return replace(rep, intersection_form=form)


def rep_pair_of_pants(l1: float, l2: float, l3: float, label: str | None = None) -> Representation:
    """Pants with boundary lengths l1, l2, l3 for the classes a, b, BA."""
    if min(l1, l2, l3) <= 0:
        raise InputError("boundary lengths must be positive")
    x = -2.0 * math.cosh(l1 / 2.0)
    y = -2.0 * math.cosh(l2 / 2.0)
    z = -2.0 * math.cosh(l3 / 2.0)
    mu = (x - math.sqrt(x * x - 4.0)) / 2.0
    p = (z - y / mu) / (mu - 1.0 / mu)
    a = Isometry(mu, 0.0, 0.0, 1.0 / mu, rescale=False)
    b = Isometry(p, 1.0, p * (y - p) - 1.0, y - p, rescale=False)
    return Representation(
        (a, b),
        ((1,), (2,), (-2, -1)),
        ((0, 0), (0, 0)),
        label or f"pants:{l1:g},{l2:g},{l3:g}",
        "pants",
    )


# curve word -> index of the generator that crosses it
_SPLITTINGS = {
    "holed-torus": {(1,): 2, (2,): 1},
}


@dataclass(frozen=True)
class TwistFamily:
    """Fenchel-Nielsen left twists of ``base`` along ``curve``.

    The crossing generator g is replaced by T(s t) g, where T(u) translates
    by u along the axis of the curve.  Whether positive s is a left or a
    right twist depends on the handedness of the generator pair, so s is the
    negated crossing sign of (curve, g): with it, angles at positively
    signed crossings with the curve grow with t.
    """

    base: Representation
    curve: OrientedClass

    def __post_init__(self):
        table = _SPLITTINGS.get(self.base.kind, {})
        if self.curve.word not in table:
            raise NoRegisteredSplitting(
                f"no registered splitting for {self.curve} on {self.base.label or self.base.kind}"
            )

    @property
    def generator(self) -> int:
        return _SPLITTINGS[self.base.kind][self.curve.word]

    @property
    def handedness(self) -> int:
        return -_crossing_sign(self.base, self.curve.word, (self.generator,))

    def translation(self, t: float) -> Isometry:
        n = frame(evaluate(self.base, self.curve.word))
        e = math.exp(self.handedness * t / 2.0)
        return n @ Isometry(e, 0.0, 0.0, 1.0 / e, rescale=False) @ n.inverse()

    def __call__(self, t: float) -> Representation:
        if t == 0:
            return self.base
        gens = list(self.base.generators)
        i = self.generator - 1
        gens[i] = self.translation(t) @ gens[i]
        return replace(self.base, generators=tuple(gens), label=f"{self.base.label}|twist({self.curve},{t:g})")


def fn_twist(rep: Representation, curve, t: float) -> Representation:
    if isinstance(curve, str):
        curve = canonical_class(parse_word(curve, rep.rank))
    return TwistFamily(rep, curve)(t)


def parse_surface(spec: str) -> Representation:
    """Surface presets: ``modular``, ``holed-torus:x,y,z``, ``pants:l1,l2,l3``."""
    name, _, args = spec.partition(":")
    try:
        vals = [float(v) for v in args.split(",")] if args else []
    except ValueError as exc:
        raise InputError(f"bad surface parameters {args!r}") from exc
    if name == "modular" and not vals:
        return rep_modular()
    if name == "holed-torus" and len(vals) == 3:
        return rep_once_holed_torus(*vals, label=spec)
    if name == "pants" and len(vals) == 3:
        return rep_pair_of_pants(*vals, label=spec)
    raise InputError(f"unknown surface {spec!r}")


def inverse_image(rep: Representation, w: Word) -> Isometry:
    return evaluate(rep, inverse_word(w))
