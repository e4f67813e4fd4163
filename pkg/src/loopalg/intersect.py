"""Intersection points of closed geodesics as double cosets of crossing axes.

Intersection points of the geodesics x and y correspond to double cosets
<x> g <y> for which the axis of x crosses g(axis of y).  Every such coset
has a representative of the form w h v^-1, with w a prefix of x, v a prefix
of y and h short, so conjugators are drawn from the "tube"

    T_r = { w h v^-1 : w prefix of x, v prefix of y, |h| <= r },

which contains the word ball of radius r around the identity.  T_r is
scanned for r = 0, 1, 2, ... until the crossing multiset is unchanged over
``window`` consecutive levels and the signed count agrees with the homology
pairing.  Left <x>-translates are folded by reducing the crossing position
modulo l_x; right <y>-translates fix the translated axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache

from loopalg.errors import (
    DegenerateClass,
    InputError,
    NonEssentialClass,
    NonHyperbolic,
    NotStabilized,
    TangencyUnresolved,
)
from loopalg.hyperbolic import (
    AxisGeo,
    Isometry,
    Representation,
    axis,
    crossing_in_frame,
    crossing_point,
    evaluate,
    frame,
    frame_from_endpoints,
    hyperbolic_distance,
    midpoint,
    translation_length,
)
from loopalg.words import (
    OrientedClass,
    Word,
    abelianize,
    canonical_class,
    free_reduce,
    inverse_class,
    inverse_word,
    primitive_root,
)


@dataclass(frozen=True)
class EnumerationConfig:
    radius: int | None = None
    stabilization_window: int = 2
    tol: float = 1e-9
    dedup_tol: float = 1e-6
    # crossings this close are merged only if their witnesses share a double coset
    merge_window: float = 1e-3

    def radius_for(self, x: OrientedClass, y: OrientedClass) -> int:
        if self.radius is None:
            return max(12, 2 * (len(x) + len(y)))
        if self.radius < max(len(x), len(y)):
            raise InputError(f"radius {self.radius} is shorter than the input words")
        return self.radius


DEFAULT_CONFIG = EnumerationConfig()


@dataclass(frozen=True)
class CrossingDatum:
    witness: Word
    point: complex
    sign: int
    angle: float
    product: OrientedClass
    position: float
    phi: float

    def to_dict(self) -> dict:
        from loopalg.words import format_word

        return {
            "witness": format_word(self.witness),
            "point": [self.point.real, self.point.imag],
            "sign": self.sign,
            "angle": self.angle,
            "product": str(self.product),
            "position": self.position,
        }


def _letters(rank: int):
    return [i for g in range(1, rank + 1) for i in (g, -g)]


@lru_cache(maxsize=None)
def _sphere(rank: int, r: int) -> tuple[Word, ...]:
    if r == 0:
        return ((),)
    out = []
    for w in _sphere(rank, r - 1):
        for x in _letters(rank):
            if not w or x != -w[-1]:
                out.append(w + (x,))
    return tuple(out)


_PREC = 60


def _dmat(m: Isometry):
    return (Decimal(m.a), Decimal(m.b), Decimal(m.c), Decimal(m.d))


def _dmul(m, n):
    return (m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3],
            m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3])


def _dapply(m, v):
    return (m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1])


def _deigvecs(m):
    """(attracting, repelling) eigenvectors; works projectively, so det need not be 1."""
    a, b, c, d = m
    t = a + d
    det = a * d - b * c
    root = (t * t - 4 * det).sqrt()
    big = (t + root) / 2 if t > 0 else (t - root) / 2
    small = det / big
    out = []
    for lam in (big, small):
        v1, v2 = (b, lam - a), (lam - d, c)
        out.append(v1 if abs(v1[0]) + abs(v1[1]) >= abs(v2[0]) + abs(v2[1]) else v2)
    return out


def _align(v, ref):
    k = (v[0] * ref[0] + v[1] * ref[1]) / (v[0] * v[0] + v[1] * v[1])
    return (v[0] * k, v[1] * k)


class _Scanner:
    """Crossings of the x-axis with translates of the y-axis."""

    def __init__(self, rep: Representation, x: Word, y: Word, cfg: EnumerationConfig, self_mode: bool):
        self.rep = rep
        self.x, self.y = x, y
        self.cfg = cfg
        self.self_mode = self_mode
        self.x_pm = (x, inverse_word(x))
        X = evaluate(rep, x)
        self.lx = translation_length(X, cfg.tol)
        self.n = frame(X, cfg.tol)
        self.ni = self.n.inverse()
        ny = frame(evaluate(rep, y), cfg.tol)
        self.y_rep = (ny.b, ny.d)
        self.y_att = (ny.a, ny.c)
        self.prefixes = [x[:i] for i in range(len(x))]
        self.suffixes = [inverse_word(y[:j]) for j in range(len(y))]
        self.seen: set[Word] = set()
        self.found: list[tuple] = []
        self._mats: dict[Word, Isometry] = {(): Isometry.identity()}

    def _matrix(self, w: Word) -> Isometry:
        m = self._mats.get(w)
        if m is None:
            m = self._matrix(w[:-1]) @ self.rep.letter(w[-1])
            if len(w) <= 24:
                self._mats[w] = m
        return m

    def _shorten(self, g: Word) -> Word:
        """Strip whole copies of x^{+-1} on the left and y^{+-1} on the right."""
        x, y = self.x, self.y
        xi, yi = inverse_word(x), inverse_word(y)
        changed = True
        while changed:
            changed = False
            for p in (x, xi):
                if len(g) >= len(p) and g[:len(p)] == p:
                    g, changed = g[len(p):], True
            for q in (y, yi):
                if len(g) >= len(q) and g[len(g) - len(q):] == q:
                    g, changed = g[:len(g) - len(q)], True
        return g

    def scan_level(self, r: int) -> None:
        for h in _sphere(self.rep.rank, r):
            for w in self.prefixes:
                for vi in self.suffixes:
                    g = self._shorten(free_reduce(w + h + vi))
                    if g in self.seen:
                        continue
                    self.seen.add(g)
                    self._test(g, self.ni @ self._matrix(g))

    def _test(self, g: Word, m: Isometry) -> None:
        if self.self_mode and free_reduce(g + self.y + inverse_word(g)) in self.x_pm:
            # g carries the y axis onto the x axis: no transverse crossing
            return
        p1 = m.a * self.y_rep[0] + m.b * self.y_rep[1]
        q1 = m.c * self.y_rep[0] + m.d * self.y_rep[1]
        p2 = m.a * self.y_att[0] + m.b * self.y_att[1]
        q2 = m.c * self.y_att[0] + m.d * self.y_att[1]
        eps = 1e-11
        amb1 = min(abs(p1), abs(q1)) < eps * math.hypot(p1, q1)
        amb2 = min(abs(p2), abs(q2)) < eps * math.hypot(p2, q2)
        if amb1 or amb2:
            p1, q1, p2, q2 = self._precise(g)
        u, v = p1 / q1, p2 / q2
        if u * v >= 0:
            return
        s, phi = crossing_in_frame(u, v)
        if abs(math.sin(phi)) < self.cfg.tol:
            raise TangencyUnresolved("crossing angle below tolerance")
        k = math.floor(s / self.lx)
        pos = s - k * self.lx
        if self.lx - pos < self.cfg.tol:
            pos, k = 0.0, k + 1
        if k > 0:
            g = free_reduce(inverse_word(self.x) * k + g)
        elif k < 0:
            g = free_reduce(self.x * (-k) + g)
        point = self.n(1j * math.exp(pos))
        self.found.append((pos, phi, g, point))

    def _precise(self, g: Word):
        """Endpoint coordinates of g(axis y) in the x frame, in high precision.

        Used when float rounding leaves an endpoint within noise of 0 or inf.
        Adjugates stand in for inverses, which is exact projectively.
        """
        with localcontext() as ctx:
            ctx.prec = _PREC
            X = (Decimal(1), Decimal(0), Decimal(0), Decimal(1))
            for ch in self.x:
                X = _dmul(X, _dmat(self.rep.letter(ch)))
            Y = (Decimal(1), Decimal(0), Decimal(0), Decimal(1))
            for ch in self.y:
                Y = _dmul(Y, _dmat(self.rep.letter(ch)))
            G = (Decimal(1), Decimal(0), Decimal(0), Decimal(1))
            for ch in g:
                G = _dmul(G, _dmat(self.rep.letter(ch)))
            va, vr = _deigvecs(X)
            # match the float frame up to rounding so positions agree
            n = self.n
            va = _align(va, (Decimal(n.a), Decimal(n.c)))
            vr = _align(vr, (Decimal(n.b), Decimal(n.d)))
            adj = (vr[1], -vr[0], -va[1], va[0])
            ya, yr = _deigvecs(Y)
            e1 = _dapply(adj, _dapply(G, yr))
            e2 = _dapply(adj, _dapply(G, ya))
            for p, q in (e1, e2):
                if min(abs(p), abs(q)) < Decimal(10) ** (12 - _PREC) * (abs(p) + abs(q)):
                    raise TangencyUnresolved(
                        "a translate shares an endpoint with the axis within tolerance; raise precision"
                    )
            return float(e1[0]), float(e1[1]), float(e2[0]), float(e2[1])

    def crossings(self) -> list[tuple]:
        """Found crossings, one per double coset <x> g <y>.

        Near-tangent crossings have ill-conditioned positions, so nearness in
        (position, angle) only nominates a merge; the coset test decides.
        """
        win = self.cfg.merge_window
        out: list[tuple] = []
        for item in sorted(self.found, key=lambda t: (t[0], t[1])):
            dup = False
            for o in out:
                dp = abs(item[0] - o[0])
                dp = min(dp, self.lx - dp)
                if dp < win and abs(item[1] - o[1]) < win and self._same_coset(o[2], item[2]):
                    dup = True
                    break
            if not dup:
                out.append(item)
        return out

    def _same_coset(self, g: Word, h: Word) -> bool:
        # h = x^i g y^j with |i| <= 1, as positions are already reduced mod l_x
        gi = inverse_word(g)
        for i in (0, 1, -1):
            xi = self.x * i if i >= 0 else inverse_word(self.x) * (-i)
            if _is_power_of(free_reduce(gi + xi + h), self.y):
                return True
        return False


def _is_power_of(w: Word, y: Word) -> bool:
    """w in <y>, for y cyclically reduced."""
    n, r = divmod(len(w), len(y))
    if r:
        return False
    return w == y * n or w == inverse_word(y) * n


def _datum(rep, x_full: Word, y_full: Word, pos, phi, g, point) -> CrossingDatum:
    product = canonical_class(x_full + g + y_full + inverse_word(g))
    return CrossingDatum(
        witness=g,
        point=point,
        sign=1 if phi > 0 else -1,
        angle=abs(phi),
        product=product,
        position=pos,
        phi=phi,
    )


def classify_geometric(rep: Representation, c: OrientedClass, tol: float = 1e-9) -> None:
    """Raise NonEssentialClass unless c is nontrivial with hyperbolic image."""
    if c.is_trivial:
        raise NonEssentialClass("the constant class has no geodesic")
    m = evaluate(rep, c.word)
    if abs(m.trace) <= 2 + tol:
        raise NonEssentialClass(f"class {c} has non-hyperbolic image (|trace| = {abs(m.trace):.12g})")


def algebraic_intersection_number(rep: Representation, cx: OrientedClass, cy: OrientedClass) -> int:
    form = rep.intersection_form
    if not form:
        raise InputError("representation carries no intersection form")
    vx = abelianize(cx, rep.rank)
    vy = abelianize(cy, rep.rank)
    return sum(vx[i] * form[i][j] * vy[j] for i in range(rep.rank) for j in range(rep.rank))


def _signature(data) -> list:
    return sorted((d.product.word, d.sign) for d in data)


def _stabilize(rep, cfg, cx, cy, build, oracle):
    radius = cfg.radius_for(cx, cy)
    history = []
    for r in range(radius + 1):
        data = build(r)
        history.append(_signature(data))
        w = cfg.stabilization_window
        if len(history) > w and all(h == history[-1] for h in history[-w - 1:]):
            if oracle is None or oracle(data):
                return data
    raise NotStabilized(f"crossings of {cx} and {cy} did not stabilize within radius {radius}")


def intersection_data(
    rep: Representation, cx: OrientedClass, cy: OrientedClass, cfg: EnumerationConfig = DEFAULT_CONFIG
) -> list[CrossingDatum]:
    """One datum per intersection point of the geodesics of cx and cy."""
    classify_geometric(rep, cx, cfg.tol)
    classify_geometric(rep, cy, cfg.tol)
    rx, kx = primitive_root(cx)
    ry, ky = primitive_root(cy)
    if rx == ry or rx == inverse_class(ry):
        raise DegenerateClass(
            f"{cx} and {cy} share a geodesic; use self_intersection_data for one curve"
        )
    return _crossing_data(rep, cx, cy, cfg, self_mode=False)


def coincident_crossing_data(
    rep: Representation, cx: OrientedClass, cy: OrientedClass, cfg: EnumerationConfig = DEFAULT_CONFIG
) -> list[CrossingDatum]:
    """Crossings of pushed-off copies of x and y when they share a geodesic.

    The double cosets <r> g <r> with g outside <r> are the branch pairs at
    the self-crossings of the root r, so each self-crossing appears twice
    (once as g, once as g^-1).  The parallel strands do not cross.
    """
    classify_geometric(rep, cx, cfg.tol)
    classify_geometric(rep, cy, cfg.tol)
    rx, ry = primitive_root(cx)[0], primitive_root(cy)[0]
    if not (rx == ry or rx == inverse_class(ry)):
        raise DegenerateClass(f"{cx} and {cy} do not share a geodesic")
    return _crossing_data(rep, cx, cy, cfg, self_mode=True)


def _crossing_data(rep, cx, cy, cfg, self_mode):
    rx, kx = primitive_root(cx)
    ry, ky = primitive_root(cy)
    scanner = _Scanner(rep, rx.word, ry.word, cfg, self_mode=self_mode)

    def build(r):
        scanner.scan_level(r)
        data = []
        for pos, phi, g, point in scanner.crossings():
            for j in range(kx):
                gj = free_reduce(rx.word * j + g)
                pj = pos + j * scanner.lx
                pt = evaluate(rep, rx.word * j)(point) if j else point
                d = _datum(rep, cx.word, cy.word, pj, phi, gj, pt)
                data.extend([d] * ky)
        data.sort(key=lambda d: (d.position, d.product))
        return data

    oracle = None
    if rep.intersection_form:
        target = algebraic_intersection_number(rep, cx, cy)
        oracle = lambda data: sum(d.sign for d in data) == target  # noqa: E731
    return _stabilize(rep, cfg, cx, cy, build, oracle)


def geometric_intersection_number(rep, cx, cy, cfg: EnumerationConfig = DEFAULT_CONFIG) -> int:
    return len(intersection_data(rep, cx, cy, cfg))


def self_intersection_data(
    rep: Representation, c: OrientedClass, cfg: EnumerationConfig = DEFAULT_CONFIG
) -> list[CrossingDatum]:
    """Transverse self-crossings of the geodesic of c.

    Each self-crossing of the primitive root appears once (the branches g and
    g^-1 are paired); for c = root^k each is repeated k^2 times.  The k - 1
    extra crossings of a perturbed multiple curve are not geodesic crossings
    and are not listed.
    """
    classify_geometric(rep, c, cfg.tol)
    root, k = primitive_root(c)
    scanner = _Scanner(rep, root.word, root.word, cfg, self_mode=True)
    lx = scanner.lx

    def partner_position(g, point):
        z = scanner.ni(evaluate(rep, inverse_word(g))(point))
        s = math.log(abs(z))
        s -= math.floor(s / lx) * lx
        return 0.0 if lx - s < cfg.tol else s

    def build(r):
        scanner.scan_level(r)
        data = []
        for pos, phi, g, point in scanner.crossings():
            s2 = partner_position(g, point)
            gap = abs(pos - s2)
            if min(gap, lx - gap) < cfg.dedup_tol:
                keep = phi > 0
            else:
                keep = pos < s2
            if keep:
                data.extend([_datum(rep, c.word, c.word, pos, phi, g, point)] * (k * k))
        data.sort(key=lambda d: (d.position, d.product))
        return data

    return _stabilize(rep, cfg, c, c, build, None)


def is_simple(rep: Representation, c: OrientedClass, cfg: EnumerationConfig = DEFAULT_CONFIG) -> bool:
    if primitive_root(c)[1] > 1:
        return False
    return not self_intersection_data(rep, c, cfg)


def verify_beardon(rep: Representation, cx: OrientedClass, cy: OrientedClass, d: CrossingDatum) -> float:
    lp = translation_length(evaluate(rep, d.product.word))
    lx = translation_length(evaluate(rep, cx.word))
    ly = translation_length(evaluate(rep, cy.word))
    lhs = math.cosh(lp / 2)
    rhs = math.cosh(lx / 2) * math.cosh(ly / 2) + math.sinh(lx / 2) * math.sinh(ly / 2) * math.cos(d.angle)
    return abs(lhs - rhs)


@dataclass(frozen=True)
class Lift:
    vertices: tuple[complex, ...]
    midpoints: tuple[complex, ...]
    axis: AxisGeo


def _hyperbolic_from_axis(repelling: float, attracting: float, length: float) -> Isometry:
    n = frame_from_endpoints(repelling, attracting)
    e = math.exp(length / 2.0)
    return n @ Isometry(e, 0.0, 0.0, 1.0 / e, rescale=False) @ n.inverse()


def build_lift(rep: Representation, cx: OrientedClass, cy: OrientedClass, d: CrossingDatum, num_pieces: int) -> Lift:
    """Piecewise geodesic P_0, P_1, ... alternating x- and y-pieces.

    P_0 is the crossing point; P_1 = x P_0, P_2 = x y' P_0 with y' the
    conjugate g y g^-1 whose axis passes through P_0, and so on.  The
    midpoints R_i of P_{i-1} P_i lie on the axis of x y'.

    x and y' are rebuilt from their axes (endpoints in the frame of x) and
    translation lengths, so long witnesses never produce large matrix
    entries.  The lift is returned in the frame where the axis of x y' is
    the imaginary axis.
    """
    if num_pieces < 1:
        raise InputError("num_pieces must be positive")
    Xw = evaluate(rep, cx.word)
    Yw = evaluate(rep, cy.word)
    lx, ly = translation_length(Xw), translation_length(Yw)
    ny = frame(Yw)
    m = frame(Xw).inverse() @ evaluate(rep, d.witness)
    u = m(ny(0.0))
    v = m(ny(math.inf))
    X = _hyperbolic_from_axis(0.0, math.inf, lx)
    Yp = _hyperbolic_from_axis(u, v, ly)
    p0 = crossing_point(axis(X), axis(Yp))
    P = X @ Yp
    n = frame(P)
    ni = n.inverse()
    X = ni @ X @ n
    P = ni @ P @ n
    p0 = ni(p0)
    verts = []
    m = Isometry.identity()
    for i in range(num_pieces + 1):
        if i % 2 == 0:
            verts.append(m(p0))
        else:
            verts.append((m @ X)(p0))
            m = m @ P
    mids = tuple(midpoint(verts[i - 1], verts[i]) for i in range(1, len(verts)))
    return Lift(tuple(verts), mids, axis(P))


def lift_checks(rep, cx, cy, d, num_pieces: int = 6) -> dict:
    """Distance, midpoint, axis and length residuals of one zig-zag lift."""
    from loopalg.hyperbolic import distance_to_axis

    lift = build_lift(rep, cx, cy, d, num_pieces)
    lp = lift.axis.length
    R = lift.midpoints
    dist_err = max(abs(hyperbolic_distance(R[t], R[t + 2]) - lp) for t in range(len(R) - 2))
    mid_err = max(hyperbolic_distance(R[t + 1], midpoint(R[t], R[t + 2])) for t in range(len(R) - 2))
    axis_err = max(distance_to_axis(z, lift.axis) for z in R)
    return {"distance": dist_err, "midpoint": mid_err, "axis": axis_err, "length": lp}


__all__ = [
    "CrossingDatum",
    "EnumerationConfig",
    "DEFAULT_CONFIG",
    "Lift",
    "NonHyperbolic",
    "algebraic_intersection_number",
    "build_lift",
    "coincident_crossing_data",
    "geometric_intersection_number",
    "intersection_data",
    "is_simple",
    "lift_checks",
    "self_intersection_data",
    "verify_beardon",
]
