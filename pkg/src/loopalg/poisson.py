"""Poisson and enveloping algebras built on the loop brackets.

Generators are classes (oriented for S(G), unoriented for S(GW)).  The
constant class is a generator like any other; the empty monomial is the
scalar unit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from loopalg.goldman import LinComb, as_engine
from loopalg.words import OrientedClass, UnorientedClass, format_word, word_key

Monomial = tuple


def _mono_key(m: Monomial):
    return (len(m), tuple(word_key(c.word) for c in m), tuple(isinstance(c, UnorientedClass) for c in m))


def _mono_text(m: Monomial) -> str:
    return "".join(f"({format_word(c.word)})" for c in m)


def _coeff_text(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class SymPolynomial:
    """Commutative polynomial in classes; monomials are sorted tuples."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out: dict[Monomial, Fraction] = {}
        for m, v in (terms or {}).items():
            m = tuple(sorted(m))
            out[m] = out.get(m, Fraction(0)) + Fraction(v)
        self.terms = {m: v for m, v in out.items() if v}

    @classmethod
    def scalar(cls, v=1):
        return cls({(): v})

    @classmethod
    def gen(cls, c, v=1):
        return cls({(c,): v})

    @classmethod
    def monomial(cls, classes: Iterable, v=1):
        return cls({tuple(classes): v})

    @classmethod
    def from_lincomb(cls, p: LinComb):
        return cls({(c,): v for c, v in p.terms.items()})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, SymPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for m, v in other.terms.items():
            out[m] = out.get(m, 0) + v
        return SymPolynomial(out)

    def __neg__(self):
        return SymPolynomial({m: -v for m, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return SymPolynomial({m: v * k for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SymPolynomial):
            return self.scale(other)
        out: dict = {}
        for m1, v1 in self.terms.items():
            for m2, v2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, 0) + v1 * v2
        return SymPolynomial(out)

    def __rmul__(self, k):
        return self.scale(k)

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def coefficient(self, m) -> Fraction:
        return self.terms.get(tuple(sorted(m)), Fraction(0))

    def generators(self) -> set:
        return {c for m in self.terms for c in m}

    def to_dict(self) -> dict[str, str]:
        return {_mono_text(m) or "1": _coeff_text(v) for m, v in self.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{_coeff_text(v)}*{_mono_text(m) or '1'}" for m, v in self.items())


@dataclass(frozen=True)
class DeformParam:
    k: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "k", Fraction(self.k))


def _as_k(k) -> Fraction:
    if isinstance(k, DeformParam):
        return k.k
    return Fraction(k or 0)


def generator_bracket(eng, x, y, k=Fraction(0)) -> SymPolynomial:
    """[x, y]_k for two generators, as a polynomial of degree <= 2."""
    if isinstance(x, UnorientedClass) != isinstance(y, UnorientedClass):
        raise TypeError("cannot bracket oriented with unoriented classes")
    if isinstance(x, UnorientedClass):
        if k:
            raise ValueError("the deformed bracket is defined on oriented classes only")
        return SymPolynomial.from_lincomb(eng.gw(x, y))
    br = eng.bracket(x, y)
    out = SymPolynomial.from_lincomb(br)
    if k:
        # the signed crossing count is the homological pairing
        pairing = sum(br.terms.values())
        if pairing:
            out = out - SymPolynomial.monomial((x, y), k * pairing)
    return out


def _leibniz(eng, P: SymPolynomial, Q: SymPolynomial, k) -> SymPolynomial:
    cache: dict = {}
    out: dict = {}
    for m1, v1 in P.terms.items():
        for m2, v2 in Q.terms.items():
            for i, x in enumerate(m1):
                rest1 = m1[:i] + m1[i + 1:]
                for j, y in enumerate(m2):
                    key = (x, y)
                    if key not in cache:
                        cache[key] = generator_bracket(eng, x, y, k)
                    gb = cache[key]
                    if not gb:
                        continue
                    rest = rest1 + m2[:j] + m2[j + 1:]
                    for m, v in gb.terms.items():
                        mm = tuple(sorted(rest + m))
                        out[mm] = out.get(mm, 0) + v * v1 * v2
    return SymPolynomial(out)


def sym_bracket(rep, P: SymPolynomial, Q: SymPolynomial, cfg=None) -> SymPolynomial:
    """Leibniz extension of the Goldman (or GW, for unoriented classes) bracket."""
    return _leibniz(as_engine(rep, cfg), P, Q, Fraction(0))


def sk_bracket(rep, P: SymPolynomial, Q: SymPolynomial, k, cfg=None) -> SymPolynomial:
    """Deformed bracket: on generators [x,y] - k (x.y) xy, extended by Leibniz."""
    return _leibniz(as_engine(rep, cfg), P, Q, _as_k(k))


# --- polynomials in h ---------------------------------------------------


class HPoly:
    """Dense polynomial in one variable with Fraction coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def const(cls, v):
        return cls((v,))

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return isinstance(other, HPoly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        n = max(len(self.c), len(other.c))
        a = self.c + (Fraction(0),) * (n - len(self.c))
        b = other.c + (Fraction(0),) * (n - len(other.c))
        return HPoly([x + y for x, y in zip(a, b)])

    def __neg__(self):
        return HPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, HPoly):
            return HPoly([x * other for x in self.c])
        if not self.c or not other.c:
            return HPoly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            for j, y in enumerate(other.c):
                out[i + j] += x * y
        return HPoly(out)

    __rmul__ = __mul__

    def shift(self, n: int = 1) -> "HPoly":
        return HPoly((Fraction(0),) * n + self.c) if self.c else HPoly()

    def __call__(self, value) -> Fraction:
        value = Fraction(value)
        acc = Fraction(0)
        for x in reversed(self.c):
            acc = acc * value + x
        return acc

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def text(self, var: str = "h") -> str:
        if not self.c:
            return "0"
        parts = []
        for i, x in enumerate(self.c):
            if not x:
                continue
            s = _coeff_text(x)
            parts.append(s if i == 0 else f"{s}*{var}" if i == 1 else f"{s}*{var}^{i}")
        return " + ".join(parts)

    def __repr__(self):
        return f"HPoly({self.text()})"


class PBWElement:
    """Element of V_h in the PBW basis of nondecreasing tuples of generators."""

    __slots__ = ("terms", "var")

    def __init__(self, terms=None, var: str = "h"):
        out: dict[Monomial, HPoly] = {}
        for m, p in (terms or {}).items():
            m = tuple(m)
            if any(m[i] > m[i + 1] for i in range(len(m) - 1)):
                raise ValueError("PBW tuples must be nondecreasing")
            if not isinstance(p, HPoly):
                p = HPoly.const(p)
            out[m] = out[m] + p if m in out else p
        self.terms = {m: p for m, p in out.items() if p}
        self.var = var

    @classmethod
    def unit(cls, var="h"):
        return cls({(): HPoly.const(1)}, var)

    @classmethod
    def gen(cls, c, var="h"):
        return cls({(c,): HPoly.const(1)}, var)

    @classmethod
    def from_sym(cls, P: SymPolynomial, var="h"):
        return cls({m: HPoly.const(v) for m, v in P.terms.items()}, var)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, PBWElement) and self.terms == other.terms and self.var == other.var

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.var))

    def _combine(self, other, sign):
        if other.var != self.var:
            raise ValueError("mixing elements in different deformation variables")
        out = dict(self.terms)
        for m, p in other.terms.items():
            q = p if sign > 0 else -p
            out[m] = out[m] + q if m in out else q
        return PBWElement(out, self.var)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return PBWElement({m: -p for m, p in self.terms.items()}, self.var)

    def scale(self, p):
        if not isinstance(p, HPoly):
            p = HPoly.const(p)
        return PBWElement({m: q * p for m, q in self.terms.items()}, self.var)

    def rename(self, var: str) -> "PBWElement":
        return PBWElement(self.terms, var)

    def to_dict(self) -> dict[str, str]:
        return {_mono_text(m) or "1": p.text(self.var) for m, p in self.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"[{p.text(self.var)}]*{_mono_text(m) or '1'}" for m, p in self.items())


def _pick_pair(t: Monomial, strategy: str, rng) -> int:
    bad = [i for i in range(len(t) - 1) if t[i] > t[i + 1]]
    if not bad:
        return -1
    if strategy == "leftmost":
        return bad[0]
    if strategy == "rightmost":
        return bad[-1]
    if strategy == "random":
        return rng.choice(bad)
    raise ValueError(f"unknown rewrite strategy {strategy!r}")


class PBWRewriter:
    """Normal ordering by u v -> v u + h [u, v] for adjacent u > v.

    Normal forms of tuples are memoized for the deterministic strategies;
    the random one recomputes so that distinct rewrite orders really run.
    """

    def __init__(self, rep, cfg=None, strategy: str = "leftmost", seed: int | None = None):
        self.eng = as_engine(rep, cfg)
        self.strategy = strategy
        self.rng = random.Random(seed)
        self._nf: dict[Monomial, dict] = {}
        self._br: dict = {}

    def bracket(self, u, v) -> dict:
        key = (u, v)
        if key not in self._br:
            gb = generator_bracket(self.eng, u, v)
            self._br[key] = {m[0]: c for m, c in gb.terms.items()}
        return self._br[key]

    def normal_form(self, t: Monomial) -> dict:
        memo = self.strategy != "random"
        if memo and t in self._nf:
            return self._nf[t]
        i = _pick_pair(t, self.strategy, self.rng)
        if i < 0:
            out = {t: HPoly.const(1)}
        else:
            u, v = t[i], t[i + 1]
            out = dict(self.normal_form(t[:i] + (v, u) + t[i + 2:]))
            for w, c in self.bracket(u, v).items():
                for m, p in self.normal_form(t[:i] + (w,) + t[i + 2:]).items():
                    q = p.shift(1) * c
                    out[m] = out[m] + q if m in out else q
            out = {m: p for m, p in out.items() if p}
        if memo:
            self._nf[t] = out
        return out


def pbw_normalize(rep, word: Sequence, cfg=None, strategy: str = "leftmost", seed: int | None = None,
                  var: str = "h") -> PBWElement:
    rw = PBWRewriter(rep, cfg, strategy, seed)
    return PBWElement(rw.normal_form(tuple(word)), var)


def vh_multiply(E1: PBWElement, E2: PBWElement, rep, cfg=None, rewriter: PBWRewriter | None = None) -> PBWElement:
    if E1.var != E2.var:
        raise ValueError("mixing elements in different deformation variables")
    rw = rewriter or PBWRewriter(rep, cfg)
    out: dict = {}
    for m1, p1 in E1.terms.items():
        for m2, p2 in E2.terms.items():
            p = p1 * p2
            for m, q in rw.normal_form(m1 + m2).items():
                r = q * p
                out[m] = out[m] + r if m in out else r
    return PBWElement(out, E1.var)


def commutator(E1: PBWElement, E2: PBWElement, rep, cfg=None, rewriter: PBWRewriter | None = None) -> PBWElement:
    rw = rewriter or PBWRewriter(rep, cfg)
    return vh_multiply(E1, E2, rep, cfg, rw) - vh_multiply(E2, E1, rep, cfg, rw)


def specialize(E: PBWElement, value) -> SymPolynomial:
    """Evaluate the deformation variable.

    At 0 this is the commutative product in S(G); at 1 the coefficients are
    those of the PBW basis of U(G).
    """
    return SymPolynomial({m: p(value) for m, p in E.terms.items()})


def hs_stacking(rep, L1: SymPolynomial, L2: SymPolynomial, cfg=None) -> PBWElement:
    """Stack L1 over L2 in the homotopy skein algebra, with variable z.

    A monomial is the link whose components are its classes; generic
    links are identified with PBW basis elements and stacking with the
    product of V_z.  Unoriented classes give the Kauffman-type reading.
    """
    rw = PBWRewriter(rep, cfg)
    E1 = PBWElement.from_sym(L1, "z")
    E2 = PBWElement.from_sym(L2, "z")
    return vh_multiply(E1, E2, rep, cfg, rw)


__all__ = [
    "DeformParam",
    "HPoly",
    "PBWElement",
    "PBWRewriter",
    "SymPolynomial",
    "commutator",
    "generator_bracket",
    "hs_stacking",
    "pbw_normalize",
    "sk_bracket",
    "specialize",
    "sym_bracket",
    "vh_multiply",
]
