"""Bounded centrality checks for the loop algebras."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from loopalg.goldman import as_engine
from loopalg.hyperbolic import evaluate
from loopalg.intersect import intersection_data, is_simple
from loopalg.poisson import (
    PBWElement,
    PBWRewriter,
    SymPolynomial,
    commutator,
    sk_bracket,
    sym_bracket,
)
from loopalg.words import (
    CONSTANT,
    OrientedClass,
    UnorientedClass,
    enumerate_classes,
    enumerate_unoriented,
    peripheral_power,
    power,
    primitive_root,
    unoriented,
)


class ClassKind(enum.Enum):
    TRIVIAL = "trivial"
    PERIPHERAL = "peripheral"
    ESSENTIAL = "essential"


def classify_class(rep, c) -> ClassKind:
    if isinstance(c, UnorientedClass):
        c = c.rep
    if c.is_trivial:
        return ClassKind.TRIVIAL
    if peripheral_power(c, rep.boundary_classes):
        return ClassKind.PERIPHERAL
    return ClassKind.ESSENTIAL


def probe_set(rep, max_len: int, cfg=None, simple_only: bool = True) -> list[OrientedClass]:
    """Essential primitive simple classes up to max_len, one per inverse pair.

    With ``simple_only=False`` the simplicity filter is dropped; a nonzero
    bracket against any probe still certifies noncentrality.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    eng = as_engine(rep, cfg)
    out = []
    for u in enumerate_unoriented(rep.rank, max_len, include_trivial=False):
        c = u.rep
        if classify_class(rep, c) is not ClassKind.ESSENTIAL:
            continue
        if primitive_root(c)[1] > 1:
            continue
        if not simple_only or is_simple(rep, c, eng.cfg):
            out.append(c)
    return out


@dataclass
class CentralityVerdict:
    status: str
    witness: tuple | None
    probe_bound: tuple[int, int]

    @property
    def central(self) -> bool:
        return self.status == "consistent_with_central"

    def to_dict(self) -> dict:
        w = None
        if self.witness is not None:
            probe, n, br = self.witness
            w = {"probe": str(probe), "power": n, "bracket": br.to_dict()}
        return {"status": self.status, "witness": w, "probe_bound": list(self.probe_bound)}


def _probe_power(x, n):
    if isinstance(x, UnorientedClass):
        return unoriented(power(x.rep, n))
    return power(x, n)


def is_central(rep, P, probes, max_power: int, cfg=None, k=None, unoriented_probes: bool | None = None,
               rewriter: PBWRewriter | None = None) -> CentralityVerdict:
    """Bracket P against probe powers x^n, n <= max_power, in (probe, n) order.

    P may be a SymPolynomial (bracket, or deformed bracket when k is given)
    or a PBWElement (commutator).  Unoriented generators in P select the GW
    reading, in which case probes are reduced to unoriented classes.
    """
    probes = list(probes)
    if not probes:
        raise ValueError("probe set is empty")
    eng = as_engine(rep, cfg)
    gens = {c for m in P.terms for c in m}
    if unoriented_probes is None:
        unoriented_probes = any(isinstance(c, UnorientedClass) for c in gens)
    bound = (max(len(x) for x in probes), max_power)
    if isinstance(P, PBWElement):
        rw = rewriter or PBWRewriter(eng)
    for x in probes:
        if unoriented_probes and isinstance(x, OrientedClass):
            x = unoriented(x)
        for n in range(1, max_power + 1):
            xn = _probe_power(x, n)
            if isinstance(P, PBWElement):
                br = commutator(PBWElement.gen(xn, P.var), P, eng, rewriter=rw)
            elif k is not None:
                br = sk_bracket(eng, SymPolynomial.gen(xn), P, k)
            else:
                br = sym_bracket(eng, SymPolynomial.gen(xn), P)
            if br:
                return CentralityVerdict("certified_noncentral", (x, n, br), bound)
    return CentralityVerdict("consistent_with_central", None, bound)


@dataclass
class SuiteReport:
    surface: str
    bounds: dict
    readings: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    geometric_checks: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "bounds": self.bounds,
            "readings": self.readings,
            "violations": self.violations,
            "geometric_checks": self.geometric_checks,
        }


def _is_hyperbolic_word(rep, c, tol=1e-9) -> bool:
    return abs(evaluate(rep, c.word).trace) > 2 + tol


def center_theorem_suite(rep, max_len: int = 4, max_power: int = 3, cfg=None, periph_len: int | None = None,
                         ks=(0, 1, -1), probe_len: int | None = None, readings=None) -> SuiteReport:
    """Desk-scale check that the center is spanned by trivial and peripheral classes.

    Peripheral and trivial classes up to periph_len must bracket to zero with
    every probe power; essential classes up to max_len must be certified
    noncentral.  Readings: G, GW, S_k for each k, V_h, V_h(GW) and HS (the
    homotopy skein algebra, z in place of h).
    """
    eng = as_engine(rep, cfg)
    periph_len = max_len if periph_len is None else periph_len
    probe_len = max_len if probe_len is None else probe_len
    probes = probe_set(rep, probe_len, eng.cfg)
    probe_kind = "simple"
    if not probes:
        # e.g. pants: no essential simple curves, so fall back to all primitives
        probes = probe_set(rep, probe_len, eng.cfg, simple_only=False)
        probe_kind = "primitive"
    names = ["G", "GW"] + [f"S_{Fraction(k)}" for k in ks] + ["V_h", "V_h(GW)", "HS"]
    if readings is not None:
        names = [n for n in names if n in readings]
    report = SuiteReport(
        surface=rep.label or rep.kind,
        bounds={"max_len": max_len, "periph_len": periph_len, "max_power": max_power,
                "probe_len": probe_len, "probe_kind": probe_kind,
                "probes": [str(p) for p in probes]},
    )
    if not probes:
        report.violations.append({"reading": "*", "class": "*", "reason": "no probes"})
        return report

    classes = enumerate_classes(rep.rank, max(max_len, periph_len))
    central = [c for c in classes if classify_class(rep, c) is not ClassKind.ESSENTIAL and len(c) <= periph_len]
    central_extra = [power(b, n) for b in rep.boundary_classes for n in range(1, max_power + 1)
                     if len(b) * n <= periph_len]
    central = sorted(set(central) | set(central_extra))
    essential = [c for c in classes if classify_class(rep, c) is ClassKind.ESSENTIAL and len(c) <= max_len]
    # polynomial central elements: products of central generators
    central_polys = [SymPolynomial.gen(c) for c in central]
    for b in rep.boundary_classes:
        central_polys.append(SymPolynomial.monomial((b, b)) + SymPolynomial.gen(CONSTANT, 3))

    # geometric check: probe powers miss boundary geodesics of funnels
    for b in rep.boundary_classes:
        if not _is_hyperbolic_word(rep, b, eng.cfg.tol):
            continue
        for x in probes:
            for n in range(1, max_power + 1):
                data = intersection_data(rep, power(x, n), b, eng.cfg)
                report.geometric_checks += 1
                if data:
                    report.violations.append({"reading": "geometry", "class": str(b),
                                              "reason": f"boundary meets {x}^{n}"})

    rw = {"h": PBWRewriter(eng), "z": PBWRewriter(eng)}

    def element(name, c):
        if isinstance(c, SymPolynomial):
            P = c
        else:
            P = SymPolynomial.gen(c)
        if name in ("GW", "V_h(GW)"):
            P = SymPolynomial({tuple(unoriented(g) for g in m): v for m, v in P.terms.items()})
        if name.startswith("V_h"):
            return PBWElement.from_sym(P, "h"), None
        if name == "HS":
            return PBWElement.from_sym(P, "z"), None
        if name.startswith("S_"):
            return P, Fraction(name[2:])
        return P, None

    for name in names:
        stats = {"central_checked": 0, "noncentral_certified": 0, "violations": 0}
        rewriter = rw["z"] if name == "HS" else rw["h"]
        if name == "V_h(GW)":
            rewriter = PBWRewriter(eng)
        for c in central_polys:
            P, k = element(name, c)
            v = is_central(eng, P, probes, max_power, k=k, rewriter=rewriter)
            stats["central_checked"] += 1
            if not v.central:
                stats["violations"] += 1
                report.violations.append({"reading": name, "class": repr(c), "reason": "central class failed",
                                          "witness": v.to_dict()["witness"]})
        seen = set()
        for c in essential:
            if name in ("GW", "V_h(GW)"):
                u = unoriented(c)
                if u in seen:
                    continue
                seen.add(u)
            P, k = element(name, c)
            v = is_central(eng, P, probes, max_power, k=k, rewriter=rewriter)
            if v.central:
                stats["violations"] += 1
                report.violations.append({"reading": name, "class": str(c), "reason": "no witness within bounds"})
            else:
                stats["noncentral_certified"] += 1
        report.readings[name] = stats
    return report


__all__ = [
    "CentralityVerdict",
    "ClassKind",
    "SuiteReport",
    "center_theorem_suite",
    "classify_class",
    "is_central",
    "probe_set",
]
