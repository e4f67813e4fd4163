"""Verification suites shared by the CLI and the acceptance tests.

Each suite returns a JSON-ready dict with an ``ok`` flag.
"""

from __future__ import annotations

import random
from fractions import Fraction

from loopalg.center import center_theorem_suite
from loopalg.errors import NotLinked
from loopalg.goldman import as_engine
from loopalg.hyperbolic import TwistFamily, evaluate, is_hyperbolic, translation_length
from loopalg.intersect import (
    algebraic_intersection_number,
    intersection_data,
    lift_checks,
    verify_beardon,
)
from loopalg.poisson import (
    HPoly,
    PBWElement,
    PBWRewriter,
    SymPolynomial,
    commutator,
    hs_stacking,
    pbw_normalize,
    sk_bracket,
    specialize,
    vh_multiply,
)
from loopalg.words import (
    OrientedClass,
    enumerate_classes,
    equal_or_inverse_roots,
)


def essential_classes(rep, max_len: int, tol: float = 1e-9) -> list[OrientedClass]:
    """Nontrivial classes up to max_len with hyperbolic image."""
    return [c for c in enumerate_classes(rep.rank, max_len, include_trivial=False)
            if is_hyperbolic(evaluate(rep, c.word), tol)]


def crossing_pairs(rep, max_len: int, tol: float = 1e-9):
    cls = essential_classes(rep, max_len, tol)
    for i, x in enumerate(cls):
        for y in cls[i:]:
            if not equal_or_inverse_roots(x, y):
                yield x, y


def suite_beardon(rep, max_len: int = 4, cfg=None, threshold: float = 1e-8) -> dict:
    """Cosh identity on every crossing, plus the homological count check."""
    eng = as_engine(rep, cfg)
    worst, crossings, pairs, count_fail = 0.0, 0, 0, []
    for x, y in crossing_pairs(rep, max_len, eng.cfg.tol):
        data = intersection_data(rep, x, y, eng.cfg)
        pairs += 1
        for d in data:
            worst = max(worst, verify_beardon(rep, x, y, d))
            crossings += 1
        signed = sum(d.sign for d in data)
        if rep.intersection_form:
            expected = algebraic_intersection_number(rep, x, y)
        elif rep.kind == "pants":
            expected = 0
        else:
            expected = signed
        if signed != expected:
            count_fail.append([str(x), str(y), signed, expected])
    return {
        "suite": "beardon",
        "pairs": pairs,
        "crossings": crossings,
        "max_residual": worst,
        "threshold": threshold,
        "count_mismatches": count_fail,
        "ok": worst < threshold and not count_fail,
    }


def sample_crossings(rep, max_len: int, count: int, seed: int, cfg=None):
    eng = as_engine(rep, cfg)
    pool = []
    for x, y in crossing_pairs(rep, max_len, eng.cfg.tol):
        for d in intersection_data(rep, x, y, eng.cfg):
            pool.append((x, y, d))
    rng = random.Random(seed)
    if len(pool) > count:
        pool = rng.sample(pool, count)
    return pool


def suite_zigzag(rep, max_len: int = 3, count: int = 20, seed: int = 0, pieces: int = 6, cfg=None,
                 threshold: float = 1e-8) -> dict:
    rows = []
    worst = {"distance": 0.0, "midpoint": 0.0, "axis": 0.0}
    for x, y, d in sample_crossings(rep, max_len, count, seed, cfg):
        res = lift_checks(rep, x, y, d, pieces)
        lp = translation_length(evaluate(rep, d.product.word))
        res["length_error"] = abs(res["length"] - lp)
        for key in worst:
            worst[key] = max(worst[key], res[key])
        worst["length_error"] = max(worst.get("length_error", 0.0), res["length_error"])
        rows.append({"x": str(x), "y": str(y), "product": str(d.product), **res})
    ok = bool(rows) and all(v < threshold for v in worst.values())
    return {"suite": "zigzag", "samples": len(rows), "worst": worst, "threshold": threshold, "rows": rows, "ok": ok}


def twist_series(rep, curve: OrientedClass, other: OrientedClass, ts, cfg=None) -> list[dict]:
    """Angle and lengths along a left twist; one row per t.

    The tracked crossing is the one nearest the previous row's position,
    which is unambiguous when the curves meet once.
    """
    fam = TwistFamily(rep, curve)
    eng = as_engine(rep, cfg)
    rows = []
    prev = None
    for t in ts:
        r = fam(t)
        data = intersection_data(r, curve, other, eng.cfg)
        if not data:
            raise NotLinked(f"{curve} and {other} do not cross")
        d = data[0] if prev is None else min(data, key=lambda e: abs(e.position - prev))
        prev = d.position
        rows.append({
            "t": t,
            "theta": d.angle,
            "sign": d.sign,
            "l_y": translation_length(evaluate(r, other.word)),
            "l_xy": translation_length(evaluate(r, d.product.word)),
            "trace_x": evaluate(r, curve.word).trace,
        })
    return rows


def linspace(lo: float, hi: float, steps: int) -> list[float]:
    if steps < 2:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def suite_twist(rep, curve: OrientedClass, other: OrientedClass | None = None, steps: int = 11,
                t_min: float = -2.0, t_max: float = 2.0, cfg=None, trace_tol: float = 1e-12) -> dict:
    """Monotone angle under a left twist: up at positive crossings, down at negative."""
    if other is None:
        g = TwistFamily(rep, curve).generator
        other = OrientedClass((g,))
    rows = twist_series(rep, curve, other, linspace(t_min, t_max, steps), cfg)
    thetas = [r["theta"] for r in rows]
    sign = rows[0]["sign"]
    diffs = [b - a for a, b in zip(thetas, thetas[1:])]
    monotone = all(d > 0 for d in diffs) if sign > 0 else all(d < 0 for d in diffs)
    tr0 = rows[0]["trace_x"]
    drift = max(abs(r["trace_x"] - tr0) for r in rows)
    return {
        "suite": "twist",
        "curve": str(curve),
        "other": str(other),
        "sign": sign,
        "direction": "increasing" if sign > 0 else "decreasing",
        "monotone": monotone,
        "trace_drift": drift,
        "rows": rows,
        "ok": monotone and drift < trace_tol,
    }


def _sample_triples(classes, count, rng):
    return [tuple(rng.choice(classes) for _ in range(3)) for _ in range(count)]


def jacobi_residual(eng, x, y, z, k) -> SymPolynomial:
    X, Y, Z = (SymPolynomial.gen(c) for c in (x, y, z))

    def br(P, Q):
        return sk_bracket(eng, P, Q, k)

    return br(X, br(Y, Z)) + br(Y, br(Z, X)) + br(Z, br(X, Y))


def suite_jacobi_k(rep, max_len: int = 4, count: int = 30, ks=(0, 1, 2, -1), seed: int = 0, cfg=None) -> dict:
    eng = as_engine(rep, cfg)
    classes = enumerate_classes(rep.rank, max_len, include_trivial=False)
    rng = random.Random(seed)
    triples = _sample_triples(classes, count, rng)
    failures = []
    for k in ks:
        for x, y, z in triples:
            if jacobi_residual(eng, x, y, z, Fraction(k)):
                failures.append([str(k), str(x), str(y), str(z)])
    return {"suite": "jacobi-k", "triples": len(triples), "ks": [str(Fraction(k)) for k in ks],
            "failures": failures, "ok": not failures}


def random_class_word(classes, rng, max_factors: int = 4):
    n = rng.randint(1, max_factors)
    return tuple(rng.choice(classes) for _ in range(n))


def suite_pbw(rep, count: int = 100, class_len: int = 3, max_factors: int = 4, seed: int = 0, cfg=None) -> dict:
    eng = as_engine(rep, cfg)
    classes = enumerate_classes(rep.rank, class_len)
    rng = random.Random(seed)
    confluence_fail, h0_fail, comm_fail = [], [], []
    rw = PBWRewriter(eng)
    for i in range(count):
        w = random_class_word(classes, rng, max_factors)
        left = pbw_normalize(eng, w, strategy="leftmost")
        right = pbw_normalize(eng, w, strategy="rightmost")
        rand = pbw_normalize(eng, w, strategy="random", seed=seed * 7919 + i)
        if not (left == right == rand):
            confluence_fail.append([str(c) for c in w])
        # h -> 0 is the commutative product
        split = rng.randint(0, len(w))
        E1 = pbw_normalize(eng, w[:split])
        E2 = pbw_normalize(eng, w[split:])
        prod = specialize(vh_multiply(E1, E2, eng, rewriter=rw), 0)
        if prod != specialize(E1, 0) * specialize(E2, 0):
            h0_fail.append([str(c) for c in w])
    for x in classes:
        for y in classes[:12]:
            lhs = commutator(PBWElement.gen(x), PBWElement.gen(y), eng, rewriter=rw)
            br = eng.bracket(x, y)
            rhs = PBWElement({(c,): v for c, v in br.terms.items()}).scale(_H)
            if lhs != rhs:
                comm_fail.append([str(x), str(y)])
    return {
        "suite": "pbw",
        "inputs": count,
        "confluence_failures": confluence_fail,
        "h0_failures": h0_fail,
        "commutator_failures": comm_fail,
        "ok": not (confluence_fail or h0_fail or comm_fail),
    }




def suite_skein(rep, class_len: int = 2, cfg=None) -> dict:
    """Homotopy skein readings: unit, disjoint stacking and crossing change."""
    eng = as_engine(rep, cfg)
    classes = enumerate_classes(rep.rank, class_len)
    unit = SymPolynomial.scalar(1)
    fails = []
    for x in classes:
        L = SymPolynomial.gen(x)
        E = PBWElement.from_sym(L, "z")
        if hs_stacking(eng, unit, L) != E or hs_stacking(eng, L, unit) != E:
            fails.append(["unit", str(x)])
        for y in classes:
            up = hs_stacking(eng, SymPolynomial.gen(x), SymPolynomial.gen(y))
            down = hs_stacking(eng, SymPolynomial.gen(y), SymPolynomial.gen(x))
            br = eng.bracket(x, y)
            expected = PBWElement({(c,): v for c, v in br.terms.items()}, "z").scale(_H)
            if up - down != expected:
                fails.append(["crossing-change", str(x), str(y)])
            if not br and up != PBWElement.from_sym(SymPolynomial.monomial((x, y)), "z"):
                fails.append(["disjoint", str(x), str(y)])
    return {"suite": "skein", "classes": len(classes), "failures": fails, "ok": not fails}


def suite_center(rep, max_len: int = 4, max_power: int = 3, periph_len: int | None = None, cfg=None,
                 ks=(0, 1, -1)) -> dict:
    report = center_theorem_suite(rep, max_len, max_power, cfg, periph_len=periph_len, ks=ks)
    out = report.to_dict()
    out["suite"] = "center"
    out["ok"] = report.ok
    return out


_H = HPoly((0, 1))

SUITES = ("beardon", "zigzag", "twist", "jacobi-k", "pbw", "center", "skein")

__all__ = [
    "SUITES",
    "crossing_pairs",
    "essential_classes",
    "jacobi_residual",
    "linspace",
    "sample_crossings",
    "suite_beardon",
    "suite_center",
    "suite_jacobi_k",
    "suite_pbw",
    "suite_skein",
    "suite_twist",
    "suite_zigzag",
    "twist_series",
]
