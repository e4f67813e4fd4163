"""Command-line front end.

    loopalg bracket --surface holed-torus:3,3,4 a b
    loopalg center-check --surface modular "1*(abAB)"
    loopalg verify beardon --surface modular
    loopalg twist-scan --surface holed-torus:3,3,4 --curve a --steps 11

JSON reports carry ``"schema": 1``; scan series are CSV.  Exit codes: 0 ok,
1 a verification found a violation, 2 bad input, 3 engine failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from loopalg.center import classify_class, is_central, probe_set
from loopalg.errors import EngineError, InputError, InvalidCharacter, ParseError
from loopalg.goldman import engine_for
from loopalg.hyperbolic import SCHEMA, Representation, parse_surface
from loopalg.intersect import EnumerationConfig
from loopalg.poisson import PBWElement, SymPolynomial
from loopalg import verify
from loopalg.words import OrientedClass, canonical_class, parse_word, unoriented

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_ENGINE = 0, 1, 2, 3


# --- loop expressions ---------------------------------------------------

class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a number", start + 1)
        return int(self.text[start:self.pos])


def parse_loop_expr(text: str, rank: int | None = None, unoriented_classes: bool = False) -> SymPolynomial:
    """Parse ``3*(ab)(ab) + 1/2*(aB) - 2*()``; a bare coefficient is a scalar.

    Grammar (LL(1)):
        expr    := sign? term (sign term)*
        term    := coeff ('*' classes)? | classes
        coeff   := INT ('/' INT)?
        classes := '(' letters ')' ...
    """
    lx = _Lexer(text)
    out = SymPolynomial()
    first = True
    while True:
        ch = lx.peek()
        sign = 1
        if ch and ch in "+-":
            sign = -1 if ch == "-" else 1
            lx.pos += 1
        elif not first:
            if ch == "":
                break
            raise ParseError(f"expected '+' or '-', found {ch!r}", lx.pos + 1)
        elif ch == "":
            raise ParseError("empty expression", lx.pos + 1)
        first = False
        coeff = Fraction(1)
        ch = lx.peek()
        if ch.isdigit():
            num = lx.integer()
            den = 1
            if lx.peek() == "/":
                lx.pos += 1
                den = lx.integer()
                if den == 0:
                    raise ParseError("zero denominator", lx.pos + 1)
            coeff = Fraction(num, den)
            if lx.peek() == "*":
                lx.pos += 1
                if lx.peek() != "(":
                    raise ParseError("expected a class after '*'", lx.pos + 1)
            elif lx.peek() not in ("", "+", "-"):
                raise ParseError(f"expected '*', found {lx.peek()!r}", lx.pos + 1)
        elif ch != "(":
            raise ParseError(f"unexpected {ch!r}" if ch else "unexpected end of input", lx.pos + 1)
        classes = []
        while lx.peek() == "(":
            lx.pos += 1
            start = lx.pos
            while lx.pos < len(text) and text[lx.pos] != ")":
                lx.pos += 1
            if lx.pos >= len(text):
                raise ParseError("unclosed '('", start)
            body = text[start:lx.pos]
            try:
                w = parse_word(body, rank)
            except InvalidCharacter as exc:
                raise InvalidCharacter(start + exc.position, exc.char) from None
            lx.pos += 1
            c = canonical_class(w)
            classes.append(unoriented(c) if unoriented_classes else c)
        out = out + SymPolynomial.monomial(classes, sign * coeff)
    return out


# --- surfaces and configs -----------------------------------------------

def load_surface(spec: str) -> Representation:
    path = Path(spec)
    if spec.endswith(".json") or path.is_file():
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read surface file {spec!r}: {exc}") from exc
        try:
            return Representation.from_json(text)
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"bad surface file {spec!r}: {exc}") from exc
    return parse_surface(spec)


def thread_cap() -> int:
    """LOOPALG_THREADS, validated; the engine itself runs on one thread."""
    raw = os.environ.get("LOOPALG_THREADS", "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"LOOPALG_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError("LOOPALG_THREADS must be a positive integer")
    return n


def make_config(args) -> EnumerationConfig:
    if args.radius is not None and args.radius < 0:
        raise InputError("radius must be nonnegative")
    if args.tol <= 0:
        raise InputError("tolerance must be positive")
    return EnumerationConfig(radius=args.radius, tol=args.tol)


def _class_arg(text: str, rank: int) -> OrientedClass:
    return canonical_class(parse_word(text, rank))


# --- commands ------------------------------------------------------------

def cmd_bracket(args, rep, cfg) -> tuple[dict, int]:
    x = _class_arg(args.x, rep.rank)
    y = _class_arg(args.y, rep.rank)
    eng = engine_for(rep, cfg)
    report = {"command": "bracket", "surface": args.surface, "x": str(x), "y": str(y)}
    if args.unoriented:
        ux, uy = unoriented(x), unoriented(y)
        report.update(x=str(ux), y=str(uy), unoriented=True, terms=eng.gw(ux, uy).to_dict())
        return report, EXIT_OK
    br = eng.bracket(x, y)
    crossings = []
    if not (eng.is_inert(x) or eng.is_inert(y) or x == y):
        data = eng.crossings(x, y)
        crossings = [{"sign": d.sign, "angle": d.angle, "product": str(d.product), "position": d.position}
                     for d in data]
    report.update(terms=br.to_dict(), crossings=crossings)
    return report, EXIT_OK


def cmd_center_check(args, rep, cfg) -> tuple[dict, int]:
    P = parse_loop_expr(args.expr, rep.rank, unoriented_classes=args.unoriented)
    eng = engine_for(rep, cfg)
    probes = probe_set(rep, args.max_len, cfg)
    probe_kind = "simple"
    if not probes:
        probes = probe_set(rep, args.max_len, cfg, simple_only=False)
        probe_kind = "primitive"
    if not probes:
        raise InputError("no probes of the requested length on this surface")
    try:
        k = Fraction(args.k) if args.k is not None else None
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad deformation parameter {args.k!r}") from None
    target = PBWElement.from_sym(P) if args.vh else P
    if args.vh and k is not None:
        raise InputError("--k and --vh are exclusive")
    if args.unoriented and k is not None:
        raise InputError("the deformed bracket needs oriented classes")
    verdict = is_central(eng, target, probes, args.max_power, k=k)
    kinds = {}
    for c in sorted(P.generators()):
        kinds[str(c)] = classify_class(rep, c).value
    report = {
        "command": "center-check",
        "surface": args.surface,
        "expr": P.to_dict(),
        "reading": "V_h" if args.vh else (f"S_{k}" if k is not None else ("GW" if args.unoriented else "G")),
        "probe_kind": probe_kind,
        "probes": [str(p) for p in probes],
        "generator_kinds": kinds,
        **verdict.to_dict(),
    }
    return report, EXIT_OK


def _twist_classes(args, rep):
    curve = _class_arg(args.curve, rep.rank)
    other = _class_arg(args.other, rep.rank) if args.other else None
    return curve, other


def cmd_verify(args, rep, cfg) -> tuple[dict, int]:
    name = args.suite
    if name == "beardon":
        out = verify.suite_beardon(rep, args.max_len or 4, cfg)
    elif name == "zigzag":
        out = verify.suite_zigzag(rep, args.max_len or 3, args.count or 20, args.seed, cfg=cfg)
    elif name == "twist":
        curve, other = _twist_classes(args, rep)
        out = verify.suite_twist(rep, curve, other, args.steps, args.t_min, args.t_max, cfg)
    elif name == "jacobi-k":
        out = verify.suite_jacobi_k(rep, args.max_len or 4, args.count or 30, seed=args.seed, cfg=cfg)
    elif name == "pbw":
        out = verify.suite_pbw(rep, args.count or 100, args.max_len or 3, seed=args.seed, cfg=cfg)
    elif name == "center":
        out = verify.suite_center(rep, args.max_len or 4, args.max_power, args.periph_len, cfg)
    elif name == "skein":
        out = verify.suite_skein(rep, args.max_len or 2, cfg)
    else:  # argparse restricts choices
        raise InputError(f"unknown suite {name!r}")
    out = {"command": "verify", "surface": args.surface, **out}
    return out, EXIT_OK if out["ok"] else EXIT_VIOLATION


def cmd_twist_scan(args, rep, cfg) -> tuple[dict, int]:
    curve, other = _twist_classes(args, rep)
    if other is None:
        from loopalg.hyperbolic import TwistFamily

        other = OrientedClass((TwistFamily(rep, curve).generator,))
    rows = verify.twist_series(rep, curve, other, verify.linspace(args.t_min, args.t_max, args.steps), cfg)
    return {"command": "twist-scan", "surface": args.surface, "curve": str(curve), "other": str(other),
            "rows": rows}, EXIT_OK


def cmd_surface(args, rep, cfg) -> tuple[dict, int]:
    return {"command": "surface", "representation": rep.to_dict()}, EXIT_OK


CSV_FIELDS = ("t", "theta", "l_y", "l_xy", "trace_x")


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([repr(float(r[f])) for f in CSV_FIELDS])
    return buf.getvalue()


def render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        if "rows" not in report:
            raise InputError("this command has no CSV form")
        return to_csv(report["rows"])
    return json.dumps({"schema": SCHEMA, **report}, indent=2, sort_keys=True) + "\n"


# --- argument parsing ---------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--surface", default="holed-torus:3,3,4",
                        help="modular, holed-torus:x,y,z, pants:l1,l2,l3 or a JSON file")
    common.add_argument("--radius", type=int, default=None, help="enumeration radius cap")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    common.add_argument("--timings", action="store_true", help="add wall-clock timings to JSON reports")

    p = argparse.ArgumentParser(prog="loopalg", description="Loop brackets and their centers on hyperbolic surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bracket", parents=[common], help="Goldman (or GW) bracket of two classes")
    b.add_argument("x")
    b.add_argument("y")
    b.add_argument("--unoriented", action="store_true", help="use the GW bracket")

    c = sub.add_parser("center-check", parents=[common], help="bounded centrality test of a loop polynomial")
    c.add_argument("expr")
    c.add_argument("--max-len", type=int, default=3, help="maximum probe length")
    c.add_argument("--max-power", type=int, default=3)
    c.add_argument("--k", default=None, help="deformation parameter (rational)")
    c.add_argument("--vh", action="store_true", help="test commutators in V_h")
    c.add_argument("--unoriented", action="store_true", help="read classes as unoriented (GW)")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=verify.SUITES)
    v.add_argument("--max-len", type=int, default=None)
    v.add_argument("--max-power", type=int, default=3)
    v.add_argument("--periph-len", type=int, default=None)
    v.add_argument("--count", type=int, default=None)
    v.add_argument("--curve", default="a")
    v.add_argument("--other", default=None)
    v.add_argument("--steps", type=int, default=11)
    v.add_argument("--t-min", type=float, default=-2.0)
    v.add_argument("--t-max", type=float, default=2.0)
    v.add_argument("--format", choices=("json", "csv"), default=None,
                   help="report format (twist defaults to csv)")

    t = sub.add_parser("twist-scan", parents=[common], help="angle and length series along a left twist")
    t.add_argument("--curve", default="a")
    t.add_argument("--other", default=None)
    t.add_argument("--steps", type=int, default=11)
    t.add_argument("--t-min", type=float, default=-2.0)
    t.add_argument("--t-max", type=float, default=2.0)
    t.add_argument("--format", choices=("json", "csv"), default="csv")

    sub.add_parser("surface", parents=[common], help="print the surface as JSON")
    return p


COMMANDS = {
    "bracket": cmd_bracket,
    "center-check": cmd_center_check,
    "verify": cmd_verify,
    "twist-scan": cmd_twist_scan,
    "surface": cmd_surface,
}


def _check_bounds(args):
    for name in ("max_len", "max_power", "count", "steps", "periph_len"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise InputError(f"--{name.replace('_', '-')} must be positive")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        thread_cap()
        _check_bounds(args)
        rep = load_surface(args.surface)
        cfg = make_config(args)
        report, code = COMMANDS[args.command](args, rep, cfg)
        fmt = getattr(args, "format", None) or "json"
        if args.command == "verify" and getattr(args, "format", None) is None:
            fmt = "csv" if args.suite == "twist" else "json"
        if args.timings and fmt == "json":
            report["timings"] = {"seconds": time.perf_counter() - start}
        text = render(report, fmt)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EngineError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
