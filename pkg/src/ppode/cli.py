"""Command-line front end.

    ppode analyze "<equation>" [--format text|json] [--truncation N]
                  [--witness-at Z1] [--witness-order K] [--no-witness]
                  [--strict] [--timing]
    ppode corpus PATH [--jobs N] [--format text|json] [--truncation N] [--strict]

Exit codes: 0 completed, 1 corpus assertion failure, 2 parse or validation
error, 3 unsupported input (reducible, tower too deep, strict-mode
irreducibility, truncation exhausted), 4 internal or I/O error.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from flint import fmpq

from . import __version__
from .algebra.fields import AlgebraicField, reset_generator_names
from .algebra.ratfunc import RatFunc
from .classify import ConstantsCase, GenusOnly, Riccati, WeierstrassType, decide_pp
from .errors import (
    BadBasePoint,
    ConstantEquation,
    IrreducibilityUnknown,
    LeadingTermVanishes,
    PPError,
    ParseError,
    Reducible,
    TruncationTooSmall,
    UnsupportedExtension,
    ValidationError,
)
from .parser import parse_and_validate
from .witness import branched_witness

SCHEMA = 1
DIGITS = 15
DEFAULT_BASE_POINTS = ("1", "-1", "2", "1/2", "3", "-2")

EXIT_OK, EXIT_ASSERT, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_INTERNAL = range(5)


def exit_code_for(exc):
    if isinstance(exc, (Reducible, UnsupportedExtension, IrreducibilityUnknown, TruncationTooSmall)):
        return EXIT_UNSUPPORTED
    if isinstance(exc, (ParseError, ValidationError)):
        return EXIT_INPUT
    return EXIT_INTERNAL


# ---------------------------------------------------------------------------
# JSON helpers


def _num(x):
    """Fixed-precision machine form of a number (None passes through)."""
    if x is None:
        return None
    if isinstance(x, (int, fmpq, Fraction)):
        return _round(float(Fraction(int(x.p), int(x.q)) if isinstance(x, fmpq) else x))
    x = complex(x)
    scale = max(abs(x.real), abs(x.imag), 1e-300)
    re = x.real if abs(x.real) > 1e-14 * scale else 0.0
    im = x.imag if abs(x.imag) > 1e-14 * scale else 0.0
    return {"re": _round(re), "im": _round(im)}


def _round(v):
    v = float(f"{v:.{DIGITS}g}")
    return 0.0 if v == 0 else v


def _scalar(K, c):
    """{"exact", "numeric"} for an element of a coefficient field."""
    out = {"exact": K.fmt(c), "numeric": None}
    if isinstance(c, fmpq):
        out["numeric"] = _num(c)
    elif not K.is_function_field:
        out["numeric"] = _num(K.approx(c))
    return out


def _base_scalar(c):
    if isinstance(c, RatFunc):
        if c.is_constant():
            c = c.constant_value()
        else:
            return {"exact": str(c), "numeric": None}
    return {"exact": str(c), "numeric": _num(c)}


def _definitions(K):
    return K.definitions() if isinstance(K, AlgebraicField) else []


# ---------------------------------------------------------------------------
# report


@dataclass
class AnalysisReport:
    input: str
    exit_code: int = EXIT_OK
    data: dict = field(default_factory=dict)
    error: dict | None = None
    timing: float | None = None

    def to_json(self, timing=False):
        out = {"schema": SCHEMA, "input": self.input}
        if self.error is not None:
            out["error"] = self.error
        out.update(self.data)
        if timing and self.timing is not None:
            out["timing"] = round(self.timing, 6)
        return out

    def dumps(self, timing=False):
        return json.dumps(self.to_json(timing), sort_keys=True, indent=2, ensure_ascii=False)


def _pole_json(p):
    place = p.place
    center = place.center
    return {
        "center": {
            "exact": center.exact_str(),
            "numeric": [_num(v) for v in center.approx()],
            "degree": center.degree,
        },
        "e": place.e,
        "s": place.s_value(),
        "degree": place.degree,
        "field": _definitions(place.field),
        "poleOrder": p.pole_order,
    }


def _classification_json(c):
    if c is None:
        return None
    out = {"class": c.label, "description": c.describe()}
    if isinstance(c, Riccati):
        out.update(
            a0=_base_scalar(c.a0),
            a1=_base_scalar(c.a1),
            a2=_base_scalar(c.a2),
            coordinate=c.coordinate,
        )
    elif isinstance(c, WeierstrassType):
        out.update(
            cubic=c.cubic_str("y"),
            cubicCoeffs=[str(x) for x in c.cubic],
            a=_base_scalar(c.a),
            b=_base_scalar(c.b),
            scale=_base_scalar(c.scale),
        )
    elif isinstance(c, (ConstantsCase, GenusOnly)):
        out.update(genus=c.genus, note=c.note)
    return out


def _witness_json(w):
    K = w.field
    e, c = w.leading
    terms = []
    for exp, coeff in w.y.terms():
        terms.append({"exponent": str(exp), **_scalar(K, coeff)})
    return {
        "basePoint": str(w.base_point),
        "m": w.m,
        "leading": {"exponent": str(e), **_scalar(K, c)},
        "residualOrder": str(w.residual_order),
        "target": str(w.target),
        "precision": str(w.y.precision),
        "numeric": w.numeric,
        "field": _definitions(K) if K.is_exact else ["complex floating point"],
        "terms": terms,
    }


def analyze(text, truncation=None, witness_at=None, witness_order=None, witness=True, strict=False):
    """Run the full pipeline on one equation and build a report."""
    reset_generator_names()
    rep = AnalysisReport(text)
    start = time.perf_counter()
    try:
        _analyze_into(rep, text, truncation, witness_at, witness_order, witness, strict)
    except ConstantEquation as exc:
        rep.data = {
            "notice": exc.code,
            "message": str(exc),
            "pp": True,
            "verdict": "pp",
            "classification": _classification_json(ConstantsCase(0, "y' = 0: every solution is constant")),
        }
    except PPError as exc:
        rep.exit_code = exit_code_for(exc)
        rep.error = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, Reducible):
            rep.error["factors"] = list(exc.factors)
        if isinstance(exc, UnsupportedExtension) and exc.minpoly:
            rep.error["minpoly"] = exc.minpoly
    except Exception as exc:  # noqa: BLE001 - reported as an internal error
        rep.exit_code = EXIT_INTERNAL
        rep.error = {"code": "internal", "message": f"{type(exc).__name__}: {exc}"}
    rep.timing = time.perf_counter() - start
    return rep


def _analyze_into(rep, text, truncation, witness_at, witness_order, witness, strict):
    eq = parse_and_validate(text, strict=strict)
    verdict = decide_pp(eq, truncation)
    rep.data = {
        "f": eq.render(),
        "equation": eq.render_equation(),
        "autonomous": eq.autonomous,
        "degS": eq.degS,
        "degT": eq.degT,
        "certificate": eq.certificate,
        "conditional": verdict.conditional,
        "genus": verdict.genus,
        "pp": verdict.pp,
        "verdict": verdict.tag,
        "poles": [_pole_json(p) for p in verdict.poles],
        "classification": _classification_json(verdict.classification),
        "witness": None,
        "warnings": list(verdict.warnings),
    }
    if verdict.pp or not witness:
        return
    points = [witness_at] if witness_at is not None else DEFAULT_BASE_POINTS
    pole = verdict.poles[0]
    failures = []
    for z1 in points:
        z1 = fmpq(Fraction(str(z1)).numerator, Fraction(str(z1)).denominator)
        target = None
        try:
            if witness_order is not None:
                target = _target(eq, pole, z1, witness_order)
            w = branched_witness(eq, pole, z1, target=target)
        except (BadBasePoint, LeadingTermVanishes, TruncationTooSmall) as exc:
            failures.append({"basePoint": str(z1), "code": exc.code, "message": str(exc)})
            continue
        rep.data["witness"] = _witness_json(w)
        break
    if failures:
        rep.data["witnessFailures"] = failures
        if rep.data["witness"] is None:
            rep.data["warnings"].append("no branched witness constructed at the tried base points")


def _target(eq, pole, z1, k):
    # leading branched exponent + k/m, found from a default-target witness
    w = branched_witness(eq, pole, z1)
    return w.leading[0] + Fraction(k, pole.m)


# ---------------------------------------------------------------------------
# text rendering


def render_text(rep, timing=False):
    d = rep.to_json(timing)
    lines = [f"input: {rep.input}"]
    if rep.error is not None:
        lines.append(f"error [{rep.error['code']}]: {rep.error['message']}")
        for fac in rep.error.get("factors", []):
            lines.append(f"  factor: {fac}")
        return "\n".join(lines)
    if "notice" in d:
        lines.append(f"notice [{d['notice']}]: {d['message']}")
        lines.append("verdict: pp")
        lines.append(f"class: {d['classification']['description']}")
        return "\n".join(lines)
    lines.append(f"equation: {d['equation']}")
    lines.append(f"f: {d['f']}")
    lines.append(f"autonomous: {str(d['autonomous']).lower()}")
    lines.append(f"irreducibility: {d['certificate']}")
    lines.append(f"genus: {d['genus']}")
    lines.append(f"verdict: {d['verdict']}" + (" (conditional)" if d["conditional"] else ""))
    for p in d["poles"]:
        c = p["center"]
        line = f"pole: order {p['poleOrder']} at t = {c['exact']}, s = {p['s']}, e = {p['e']}"
        if p["field"]:
            line += f" where {'; '.join(p['field'])}"
        lines.append(line)
    if d["classification"]:
        lines.append(f"class: {d['classification']['description']}")
    w = d.get("witness")
    if w:
        lead = w["leading"]
        lines.append(f"witness at z = {w['basePoint']}: m = {w['m']}")
        lines.append(f"  leading: ({lead['exact']}) * (z - {w['basePoint']})^({lead['exponent']})")
        if lead["numeric"] is not None:
            lines.append(f"  leading numeric: {_fmt_num(lead['numeric'])}")
        for line in w["field"]:
            lines.append(f"  where {line}")
        lines.append(f"  residual order: {w['residualOrder']} (target {w['target']})")
        lines.append("  y = " + _series_text(w))
    for f in d.get("witnessFailures", []):
        lines.append(f"witness at z = {f['basePoint']} failed [{f['code']}]: {f['message']}")
    for wmsg in d.get("warnings", []):
        lines.append(f"warning: {wmsg}")
    if timing and rep.timing is not None:
        lines.append(f"time: {rep.timing:.3f} s")
    return "\n".join(lines)


def _fmt_num(n):
    if isinstance(n, dict):
        return f"{n['re']:.{DIGITS}g} + {n['im']:.{DIGITS}g}*I" if n["im"] >= 0 else f"{n['re']:.{DIGITS}g} - {-n['im']:.{DIGITS}g}*I"
    return f"{n:.{DIGITS}g}"


def _series_text(w):
    parts = []
    for t in w["terms"]:
        e = t["exponent"]
        mono = "" if e == "0" else f" * (z - {w['basePoint']})^({e})"
        parts.append(f"({t['exact']}){mono}")
    parts.append(f"O((z - {w['basePoint']})^({w['precision']}))")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# corpus


@dataclass
class CorpusCase:
    line_no: int
    text: str
    expect: list


def parse_corpus(content):
    """Cases from corpus text: ``equation [| expect: a, b, ...]``, ``#`` comments."""
    cases = []
    for no, raw in enumerate(content.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        expect = []
        if "|" in line:
            line, tail = (p.strip() for p in line.split("|", 1))
            if not tail.startswith("expect:"):
                raise ValueError(f"line {no}: expected '| expect: ...'")
            expect = [tok for tok in tail[len("expect:"):].replace(",", " ").split() if tok]
            for tok in expect:
                if tok not in ("pp", "not-pp") and tok.split("=", 1)[0] not in ("class", "genus", "error"):
                    raise ValueError(f"line {no}: unknown assertion {tok!r}")
        cases.append(CorpusCase(no, line, expect))
    return cases


def _observed(rep):
    """Facts an assertion can check, from a report."""
    d = rep.to_json()
    if rep.error is not None:
        return {"error": rep.error["code"]}
    obs = {"verdict": d["verdict"]}
    if d.get("classification"):
        obs["class"] = d["classification"]["class"]
    if d.get("genus") is not None:
        obs["genus"] = str(d["genus"])
    return obs


def check_case(case, rep):
    """(status, mismatches) with status in pass | fail | unsupported."""
    obs = _observed(rep)
    wrong = []
    for tok in case.expect:
        if tok in ("pp", "not-pp"):
            got = obs.get("verdict", f"error={obs.get('error')}")
            if got != tok:
                wrong.append((tok, got))
            continue
        key, val = tok.split("=", 1)
        got = obs.get(key)
        if got != val:
            wrong.append((tok, f"{key}={got}" if got is not None else _describe(obs)))
    if wrong:
        return "fail", wrong
    if "error" in obs and not any(t.startswith("error=") for t in case.expect):
        if rep.exit_code == EXIT_UNSUPPORTED:
            return "unsupported", []
        return "fail", [("analysis", f"error={obs['error']}")]
    return "pass", []


def _describe(obs):
    if "error" in obs:
        return f"error={obs['error']}"
    return obs.get("verdict", "?")


def _run_case(args):
    text, truncation, strict = args
    return analyze(text, truncation=truncation, witness=False, strict=strict)


def run_corpus(path, jobs=1, truncation=None, strict=False, fmt="text", out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with open(path, encoding="utf-8") as fh:
            content = fh.read()
    except OSError as exc:
        print(f"error [io]: {exc}", file=err)
        return EXIT_INTERNAL
    try:
        cases = parse_corpus(content)
    except ValueError as exc:
        print(f"error [corpus-syntax]: {exc}", file=err)
        return EXIT_INPUT
    work = [(c.text, truncation, strict) for c in cases]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_case, work))
    else:
        reports = [_run_case(w) for w in work]
    results = [(c, r, *check_case(c, r)) for c, r in zip(cases, reports)]
    counts = {"pass": 0, "fail": 0, "unsupported": 0}
    for _, _, status, _ in results:
        counts[status] += 1
    if fmt == "json":
        doc = {
            "schema": SCHEMA,
            "summary": {"cases": len(results), **counts},
            "cases": [
                {
                    "line": c.line_no,
                    "input": c.text,
                    "expect": c.expect,
                    "status": status,
                    "mismatches": [{"expected": e, "actual": a} for e, a in wrong],
                    "report": r.to_json(),
                }
                for c, r, status, wrong in results
            ],
        }
        print(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False), file=out)
    else:
        for c, r, status, wrong in results:
            obs = _observed(r)
            got = ", ".join(f"{k}={v}" if k != "verdict" else v for k, v in sorted(obs.items()))
            print(f"{status:<11} line {c.line_no:>3}: {c.text}  [{got}]", file=out)
        failures = [(c, wrong) for c, _, status, wrong in results if status == "fail"]
        if failures:
            print("", file=out)
            print("mismatches:", file=out)
            for c, wrong in failures:
                print(f"  line {c.line_no}: {c.text}", file=out)
                for e, a in wrong:
                    print(f"    - expected {e}", file=out)
                    print(f"    + actual   {a}", file=out)
        print("", file=out)
        print(
            f"cases: {len(results)}  pass: {counts['pass']}  fail: {counts['fail']}  "
            f"unsupported: {counts['unsupported']}",
            file=out,
        )
    return EXIT_ASSERT if counts["fail"] else EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser():
    p = argparse.ArgumentParser(prog="ppode", description="Painlevé-property analysis of f(y', y, z) = 0.")
    p.add_argument("--version", action="version", version=f"ppode {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze one equation")
    a.add_argument("equation")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--truncation", type=int, default=None, metavar="N", help="Puiseux truncation (terms)")
    a.add_argument("--witness-at", default=None, metavar="Z1", help="rational base point for the witness")
    a.add_argument(
        "--witness-order", type=int, default=None, metavar="K",
        help="residual target: K fractional orders beyond the leading branched term (default 4)",
    )
    a.add_argument("--no-witness", action="store_true")
    a.add_argument("--strict", action="store_true", help="treat heuristic irreducibility as unsupported")
    a.add_argument("--timing", action="store_true", help="report wall time (also in JSON)")

    c = sub.add_parser("corpus", help="analyze a corpus file and check its assertions")
    c.add_argument("path")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--truncation", type=int, default=None, metavar="N")
    c.add_argument("--strict", action="store_true")
    return p


def _check_rational(text):
    try:
        Fraction(text)
    except (ValueError, ZeroDivisionError):
        return False
    return True


def run_analyze(args, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    if args.witness_at is not None and not _check_rational(args.witness_at):
        print(f"error [invalid-base-point]: {args.witness_at!r} is not a rational number", file=err)
        return EXIT_INPUT
    if args.truncation is not None and args.truncation < 1:
        print("error [invalid-truncation]: truncation must be positive", file=err)
        return EXIT_INPUT
    rep = analyze(
        args.equation,
        truncation=args.truncation,
        witness_at=args.witness_at,
        witness_order=args.witness_order,
        witness=not args.no_witness,
        strict=args.strict,
    )
    if rep.error is not None:
        print(f"error [{rep.error['code']}]: {rep.error['message']}", file=err)
    if args.format == "json":
        print(rep.dumps(timing=args.timing), file=out)
    else:
        print(render_text(rep, timing=args.timing), file=out)
    return rep.exit_code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return run_analyze(args)
        return run_corpus(args.path, jobs=args.jobs, truncation=args.truncation, strict=args.strict, fmt=args.format)
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
