"""Command-line surface: compile, eval, classify, ladder, reduce, report,
render, verify.

Certificates are self-contained JSON: expressions in canonical text,
enclosures as exact decimal endpoints (outward-rounded), witnesses and
relations embedded, so `qx verify` can re-check everything offline.
Printed decimal digits are certified only: a digit is shown when the whole
enclosure agrees on it.

Exit codes: 0 ok, 1 verification failure, 2 I/O, 3 syntax, 4 semantic,
5 domain/precision. QX_PRECISION_CEILING (bits) caps refinement.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import errors as err
from .dsl import (CompileResult, compile_program, parse, pretty_print,
                  verify_roundtrip)
from .expr import Context, Expr, to_text
from .exprtext import parse_expr
from .geometry import clavius_point, spiral_probe_report
from .interval import CInterval, RInterval, pi_interval
from .ladders import ascend, descend, reduce_ladder
from .minpoly import IntPoly, Verdict, transcendence_rules
from .render import RenderSpec, render_svg

VERSION = "0.1.0"

_SYNTAX = (err.DslSyntaxError,)
_SEMANTIC = (err.DslSemanticError, err.InvalidBase, err.CyclicTerm,
             err.ZeroPolynomial, err.NotReduced, err.UnsupportedNode)
_DOMAIN = (err.MaxPrecision, err.DomainStraddle, err.OutOfDomain, err.OutOfRange,
           err.DivisionByZero, err.NonRealArgument, err.NonPositiveLength,
           err.NonPositiveSlope, err.DegenerateSecant, err.NotOnUnitCircle,
           err.Coincident, err.NoIntersection)


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, _SYNTAX):
        return 3
    if isinstance(exc, _SEMANTIC):
        return 4
    if isinstance(exc, _DOMAIN):
        return 5
    if isinstance(exc, OSError):
        return 2
    return 1


# --- decimal formatting --------------------------------------------------------

def _dec_dir(fr: Fraction, places: int, up: bool) -> str:
    scale = 10**places
    n = fr * scale
    val = -((-n.numerator) // n.denominator) if up else n.numerator // n.denominator
    sign = "-" if val < 0 else ""
    s = str(abs(val)).rjust(places + 1, "0")
    return f"{sign}{s[:-places]}.{s[-places:]}" if places else f"{sign}{s}"


def _interval_json(r: RInterval, places: int) -> list[str]:
    return [_dec_dir(r.lo.to_fraction(), places, up=False),
            _dec_dir(r.hi.to_fraction(), places, up=True)]


def certified_real(r: RInterval, digits: int) -> str:
    """Decimal string whose digits the whole enclosure agrees on (truncated)."""
    if r.is_point():
        return r.lo.decimal()  # exact value, exact finite decimal
    lo, hi = r.lo.to_fraction(), r.hi.to_fraction()
    for d in range(digits, -1, -1):
        scale = 10**d
        tlo, thi = int(lo * scale), int(hi * scale)  # toward zero
        if tlo == thi:
            sign = "-" if tlo < 0 or (tlo == 0 and hi <= 0 and lo < 0) else ""
            s = str(abs(tlo)).rjust(d + 1, "0")
            return f"{sign}{s[:-d]}.{s[-d:]}" if d else f"{sign}{s}"
    return f"[{_dec_dir(lo, digits, up=False)}, {_dec_dir(hi, digits, up=True)}]"


def certified_decimal(ci: CInterval, digits: int) -> str:
    re_s = certified_real(ci.re, digits)
    if ci.im.is_zero_point():
        return re_s
    im_s = certified_real(ci.im, digits)
    if im_s.startswith("-"):
        return f"{re_s} - {im_s[1:]}i"
    return f"{re_s} + {im_s}i"


def _enclosure_json(ci: CInterval, digits: int) -> dict:
    places = digits + 6
    out = {"re": _interval_json(ci.re, places)}
    if not ci.im.is_zero_point():
        out["im"] = _interval_json(ci.im, places)
    return out


def _digits_width(digits: int) -> Fraction:
    return Fraction(1, 10**digits)


# --- certificate builders --------------------------------------------------------

def _tower_json(tag) -> dict:
    def lv(x):
        return "top" if x is None else x
    return {"s": lv(tag.s), "a": lv(tag.a), "sa": lv(tag.sa), "el": lv(tag.el)}


def _verdict_json(v: Verdict) -> dict:
    out = {"status": v.status, "rule": v.rule, "conditional": v.conditional}
    if v.witness is not None:
        out["witness"] = list(v.witness.coeffs)
    if v.value is not None:
        out["value"] = str(v.value)
    return out


def expr_certificate(e: Expr, digits: int) -> dict:
    enc = e.enclosure(_digits_width(digits))
    verdict = transcendence_rules(e)
    return {
        "expr": to_text(e),
        "decimal": certified_decimal(enc, digits),
        "enclosure": _enclosure_json(enc, digits),
        "precision_digits": digits,
        "verdict": _verdict_json(verdict),
        "tower": _tower_json(e.tag),
    }


def _meta() -> dict:
    return {"tool": "qx", "version": VERSION, "format": "qx-certificate/1"}


def _ladder_json(ladder, digits: int) -> dict:
    return {
        "base": to_text(ladder.base),
        "rungs": [{"value": to_text(r.value), "kind": r.kind, "witness": r.witness}
                  for r in ladder.rungs],
        "removals": [{
            "index": rm.original_index,
            "relation": {"coefficients": list(rm.relation.coefficients),
                         "confidence": rm.relation.confidence,
                         "precision_bits": rm.relation.precision_bits},
            "constant": str(rm.constant),
            "combo": [[j, str(q)] for j, q in rm.combo],
            "identity_verified": rm.identity_verified,
        } for rm in ladder.removals],
    }


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --- subcommands ---------------------------------------------------------------------

def cmd_compile(args) -> int:
    path = Path(args.path)
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return 2
    try:
        prog = parse(source)
        result = compile_program(prog)
        roundtrip = verify_roundtrip(result, args.roundtrip_bits)
    except (err.DslSyntaxError, err.DslSemanticError) as exc:
        _emit_diagnostic(exc, args.json)
        return _exit_code(exc)
    except err.QxError as exc:
        _emit_plain_error(exc, args.json)
        return _exit_code(exc)
    cert = {
        "command": "compile",
        "meta": _meta(),
        "program": pretty_print(prog),
        "trace": [{"tool": s["tool"],
                   "inputs": [str(v) for v in s["inputs"]],
                   "outputs": list(s["outputs"])} for s in result.steps],
        "roundtrip": roundtrip,
        "emits": {name: expr_certificate(e, args.precision)
                  for name, e in result.values.items()},
    }
    sys.stdout.write(_dump(cert))
    return 0


def _emit_diagnostic(exc, as_json: bool):
    d = exc.diagnostic
    if as_json:
        payload = {"error": {"severity": d.severity, "line": d.span.line,
                             "column": d.span.column, "message": d.message,
                             "suggestion": d.suggestion}}
        sys.stderr.write(_dump(payload))
    else:
        print(d.render(), file=sys.stderr)


def _emit_plain_error(exc, as_json: bool):
    span = getattr(exc, "span", None)
    if as_json:
        payload = {"error": {"message": str(exc), "type": type(exc).__name__}}
        if span is not None:
            payload["error"]["line"] = span.line
            payload["error"]["column"] = span.column
        sys.stderr.write(_dump(payload))
    else:
        loc = f"{span.line}:{span.column}: " if span is not None else ""
        print(f"error: {loc}{exc}", file=sys.stderr)


def cmd_eval(args) -> int:
    ctx = Context()
    try:
        e = parse_expr(args.expr, ctx)
        enc = e.enclosure(_digits_width(args.precision))
    except err.DslSyntaxError as exc:
        _emit_diagnostic(exc, False)
        return 3
    except err.QxError as exc:
        _emit_plain_error(exc, False)
        return _exit_code(exc)
    print(certified_decimal(enc, args.precision))
    return 0


def cmd_classify(args) -> int:
    ctx = Context()
    try:
        e = parse_expr(args.expr, ctx)
        cert = {"command": "classify", "meta": _meta(),
                "subject": expr_certificate(e, args.precision)}
    except err.DslSyntaxError as exc:
        _emit_diagnostic(exc, args.json)
        return 3
    except err.QxError as exc:
        _emit_plain_error(exc, args.json)
        return _exit_code(exc)
    if args.json:
        sys.stdout.write(_dump(cert))
    else:
        s = cert["subject"]
        v = s["verdict"]
        line = f"{s['expr']} = {s['decimal']}  status={v['status']} rule={v['rule']}"
        if v.get("witness"):
            line += f" witness={IntPoly.new(v['witness'])}"
        print(line)
    return 0


def cmd_ladder(args, force_reduce: bool = False) -> int:
    ctx = Context(base=Fraction(args.base))
    try:
        e = parse_expr(args.expr, ctx)
        ladder = descend(e, ctx)
        cert = {"command": "ladder", "meta": _meta(),
                "subject": expr_certificate(e, args.precision),
                "ladder": _ladder_json(ladder, args.precision)}
        if args.reduce or force_reduce or args.ascend:
            reduced = reduce_ladder(ladder, ctx, args.max_coeff, args.relation_bits)
            cert["reduced"] = _ladder_json(reduced, args.precision)
        if args.ascend:
            report = ascend(reduced, ctx)
            cert["ascent"] = {
                "choices": [to_text(c) for c in report.choices],
                "kinds": list(report.kinds),
                "degree": report.degree,
                "conditional": report.conditional,
                "notes": list(report.notes),
                "crosschecks": [None if v is None else _verdict_json(v)
                                for v in report.crosschecks],
            }
    except err.DslSyntaxError as exc:
        _emit_diagnostic(exc, True)
        return 3
    except err.QxError as exc:
        _emit_plain_error(exc, True)
        return _exit_code(exc)
    sys.stdout.write(_dump(cert))
    return 0


def cmd_report(args) -> int:
    ctx = Context()
    if args.kind == "spiral":
        rep = spiral_probe_report(ctx, 1, args.kmin, args.kmax)
        payload = {
            "command": "report", "meta": _meta(), "report": "spiral-secant-probe",
            "k_range": list(rep.k_range),
            "intercepts": list(rep.intercepts),
            "successive_differences": list(rep.differences),
            "shrink_factors": [f"{s:.6f}" for s in rep.shrink_factors],
            "limit_estimate": rep.limit_estimate,
            "closed_forms": {
                "polar_subtangent_R_pi_over_2": rep.subtangent,
                "one_eighth_circumference_pi_R_over_4": rep.eighth_reading,
            },
            "discrepancy": {
                "vs_subtangent": rep.discrepancy_subtangent,
                "vs_one_eighth": rep.discrepancy_eighth,
                "factor_between_readings": f"{rep.factor_between_readings:.6f}",
            },
            "note": "the two classical readings differ by a factor of 2; "
                    "this report states the measured limit and both candidates "
                    "without choosing",
        }
    else:
        width = Fraction(1, 1 << 80)
        pi_enc = ctx.pi().enclosure(width)
        two_over_pi = CInterval.from_int(2).div(pi_enc, 96)
        rows = []
        for n in range(1, args.n + 1):
            x = clavius_point(ctx, n).x.enclosure(width)
            diff = x.sub(two_over_pi, 96)
            rows.append({"n": n, "x": certified_decimal(x, 15),
                         "abs_error_vs_2_over_pi":
                             certified_real(diff.re, 15).lstrip("-")})
        payload = {"command": "report", "meta": _meta(), "report": "clavius-convergence",
                   "rows": rows, "two_over_pi": certified_decimal(two_over_pi, 15)}
    sys.stdout.write(_dump(payload))
    return 0


def cmd_render(args) -> int:
    path = Path(args.path)
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return 2
    try:
        result = compile_program(parse(source))
        spec = RenderSpec(width=args.width, height=args.height)
        curves = (args.with_curve,) if args.with_curve else ()
        svg = render_svg(result, spec, curves)
    except (err.DslSyntaxError, err.DslSemanticError) as exc:
        _emit_diagnostic(exc, False)
        return _exit_code(exc)
    except err.QxError as exc:
        _emit_plain_error(exc, False)
        return _exit_code(exc)
    try:
        Path(args.out).write_text(svg, encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 2
    return 0


# --- certificate verification ---------------------------------------------------------

def _check_subject(sub: dict, ctx: Context, failures: list[str], label: str):
    e = parse_expr(sub["expr"], ctx)
    digits = sub["precision_digits"]
    enc = e.enclosure(_digits_width(digits))
    lo, hi = (Fraction(s) for s in sub["enclosure"]["re"])
    if not (enc.re.lo.to_fraction() <= hi and lo <= enc.re.hi.to_fraction()):
        failures.append(f"{label}: stored real enclosure does not meet recomputation")
    if "im" in sub["enclosure"]:
        ilo, ihi = (Fraction(s) for s in sub["enclosure"]["im"])
        if not (enc.im.lo.to_fraction() <= ihi and ilo <= enc.im.hi.to_fraction()):
            failures.append(f"{label}: stored imaginary enclosure does not meet recomputation")
    v = sub["verdict"]
    now = transcendence_rules(e)
    if now.status != v["status"]:
        failures.append(f"{label}: verdict status changed ({v['status']} -> {now.status})")
    if v.get("witness"):
        poly = IntPoly.new(v["witness"])
        val = poly.eval_enclosure(e.enclosure(Fraction(1, 1 << 60)), 128)
        if not val.contains_zero():
            failures.append(f"{label}: witness polynomial does not annihilate the value")
    return e


def cmd_verify(args) -> int:
    path = Path(args.path)
    try:
        cert = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: malformed certificate: {exc}", file=sys.stderr)
        return 3
    failures: list[str] = []
    command = cert.get("command")
    try:
        if command == "compile":
            prog = parse(cert["program"])
            result = compile_program(prog)
            verify_roundtrip(result, 30)
            for name, sub in cert["emits"].items():
                if name not in result.values:
                    failures.append(f"{name}: not produced by the embedded program")
                    continue
                ctx = result.values[name].ctx
                _check_subject(sub, ctx, failures, name)
        elif command in ("classify", "eval"):
            _check_subject(cert["subject"], Context(), failures, "subject")
        elif command == "ladder":
            _verify_ladder_cert(cert, failures)
        else:
            failures.append(f"unknown certificate command {command!r}")
    except err.QxError as exc:
        failures.append(f"re-verification raised: {exc}")
    if failures:
        for f in failures:
            print(f"FAIL {f}", file=sys.stderr)
        return 1
    print("certificate verified")
    return 0


def _verify_ladder_cert(cert: dict, failures: list[str]):
    base = Fraction(cert["ladder"]["base"])
    ctx = Context(base=base)
    subject = _check_subject(cert["subject"], ctx, failures, "subject")
    ladder = descend(subject, ctx)
    stored = [r["value"] for r in cert["ladder"]["rungs"]]
    if [to_text(r.value) for r in ladder.rungs] != stored:
        failures.append("ladder: descent does not reproduce the stored rungs")
    reduced = cert.get("reduced")
    if reduced is not None:
        kept = [parse_expr(r["value"], ctx) for r in reduced["rungs"]]
        for rm in reduced["removals"]:
            coeffs = rm["relation"]["coefficients"]
            if not any(coeffs):
                failures.append("ladder: stored removal has a zero relation")
                continue
            removed = parse_expr(stored[rm["index"]], ctx)
            # re-check b^{a_k} = b^q * prod (b^{a_j})^{q_j} by enclosure overlap
            lhs = ctx.exp(ctx.base, removed)
            rhs = ctx.exp(ctx.base, ctx.rat(Fraction(rm["constant"])))
            for j, q in rm["combo"]:
                rhs = ctx.mul(rhs, ctx.exp(ctx.base, ctx.mul(ctx.rat(Fraction(q)), kept[j])))
            width = Fraction(1, 1 << 40)
            try:
                if not lhs.enclosure(width).intersects(rhs.enclosure(width)):
                    failures.append(f"ladder: removal identity fails at index {rm['index']}")
            except err.QxError as exc:
                failures.append(f"ladder: removal identity check raised: {exc}")
    if "ascent" in cert:
        asc = cert["ascent"]
        if asc["degree"] != len(cert["reduced"]["rungs"]):
            failures.append("ascent: degree does not equal the reduced rung count")
        if not asc["conditional"]:
            failures.append("ascent: report must be Schanuel-conditional")


# --- argument parsing -------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qx",
        description="exact construction compiler and certified number classifier")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile a .qdx construction to certificates")
    c.add_argument("path")
    c.add_argument("--precision", type=int, default=12, metavar="DIGITS")
    c.add_argument("--roundtrip-bits", type=int, default=30)
    c.add_argument("--json", action="store_true",
                   help="machine-readable diagnostics on stderr")
    c.set_defaults(func=cmd_compile)

    e = sub.add_parser("eval", help="evaluate an expression to certified digits")
    e.add_argument("expr")
    e.add_argument("--precision", type=int, default=16, metavar="DIGITS")
    e.set_defaults(func=cmd_eval)

    cl = sub.add_parser("classify", help="classification verdict for an expression")
    cl.add_argument("expr")
    cl.add_argument("--precision", type=int, default=12)
    cl.add_argument("--json", action="store_true")
    cl.set_defaults(func=cmd_classify)

    la = sub.add_parser("ladder", help="descend (and optionally reduce/ascend) a ladder")
    la.add_argument("expr")
    la.add_argument("--reduce", action="store_true")
    la.add_argument("--ascend", action="store_true")
    la.add_argument("--base", default="-1")
    la.add_argument("--precision", type=int, default=12)
    la.add_argument("--max-coeff", type=int, default=10**6)
    la.add_argument("--relation-bits", type=int, default=160)
    la.set_defaults(func=cmd_ladder)

    rd = sub.add_parser("reduce", help="ladder with reduction (alias for ladder --reduce)")
    rd.add_argument("expr")
    rd.add_argument("--ascend", action="store_true")
    rd.add_argument("--base", default="-1")
    rd.add_argument("--precision", type=int, default=12)
    rd.add_argument("--max-coeff", type=int, default=10**6)
    rd.add_argument("--relation-bits", type=int, default=160)
    rd.set_defaults(func=lambda a: cmd_ladder(_with_reduce(a)))

    rp = sub.add_parser("report", help="convergence/probe study reports")
    rp.add_argument("kind", choices=("spiral", "clavius"))
    rp.add_argument("--kmin", type=int, default=3)
    rp.add_argument("--kmax", type=int, default=12)
    rp.add_argument("--n", type=int, default=12)
    rp.set_defaults(func=cmd_report)

    rn = sub.add_parser("render", help="render a construction to SVG")
    rn.add_argument("path")
    rn.add_argument("--out", required=True)
    rn.add_argument("--with-curve", choices=("quadratrix", "spiral"))
    rn.add_argument("--width", type=int, default=640)
    rn.add_argument("--height", type=int, default=640)
    rn.set_defaults(func=cmd_render)

    vf = sub.add_parser("verify", help="re-verify a certificate")
    vf.add_argument("path")
    vf.set_defaults(func=cmd_verify)
    return p


def _with_reduce(args):
    args.reduce = True
    return args


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except err.QxError as exc:
        _emit_plain_error(exc, False)
        return _exit_code(exc)


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
