"""Construction-language front end: tokenizer, recursive-descent parser,
compiler to named expressions, and the dual-execution round-trip check.

Programs are finite SSA step sequences: `let` binds a name once, tools are
a closed set, rational literals are the only source-level numbers, and
there are no loops (unbounded iteration would smuggle limits back in).
File extension .qdx, '#' starts a line comment.

Grammar:
    program   := statement+
    statement := "let" IDENT "=" call ";" | "emit" IDENT ("," IDENT)* ";"
    call      := TOOL "(" arg ("," arg)* ")"
    arg       := IDENT | RATIONAL
    TOOL      := seg | point | line | circle | intersect | meanprop
               | fourthprop | ra | rra | bisect | anglesect
    RATIONAL  := INT ("/" POSINT)?
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import geometry as G
from .errors import (DslSemanticError, DslSyntaxError, MismatchError, QxError)
from .expr import Context, Expr, to_text
from .interval import CInterval, RInterval, asin_interval, pi_interval, sin_pi_interval

TOOLS = ("seg", "point", "line", "circle", "intersect", "meanprop",
         "fourthprop", "ra", "rra", "bisect", "anglesect")


@dataclass(frozen=True)
class Span:
    line: int
    column: int
    length: int = 1


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    span: Span
    message: str
    suggestion: Optional[str] = None

    def render(self) -> str:
        base = f"{self.severity}: {self.span.line}:{self.span.column}: {self.message}"
        return base + (f" (hint: {self.suggestion})" if self.suggestion else "")


@dataclass(frozen=True)
class Arg:
    kind: str  # "name" | "rat"
    value: object
    span: Span


@dataclass(frozen=True)
class Call:
    tool: str
    args: tuple[Arg, ...]
    span: Span


@dataclass(frozen=True)
class LetStmt:
    name: str
    call: Call
    span: Span


@dataclass(frozen=True)
class EmitStmt:
    names: tuple[str, ...]
    spans: tuple[Span, ...]
    span: Span


@dataclass(frozen=True)
class ConstructionProgram:
    statements: tuple

    @property
    def emits(self) -> tuple[str, ...]:
        out = []
        for st in self.statements:
            if isinstance(st, EmitStmt):
                out.extend(st.names)
        return tuple(out)

    def signature(self):
        """Span-free structural identity, for print/parse round trips."""
        sig = []
        for st in self.statements:
            if isinstance(st, LetStmt):
                sig.append(("let", st.name, st.call.tool,
                            tuple((a.kind, str(a.value)) for a in st.call.args)))
            else:
                sig.append(("emit", st.names))
        return tuple(sig)


# --- tokenizer -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<rational>-?\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<sym>[()=,;])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span


def _tokenize(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise DslSyntaxError(Diagnostic(
                "error", Span(line, col), f"unexpected character {source[pos]!r}"))
        kind = m.lastgroup
        text = m.group()
        if kind == "newline":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(text)
        else:
            tokens.append(Token(kind, text, Span(line, col, len(text))))
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", Span(line, col, 0)))
    return tokens


# --- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.bound: set[str] = set()

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_sym(self, sym: str, context: str) -> Token:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == sym:
            return self.advance()
        raise DslSyntaxError(Diagnostic(
            "error", tok.span, f"expected {sym!r} {context}, found {tok.text or 'end of file'!r}",
            suggestion=f"insert {sym!r}"))

    def parse_program(self) -> ConstructionProgram:
        statements = []
        while self.peek().kind != "eof":
            statements.append(self.parse_statement())
        if not statements:
            raise DslSyntaxError(Diagnostic("error", self.peek().span, "empty program"))
        return ConstructionProgram(tuple(statements))

    def parse_statement(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "let":
            return self.parse_let()
        if tok.kind == "ident" and tok.text == "emit":
            return self.parse_emit()
        raise DslSyntaxError(Diagnostic(
            "error", tok.span, f"expected 'let' or 'emit', found {tok.text!r}"))

    def parse_let(self) -> LetStmt:
        kw = self.advance()
        name_tok = self.peek()
        if name_tok.kind != "ident":
            raise DslSyntaxError(Diagnostic(
                "error", name_tok.span, "expected a name after 'let'"))
        self.advance()
        if name_tok.text in TOOLS or name_tok.text in ("let", "emit"):
            raise DslSyntaxError(Diagnostic(
                "error", name_tok.span, f"{name_tok.text!r} is reserved"))
        if name_tok.text in self.bound:
            raise DslSemanticError(Diagnostic(
                "error", name_tok.span, f"duplicate name {name_tok.text!r}",
                suggestion="names bind once; pick a fresh name"))
        tok = self.peek()
        if not (tok.kind == "sym" and tok.text == "="):
            raise DslSyntaxError(Diagnostic(
                "error", tok.span, f"expected '=', found {tok.text or 'end of file'!r}"))
        self.advance()
        call = self.parse_call()
        self.expect_sym(";", "after the tool call")
        self.bound.add(name_tok.text)
        return LetStmt(name_tok.text, call, kw.span)

    def parse_call(self) -> Call:
        tok = self.peek()
        if tok.kind != "ident" or tok.text not in TOOLS:
            raise DslSyntaxError(Diagnostic(
                "error", tok.span, f"expected a tool name, found {tok.text or 'end of file'!r}",
                suggestion="tools: " + ", ".join(TOOLS)))
        self.advance()
        self.expect_sym("(", f"after {tok.text!r}")
        args = [self.parse_arg()]
        while self.peek().kind == "sym" and self.peek().text == ",":
            self.advance()
            args.append(self.parse_arg())
        self.expect_sym(")", "to close the argument list")
        return Call(tok.text, tuple(args), tok.span)

    def parse_arg(self) -> Arg:
        tok = self.peek()
        if tok.kind == "rational":
            self.advance()
            if "/" in tok.text:
                num, den = tok.text.split("/")
                if int(den) == 0:
                    raise DslSyntaxError(Diagnostic(
                        "error", tok.span, "rational literal with denominator 0"))
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(int(tok.text))
            return Arg("rat", value, tok.span)
        if tok.kind == "ident":
            self.advance()
            if tok.text not in self.bound:
                raise DslSemanticError(Diagnostic(
                    "error", tok.span, f"unbound name {tok.text!r}",
                    suggestion="bind it with 'let' before use"))
            return Arg("name", tok.text, tok.span)
        raise DslSyntaxError(Diagnostic(
            "error", tok.span, f"expected an argument, found {tok.text or 'end of file'!r}"))

    def parse_emit(self) -> EmitStmt:
        kw = self.advance()
        names, spans = [], []
        while True:
            tok = self.peek()
            if tok.kind != "ident":
                raise DslSyntaxError(Diagnostic(
                    "error", tok.span, "expected a name to emit"))
            if tok.text not in self.bound:
                raise DslSemanticError(Diagnostic(
                    "error", tok.span, f"unbound name {tok.text!r}"))
            self.advance()
            names.append(tok.text)
            spans.append(tok.span)
            tok = self.peek()
            if tok.kind == "sym" and tok.text == ",":
                self.advance()
                continue
            break
        self.expect_sym(";", "after the emit list")
        return EmitStmt(tuple(names), tuple(spans), kw.span)


def parse(source: str) -> ConstructionProgram:
    """Parse .qdx source; deterministic, no backtracking."""
    return _Parser(_tokenize(source)).parse_program()


def pretty_print(prog: ConstructionProgram) -> str:
    lines = []
    for st in prog.statements:
        if isinstance(st, LetStmt):
            args = ", ".join(
                (a.value if a.kind == "name" else _rat_text(a.value)) for a in st.call.args)
            lines.append(f"let {st.name} = {st.call.tool}({args});")
        else:
            lines.append("emit " + ", ".join(st.names) + ";")
    return "\n".join(lines) + "\n"


def _rat_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


# --- compiler -------------------------------------------------------------------

_SIGNATURES = {
    "seg": (1, 1), "point": (2, 2), "line": (2, 2), "circle": (2, 2),
    "intersect": (2, 3), "meanprop": (2, 2), "fourthprop": (3, 3),
    "ra": (2, 2), "rra": (1, 1), "bisect": (1, 1), "anglesect": (3, 3),
}


@dataclass
class CompileResult:
    program: ConstructionProgram
    values: dict  # emitted name (points expand to name.x / name.y) -> Expr
    env: dict     # every bound name -> typed value
    steps: list   # tool invocation log: {tool, inputs, outputs}
    trace: G.Trace

    def emitted(self) -> dict:
        return self.values


def _kind_of(value) -> str:
    if isinstance(value, Expr):
        return "seg"
    if isinstance(value, G.GPoint):
        return "point"
    if isinstance(value, G.GLine):
        return "line"
    return "circle"


def compile_program(prog: ConstructionProgram, ctx: Optional[Context] = None) -> CompileResult:
    """Execute the program against the geometry engine.

    Straightedge/compass tools introduce only field ops and square roots;
    ra introduces sin_pi, rra introduces arcsin_over_pi. Geometry domain
    errors propagate with the offending statement's span attached.
    """
    if ctx is None:
        ctx = Context()
    env: dict = {}
    steps: list = []
    trace = G.Trace()
    for st in prog.statements:
        if isinstance(st, EmitStmt):
            continue
        call = st.call
        lo, hi = _SIGNATURES[call.tool]
        if not lo <= len(call.args) <= hi:
            raise DslSemanticError(Diagnostic(
                "error", call.span,
                f"{call.tool} expects {lo if lo == hi else f'{lo}..{hi}'} arguments, got {len(call.args)}"))
        try:
            value = _apply(ctx, call, env, trace)
        except (DslSemanticError, DslSyntaxError):
            raise
        except QxError as exc:
            exc.span = call.span
            raise
        env[st.name] = value
        steps.append({
            "tool": call.tool,
            "inputs": tuple(a.value if a.kind == "name" else a.value for a in call.args),
            "input_kinds": tuple(a.kind for a in call.args),
            "outputs": (st.name,),
        })
    values: dict = {}
    for st in prog.statements:
        if not isinstance(st, EmitStmt):
            continue
        for name in st.names:
            value = env[name]
            if isinstance(value, Expr):
                values[name] = value
            elif isinstance(value, G.GPoint):
                values[f"{name}.x"] = value.x
                values[f"{name}.y"] = value.y
            else:
                raise DslSemanticError(Diagnostic(
                    "error", st.span, f"cannot emit a {_kind_of(value)}; emit segments or points"))
    return CompileResult(prog, values, env, steps, trace)


def _expect(env, call: Call, idx: int, kinds: tuple[str, ...]):
    arg = call.args[idx]
    if arg.kind == "rat":
        if "rat" in kinds or "seg" in kinds:
            return arg.value
        raise DslSemanticError(Diagnostic(
            "error", arg.span, f"{call.tool} argument {idx + 1} cannot be a literal"))
    value = env[arg.value]
    kind = _kind_of(value)
    if kind not in kinds:
        raise DslSemanticError(Diagnostic(
            "error", arg.span,
            f"{call.tool} argument {idx + 1} must be {' or '.join(kinds)}, got {kind}"))
    return value


def _as_expr(ctx: Context, v) -> Expr:
    return v if isinstance(v, Expr) else ctx.rat(v)


def _apply(ctx: Context, call: Call, env, trace: G.Trace):
    tool = call.tool
    if tool == "seg":
        value = _expect(env, call, 0, ("rat", "seg"))
        e = _as_expr(ctx, value)
        G._require_positive(e, "segment length")
        return e
    if tool == "point":
        x = _as_expr(ctx, _expect(env, call, 0, ("rat", "seg")))
        y = _as_expr(ctx, _expect(env, call, 1, ("rat", "seg")))
        return G.GPoint(x, y)
    if tool == "line":
        return G.line(ctx, _expect(env, call, 0, ("point",)),
                      _expect(env, call, 1, ("point",)))
    if tool == "circle":
        return G.circle(ctx, _expect(env, call, 0, ("point",)),
                        _expect(env, call, 1, ("point",)))
    if tool == "intersect":
        a = _expect(env, call, 0, ("line", "circle"))
        b = _expect(env, call, 1, ("line", "circle"))
        index = 0
        if len(call.args) == 3:
            raw = _expect(env, call, 2, ("rat",))
            if raw.denominator != 1 or raw < 0:
                raise DslSemanticError(Diagnostic(
                    "error", call.args[2].span, "intersection index must be 0 or 1"))
            index = int(raw)
        pts = G.intersect(ctx, a, b)
        if index >= len(pts):
            raise DslSemanticError(Diagnostic(
                "error", call.span,
                f"intersection produced {len(pts)} point(s); index {index} is out of range"))
        for p in pts:
            trace.step("intersect", (), (), (("point", p),))
        return pts[index]
    if tool == "meanprop":
        a = _as_expr(ctx, _expect(env, call, 0, ("rat", "seg")))
        b = _as_expr(ctx, _expect(env, call, 1, ("rat", "seg")))
        return G.mean_proportional(ctx, a, b, trace)
    if tool == "fourthprop":
        a = _as_expr(ctx, _expect(env, call, 0, ("rat", "seg")))
        b = _as_expr(ctx, _expect(env, call, 1, ("rat", "seg")))
        c = _as_expr(ctx, _expect(env, call, 2, ("rat", "seg")))
        return G.fourth_proportional(ctx, a, b, c, trace)
    if tool == "ra":
        u = _as_expr(ctx, _expect(env, call, 0, ("rat", "seg")))
        v = _as_expr(ctx, _expect(env, call, 1, ("rat", "seg")))
        return G.right_anglesect(ctx, u, v, trace)
    if tool == "rra":
        return G.reverse_anglesect(ctx, _expect(env, call, 0, ("point",)), trace)
    if tool == "bisect":
        value = _expect(env, call, 0, ("rat", "seg", "point"))
        if isinstance(value, G.GPoint):
            d = ctx.sqrt(ctx.add(ctx.mul(ctx.add(1, value.x), ctx.add(1, value.x)),
                                 ctx.mul(value.y, value.y)))
            p = G.GPoint(ctx.div(ctx.add(1, value.x), d), ctx.div(value.y, d))
            trace.step("bisect", (), (), (("point", p),))
            return p
        e = _as_expr(ctx, value)
        G._require_positive(e, "segment length")
        return ctx.div(e, 2)
    if tool == "anglesect":
        p = _expect(env, call, 0, ("point",))
        u = _as_expr(ctx, _expect(env, call, 1, ("rat", "seg")))
        v = _as_expr(ctx, _expect(env, call, 2, ("rat", "seg")))
        return G.general_anglesect(ctx, p, u, v, trace)
    raise AssertionError(tool)


# --- round-trip verification ------------------------------------------------------

class _NumericExecutor:
    """Replays the tool-step log in plain interval geometry, no symbolic layer.

    Values: CInterval for segments, ("pt", x, y), ("line", p, q),
    ("circle", center, through). The formulas mirror the tool semantics
    directly on enclosures, which is the dual execution the round-trip
    check compares against.
    """

    def __init__(self, prec: int):
        self.prec = prec
        self.env: dict = {}

    def run(self, steps):
        for step in steps:
            args = []
            for raw, kind in zip(step["inputs"], step["input_kinds"]):
                args.append(raw if kind == "rat" else self.env[raw])
            self.env[step["outputs"][0]] = self.apply(step["tool"], args)

    def _ci(self, v) -> CInterval:
        if isinstance(v, CInterval):
            return v
        return CInterval.from_fraction(v, self.prec)

    def _ra_point(self, t: RInterval):
        p = self.prec
        half = RInterval.from_fraction(Fraction(1, 2), p)
        cos = sin_pi_interval(half.sub(t.ldexp(-1), p), p)
        sin = sin_pi_interval(t.ldexp(-1), p)
        return ("pt", CInterval.real(cos), CInterval.real(sin))

    def apply(self, tool, args):
        p = self.prec
        if tool == "seg":
            return self._ci(args[0])
        if tool == "point":
            return ("pt", self._ci(args[0]), self._ci(args[1]))
        if tool == "line":
            return ("line", args[0], args[1])
        if tool == "circle":
            return ("circle", args[0], args[1])
        if tool == "meanprop":
            return self._ci(args[0]).mul(self._ci(args[1]), p).sqrt(p)
        if tool == "fourthprop":
            return self._ci(args[0]).mul(self._ci(args[2]), p).div(self._ci(args[1]), p)
        if tool == "ra":
            u, v = self._ci(args[0]), self._ci(args[1])
            return self._ra_point(u.div(u.add(v, p), p).re)
        if tool == "rra":
            y = args[0][2].re
            return CInterval.real(asin_interval(y, p).div(pi_interval(p), p).ldexp(1))
        if tool == "bisect":
            if isinstance(args[0], tuple) and args[0][0] == "pt":
                x, y = args[0][1].re, args[0][2].re
                onep = RInterval.from_int(1).add(x, p)
                d = onep.mul(onep, p).add(y.mul(y, p), p).sqrt_nonneg(p)
                return ("pt", CInterval.real(onep.div(d, p)), CInterval.real(y.div(d, p)))
            return self._ci(args[0]).mul(CInterval.from_fraction(Fraction(1, 2), p), p)
        if tool == "anglesect":
            y = args[0][2].re
            u, v = self._ci(args[1]), self._ci(args[2])
            f = asin_interval(y, p).div(pi_interval(p), p).ldexp(1)
            w = f.mul(u.div(u.add(v, p), p).re, p)
            return self._ra_point(w)
        if tool == "intersect":
            index = int(args[2]) if len(args) == 3 else 0
            pts = self._intersect(args[0], args[1])
            pts.sort(key=lambda q: (q[1].re.mid().to_fraction(), q[2].re.mid().to_fraction()))
            return pts[min(index, len(pts) - 1)]
        raise AssertionError(tool)

    def _intersect(self, a, b):
        if a[0] == "line" and b[0] == "line":
            return [self._line_line(a, b)]
        if a[0] == "line" and b[0] == "circle":
            return self._line_circle(a, b)
        if a[0] == "circle" and b[0] == "line":
            return self._line_circle(b, a)
        return self._circle_circle(a, b)

    def _line_line(self, l1, l2):
        p = self.prec
        (p1, q1), (p2, q2) = (l1[1], l1[2]), (l2[1], l2[2])
        d1x, d1y = q1[1].re.sub(p1[1].re, p), q1[2].re.sub(p1[2].re, p)
        d2x, d2y = q2[1].re.sub(p2[1].re, p), q2[2].re.sub(p2[2].re, p)
        det = d1x.mul(d2y, p).sub(d1y.mul(d2x, p), p)
        ex, ey = p2[1].re.sub(p1[1].re, p), p2[2].re.sub(p1[2].re, p)
        t = ex.mul(d2y, p).sub(ey.mul(d2x, p), p).div(det, p)
        return ("pt", CInterval.real(p1[1].re.add(t.mul(d1x, p), p)),
                CInterval.real(p1[2].re.add(t.mul(d1y, p), p)))

    def _line_circle(self, l, c):
        p = self.prec
        lp, lq = l[1], l[2]
        center, through = c[1], c[2]
        dx, dy = lq[1].re.sub(lp[1].re, p), lq[2].re.sub(lp[2].re, p)
        fx, fy = lp[1].re.sub(center[1].re, p), lp[2].re.sub(center[2].re, p)
        tx, ty = through[1].re.sub(center[1].re, p), through[2].re.sub(center[2].re, p)
        a = dx.mul(dx, p).add(dy.mul(dy, p), p)
        bb = fx.mul(dx, p).add(fy.mul(dy, p), p).ldexp(1)
        r2 = tx.mul(tx, p).add(ty.mul(ty, p), p)
        cc = fx.mul(fx, p).add(fy.mul(fy, p), p).sub(r2, p)
        disc = bb.mul(bb, p).sub(a.mul(cc, p).ldexp(2), p)
        root = disc.sqrt_nonneg(p)
        out = []
        for signed in (root.neg(), root):
            t = signed.sub(bb, p).div(a.ldexp(1), p)
            out.append(("pt", CInterval.real(lp[1].re.add(t.mul(dx, p), p)),
                        CInterval.real(lp[2].re.add(t.mul(dy, p), p))))
        return out

    def _circle_circle(self, c1, c2):
        p = self.prec
        a_c, b_c = c1[1], c2[1]
        ux, uy = b_c[1].re.sub(a_c[1].re, p), b_c[2].re.sub(a_c[2].re, p)
        d2 = ux.mul(ux, p).add(uy.mul(uy, p), p)
        r1 = self._radius2(c1)
        r2 = self._radius2(c2)
        lam = d2.add(r1.sub(r2, p), p).div(d2.ldexp(1), p)
        x0x = a_c[1].re.add(lam.mul(ux, p), p)
        x0y = a_c[2].re.add(lam.mul(uy, p), p)
        x0 = ("pt", CInterval.real(x0x), CInterval.real(x0y))
        x1 = ("pt", CInterval.real(x0x.sub(uy, p)), CInterval.real(x0y.add(ux, p)))
        return self._line_circle(("line", x0, x1), c1)

    def _radius2(self, c):
        p = self.prec
        tx = c[2][1].re.sub(c[1][1].re, p)
        ty = c[2][2].re.sub(c[1][2].re, p)
        return tx.mul(tx, p).add(ty.mul(ty, p), p)


def verify_roundtrip(result: CompileResult, precision_bits: int = 30) -> dict:
    """Re-execute the step log numerically; every emit must overlap at the width.

    Raises MismatchError naming the divergent emits; returns a report of
    per-name widths otherwise.
    """
    target = Fraction(1, 1 << precision_bits)
    prec = max(64, precision_bits + 16)
    while prec <= 1 << 14:
        ex = _NumericExecutor(prec)
        try:
            ex.run(result.steps)
        except QxError:
            prec *= 2
            continue
        failures = []
        widths = {}
        pending = False
        for name, sym in result.values.items():
            base = name.split(".")[0]
            nv = ex.env.get(base)
            if isinstance(nv, tuple):
                nv = nv[1] if name.endswith(".x") else nv[2]
            sv = sym.eval(prec)
            if nv.width > target or sv.width > target:
                pending = True
                break
            widths[name] = str(float(max(nv.width, sv.width)))
            if not nv.intersects(sv):
                failures.append(name)
        if not pending:
            if failures:
                raise MismatchError(sorted(failures))
            return {"precision_bits": precision_bits, "names": sorted(result.values),
                    "widths": widths}
        prec *= 2
    raise MismatchError(["<width target unreachable>"])
