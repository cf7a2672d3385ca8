"""Exact expression DAG over Q closed under field ops, roots, b^x and log_b.

Nodes are hash-consed per Context (structurally identical subterms are the
same object), constants fold on rational leaves, and every node carries a
syntactic tower tag: an upper bound on the level at which the expression's
own syntax witnesses membership in the S / A / SA towers (anglesector
closures) and the exponential-logarithmic tower over an algebraic base.
A level of None means "this syntax does not witness membership at all".

Values are never trusted as floats: every node evaluates to a certified
complex enclosure at a requested working precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .dyadic import Dyadic
from .errors import (DivisionByZero, DomainStraddle, InvalidBase, MaxPrecision,
                     NonRealArgument, OutOfDomain)
from .interval import (CInterval, RInterval, arcsin_over_pi_complex, precision_ceiling,
                       refine, sin_pi_complex)

RAT = "rat"
ADD = "add"
SUB = "sub"
MUL = "mul"
DIV = "div"
SQRT = "sqrt"
POLYROOT = "polyroot"
EXP = "exp"
LOG = "log"
SINPI = "sin_pi"
ARCSINPI = "arcsin_over_pi"

FIELD_OPS = (ADD, SUB, MUL, DIV)

# sin(pi*r) for rational r is rational exactly on this table (Olmsted)
_SIN_TABLE = {
    Fraction(0): Fraction(0),
    Fraction(1): Fraction(0),
    Fraction(1, 2): Fraction(1),
    Fraction(3, 2): Fraction(-1),
    Fraction(1, 6): Fraction(1, 2),
    Fraction(5, 6): Fraction(1, 2),
    Fraction(7, 6): Fraction(-1, 2),
    Fraction(11, 6): Fraction(-1, 2),
}

_ARCSIN_TABLE = {
    Fraction(0): Fraction(0),
    Fraction(1, 2): Fraction(1, 6),
    Fraction(-1, 2): Fraction(-1, 6),
    Fraction(1): Fraction(1, 2),
    Fraction(-1): Fraction(-1, 2),
}

# arcsin(x)/pi for quadratic-field x with x^2 in this table (quarter/third angles)
_ARCSIN_SQUARED = {
    Fraction(1, 2): Fraction(1, 4),
    Fraction(3, 4): Fraction(1, 3),
}


def _top_max(*levels: Optional[int]) -> Optional[int]:
    out = 0
    for lv in levels:
        if lv is None:
            return None
        out = max(out, lv)
    return out


def _plus1(level: Optional[int]) -> Optional[int]:
    return None if level is None else level + 1


@dataclass(frozen=True)
class TowerTag:
    """Syntactic level upper bounds; None marks 'not representable by this syntax'."""

    s: Optional[int]
    a: Optional[int]
    sa: Optional[int]
    el: Optional[int]

    @staticmethod
    def rational() -> "TowerTag":
        return TowerTag(0, 0, 0, 0)

    def dominates(self, other: "TowerTag") -> bool:
        """Monotonicity check: every level here is >= the other's (None is top)."""
        def ge(x, y):
            if x is None:
                return True
            return y is not None and x >= y
        return (ge(self.s, other.s) and ge(self.a, other.a)
                and ge(self.sa, other.sa) and ge(self.el, other.el))


class Expr:
    """Immutable DAG node; build only through a Context."""

    __slots__ = ("kind", "rat", "children", "natural", "branch", "selector",
                 "tag", "serial", "ctx", "_enc")

    def __init__(self, ctx, kind, rat=None, children=(), natural=False,
                 branch=0, selector=None, tag=None, serial=0):
        self.ctx = ctx
        self.kind = kind
        self.rat = rat
        self.children = children
        self.natural = natural
        self.branch = branch
        self.selector = selector
        self.tag = tag
        self.serial = serial
        self._enc = {}

    # exp/log accessors: children = (base, arg) or (arg,) for the natural base
    @property
    def base(self) -> Optional["Expr"]:
        if self.kind in (EXP, LOG) and not self.natural:
            return self.children[0]
        return None

    @property
    def arg(self) -> "Expr":
        return self.children[-1]

    def is_rat(self, value=None) -> bool:
        if self.kind != RAT:
            return False
        return value is None or self.rat == Fraction(value)

    # --- evaluation ---

    def eval(self, prec: int) -> CInterval:
        cached = self._enc.get(prec)
        if cached is not None:
            return cached
        value = self._compute(prec)
        self._enc[prec] = value
        return value

    def _compute(self, prec: int) -> CInterval:
        k = self.kind
        if k == RAT:
            return CInterval.from_fraction(self.rat, prec)
        if k in FIELD_OPS:
            x = self.children[0].eval(prec)
            y = self.children[1].eval(prec)
            if k == ADD:
                return x.add(y, prec)
            if k == SUB:
                return x.sub(y, prec)
            if k == MUL:
                return x.mul(y, prec)
            return x.div(y, prec)
        if k == SQRT:
            return self.children[0].eval(prec).sqrt(prec)
        if k == EXP:
            z = self.arg.eval(prec)
            if self.natural:
                return z.exp(prec)
            ln_base = self.base.eval(prec).log(0, prec)
            return z.mul(ln_base, prec).exp(prec)
        if k == LOG:
            val = self.arg.eval(prec).log(self.branch, prec)
            if self.natural:
                return val
            return val.div(self.base.eval(prec).log(0, prec), prec)
        if k == SINPI:
            return sin_pi_complex(self.children[0].eval(prec), prec)
        if k == ARCSINPI:
            return arcsin_over_pi_complex(self.children[0].eval(prec), prec)
        if k == POLYROOT:
            return self._refine_root(prec)
        raise AssertionError(f"unhandled kind {k}")

    def _poly_at(self, t: RInterval, prec: int) -> RInterval:
        acc = RInterval.zero()
        for c in reversed(self.children):
            acc = acc.mul(t, prec).add(c.eval(prec).re, prec)
        return acc

    def _refine_root(self, prec: int) -> CInterval:
        lo, hi = self.selector.re.lo, self.selector.re.hi
        sign_lo = self._point_sign(lo, prec)
        if sign_lo is None:
            # endpoint sign not certifiable at this precision: the full
            # selector is the only sound enclosure
            return CInterval.real(RInterval(lo, hi))
        target = Fraction(1, 1 << prec)
        for _ in range(prec + 64):
            if (hi - lo).to_fraction() <= target:
                break
            mid = (lo + hi).ldexp(-1)
            s = self._point_sign(mid, prec)
            if s is None:
                # nudge off a possible root hit: try the 1/4 point
                mid = (lo + mid).ldexp(-1)
                s = self._point_sign(mid, prec)
                if s is None:
                    break
            if s == sign_lo:
                lo = mid
            else:
                hi = mid
        return CInterval.real(RInterval(lo, hi))

    def _point_sign(self, t: Dyadic, prec: int) -> Optional[int]:
        v = self._poly_at(RInterval.point(t), prec)
        if v.strictly_positive():
            return 1
        if v.strictly_negative():
            return -1
        return None

    def enclosure(self, width: Fraction, ceiling: Optional[int] = None) -> CInterval:
        return refine(self.eval, width, ceiling)

    # --- traversal and display ---

    def walk(self) -> Iterator["Expr"]:
        """Post-order over unique nodes."""
        seen = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in seen:
                continue
            if expanded:
                seen.add(id(node))
                yield node
            else:
                stack.append((node, True))
                for child in reversed(node.children):
                    stack.append((child, False))

    def __repr__(self):
        return f"<Expr {to_text(self)}>"


def to_text(e: Expr) -> str:
    """Deterministic canonical text; reparses to the identical DAG."""
    k = e.kind
    if k == RAT:
        r = e.rat
        return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"
    if k in FIELD_OPS:
        sym = {ADD: "+", SUB: "-", MUL: "*", DIV: "/"}[k]
        return f"({to_text(e.children[0])} {sym} {to_text(e.children[1])})"
    if k == SQRT:
        return f"sqrt({to_text(e.children[0])})"
    if k == EXP:
        if e.natural:
            return f"exp({to_text(e.arg)})"
        return f"pow({to_text(e.base)}, {to_text(e.arg)})"
    if k == LOG:
        if e.natural:
            return f"ln({to_text(e.arg)}; {e.branch})"
        return f"log({to_text(e.arg)}; {to_text(e.base)}; {e.branch})"
    if k in (SINPI, ARCSINPI):
        return f"{k}({to_text(e.children[0])})"
    if k == POLYROOT:
        coeffs = ", ".join(to_text(c) for c in e.children)
        sel = e.selector
        pts = ", ".join(d.decimal() for d in
                        (sel.re.lo, sel.re.hi, sel.im.lo, sel.im.hi))
        return f"polyroot({coeffs}; {pts})"
    raise AssertionError(k)


class Context:
    """One expression-building session: hash-consing table plus the session base.

    The dedup table is the only mutable state; confine a Context to one
    builder thread. Finished Exprs are immutable and freely shareable.
    """

    def __init__(self, base: Fraction | int = Fraction(-1),
                 ceiling: Optional[int] = None):
        self._table: dict = {}
        self._counter = 0
        self.ceiling = ceiling if ceiling is not None else precision_ceiling()
        self.base = self.rat(Fraction(base))
        if self.base.rat in (0, 1):
            raise InvalidBase("session base must differ from 0 and 1")

    # --- interning ---

    def _intern(self, kind, rat=None, children=(), natural=False, branch=0,
                selector=None) -> Expr:
        key = (kind, rat, tuple(id(c) for c in children), natural, branch, selector)
        node = self._table.get(key)
        if node is None:
            tag = self._tag_for(kind, rat, children, natural)
            self._counter += 1
            node = Expr(self, kind, rat, tuple(children), natural, branch,
                        selector, tag, self._counter)
            self._table[key] = node
        return node

    def _tag_for(self, kind, rat, children, natural) -> TowerTag:
        tags = [c.tag for c in children]
        if kind == RAT:
            return TowerTag.rational()
        if kind in FIELD_OPS:
            return TowerTag(_top_max(tags[0].s, tags[1].s),
                            _top_max(tags[0].a, tags[1].a),
                            _top_max(tags[0].sa, tags[1].sa),
                            _top_max(tags[0].el, tags[1].el))
        if kind == SQRT:
            t = tags[0]
            positive = _is_provably_positive(children[0])
            bump = _plus1 if positive else (lambda _lv: None)
            return TowerTag(bump(t.s), bump(t.a), bump(t.sa), _top_max(1, t.el))
        if kind == POLYROOT:
            el = _top_max(1, *(t.el for t in tags))
            return TowerTag(None, None, None, el)
        if kind == SINPI:
            t = tags[0]
            return TowerTag(_plus1(t.s), None, _plus1(t.sa), _plus1(t.el))
        if kind == ARCSINPI:
            t = tags[0]
            return TowerTag(None, _plus1(t.a), _plus1(t.sa), _plus1(_top_max(1, t.el)))
        if kind == EXP:
            if natural:
                return TowerTag(None, None, None, None)
            base_t, arg_t = tags[0], tags[1]
            euler = children[0].is_rat(-1)
            if children[0] is self.base:
                el = _plus1(arg_t.el)
            else:
                el = _plus1(_top_max(arg_t.el, _plus1(base_t.el)))
            return TowerTag(_plus1(arg_t.s) if euler else None,
                            None,
                            _plus1(arg_t.sa) if euler else None,
                            el)
        if kind == LOG:
            if natural:
                return TowerTag(None, None, None, None)
            base_t, arg_t = tags[0], tags[1]
            return TowerTag(None, None, None, _plus1(_top_max(arg_t.el, base_t.el)))
        raise AssertionError(kind)

    # --- constructors ---

    def rat(self, value) -> Expr:
        return self._intern(RAT, rat=Fraction(value))

    def _field(self, kind, x: Expr, y: Expr) -> Expr:
        if x.kind == RAT and y.kind == RAT:
            if kind == ADD:
                return self.rat(x.rat + y.rat)
            if kind == SUB:
                return self.rat(x.rat - y.rat)
            if kind == MUL:
                return self.rat(x.rat * y.rat)
            if y.rat == 0:
                raise DivisionByZero("division by the constant 0")
            return self.rat(x.rat / y.rat)
        if kind == DIV and y.is_rat(0):
            raise DivisionByZero("division by the constant 0")
        # identity and absorbing folds (enclosures are finite, so 0*x = 0)
        if kind == ADD:
            if x.is_rat(0):
                return y
            if y.is_rat(0):
                return x
        elif kind == SUB:
            if y.is_rat(0):
                return x
            if x is y:
                return self.rat(0)
        elif kind == MUL:
            if x.is_rat(0) or y.is_rat(0):
                return self.rat(0)
            if x.is_rat(1):
                return y
            if y.is_rat(1):
                return x
        elif kind == DIV:
            if y.is_rat(1):
                return x
            if x is y and self._provably_nonzero_enclosure(x):
                return self.rat(1)
        return self._intern(kind, children=(x, y))

    def _provably_nonzero_enclosure(self, x: Expr) -> bool:
        try:
            enc = x.eval(64)
        except (DomainStraddle, MaxPrecision):
            return False
        return not enc.contains_zero()

    def add(self, x, y) -> Expr:
        return self._field(ADD, self._coerce(x), self._coerce(y))

    def sub(self, x, y) -> Expr:
        return self._field(SUB, self._coerce(x), self._coerce(y))

    def mul(self, x, y) -> Expr:
        return self._field(MUL, self._coerce(x), self._coerce(y))

    def div(self, x, y) -> Expr:
        return self._field(DIV, self._coerce(x), self._coerce(y))

    def _coerce(self, x) -> Expr:
        if isinstance(x, Expr):
            if x.ctx is not self:
                raise ValueError("expression belongs to a different context")
            return x
        return self.rat(x)

    def sqrt(self, x) -> Expr:
        x = self._coerce(x)
        if x.kind == RAT and x.rat >= 0:
            num, den = x.rat.numerator, x.rat.denominator
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn == num and rd * rd == den:
                return self.rat(Fraction(rn, rd))
        return self._intern(SQRT, children=(x,))

    def polyroot(self, coeffs, selector: CInterval) -> Expr:
        coeffs = tuple(self._coerce(c) for c in coeffs)
        if len(coeffs) < 2 or coeffs[-1].is_rat(0):
            raise OutOfDomain("polyroot needs degree >= 1 with nonzero leading coefficient")
        node = self._intern(POLYROOT, children=coeffs, selector=selector)
        _check_isolation(node)
        return node

    def exp(self, base: Optional[Expr], exponent) -> Expr:
        exponent = self._coerce(exponent)
        if base is None:
            if exponent.is_rat(0):
                return self.rat(1)
            return self._intern(EXP, children=(exponent,), natural=True)
        base = self._coerce(base)
        if base.kind == RAT and base.rat in (0, 1):
            raise InvalidBase(f"exponential base {base.rat} is forbidden")
        if exponent.is_rat(0):
            return self.rat(1)
        if exponent.is_rat(1):
            return base
        return self._intern(EXP, children=(base, exponent))

    def log(self, base: Optional[Expr], arg, branch: int = 0) -> Expr:
        arg = self._coerce(arg)
        if arg.is_rat(0):
            raise OutOfDomain("log of the constant 0")
        if base is None:
            if arg.is_rat(1) and branch == 0:
                return self.rat(0)
            return self._intern(LOG, children=(arg,), natural=True, branch=branch)
        base = self._coerce(base)
        if base.kind == RAT and base.rat in (0, 1):
            raise InvalidBase(f"logarithm base {base.rat} is forbidden")
        if arg.is_rat(1) and branch == 0:
            return self.rat(0)
        return self._intern(LOG, children=(base, arg), branch=branch)

    def ln(self, arg, branch: int = 0) -> Expr:
        return self.log(None, arg, branch)

    def sin_pi(self, x) -> Expr:
        x = self._coerce(x)
        self._require_near_real(x, "sin_pi")
        if x.kind == RAT:
            folded = _SIN_TABLE.get(x.rat % 2)
            if folded is not None:
                return self.rat(folded)
        return self._intern(SINPI, children=(x,))

    def arcsin_over_pi(self, x) -> Expr:
        x = self._coerce(x)
        self._require_real(x, "arcsin_over_pi")
        if x.kind == RAT:
            folded = _ARCSIN_TABLE.get(x.rat)
            if folded is not None:
                return self.rat(folded)
            if abs(x.rat) > 1:
                raise OutOfDomain(f"arcsin argument {x.rat} outside [-1, 1]")
        flat = quad_flatten(x)
        if flat is not None:
            u, v, d = flat
            if v != 0 and u == 0:
                folded = _ARCSIN_SQUARED.get(v * v * d)
                if folded is not None:
                    return self.rat(folded if v > 0 else -folded)
        self._require_unit_domain(x)
        return self._intern(ARCSINPI, children=(x,))

    # --- canonical constants ---

    def i(self) -> Expr:
        return self.sqrt(self.rat(-1))

    def pi(self) -> Expr:
        """pi = (-1) * i * ln(-1); transcendence rules recognize this DAG."""
        return self.mul(self.mul(self.rat(-1), self.i()), self.ln(self.rat(-1)))

    def e(self) -> Expr:
        return self._intern(EXP, children=(self.rat(1),), natural=True)

    # --- checked preconditions ---

    def _require_real(self, x: Expr, op: str):
        if not x.eval(64).is_real():
            raise NonRealArgument(f"{op} requires a real argument, got {to_text(x)}")

    def _require_near_real(self, x: Expr, op: str):
        # real values built through complex subterms keep a sliver of
        # imaginary rounding slack; only a provably nonreal argument is rejected
        if not x.eval(64).im.contains_zero():
            raise NonRealArgument(f"{op} requires a real argument, got {to_text(x)}")

    def _require_unit_domain(self, x: Expr):
        prec = 64
        one = Fraction(1)
        while True:
            enc = x.eval(prec).re
            lo, hi = enc.lo.to_fraction(), enc.hi.to_fraction()
            if -one <= lo and hi <= one:
                return
            if lo > one or hi < -one:
                raise OutOfDomain("arcsin argument provably outside [-1, 1]")
            if prec >= self.ceiling:
                raise MaxPrecision("cannot place arcsin argument inside [-1, 1]")
            prec *= 2

    # --- derived forms ---

    def cos_pi(self, x) -> Expr:
        """cos(pi*x) = sin(pi*(1/2 - x))."""
        return self.sin_pi(self.sub(self.rat(Fraction(1, 2)), self._coerce(x)))

    def euler_split(self, x) -> "EulerForm":
        x = self._coerce(x)
        self._require_real(x, "euler_split")
        return EulerForm(self.cos_pi(x), self.sin_pi(x))

    def euler_expand(self, e: Expr) -> Expr:
        """Rewrite sin_pi/arcsin_over_pi into their base -1 exp/log definitions."""
        memo: dict = {}

        def go(n: Expr) -> Expr:
            out = memo.get(id(n))
            if out is not None:
                return out
            kids = [go(c) for c in n.children]
            m1 = self.rat(-1)
            if n.kind == SINPI:
                x = kids[0]
                num = self.sub(self.exp(m1, x), self.exp(m1, self.mul(self.rat(-1), x)))
                out = self.div(num, self.mul(self.rat(2), self.i()))
            elif n.kind == ARCSINPI:
                x = kids[0]
                z = self.add(self.mul(self.i(), x),
                             self.sqrt(self.sub(self.rat(1), self.mul(x, x))))
                out = self.log(m1, z, 0)
            else:
                out = self._rebuild(n, kids)
            memo[id(n)] = out
            return out

        return go(e)

    def rewrite_elprop(self, e: Expr) -> Expr:
        """Normalize every exp/log node to the session base via change of base.

        x^y -> b^(y*log_b x) and log_x y -> log_b y / log_b x; natural-base
        nodes have no algebraic-base normal form and pass through unchanged.
        """
        memo: dict = {}

        def go(n: Expr) -> Expr:
            out = memo.get(id(n))
            if out is not None:
                return out
            kids = [go(c) for c in n.children]
            out = self._rebuild(n, kids)
            if out.kind == EXP and not out.natural and out.base is not self.base:
                out = self.exp(self.base,
                               self.mul(out.arg, self.log(self.base, out.base, 0)))
            elif out.kind == LOG and not out.natural and out.base is not self.base:
                out = self.div(self.log(self.base, out.arg, out.branch),
                               self.log(self.base, out.base, 0))
            memo[id(n)] = out
            return out

        return go(e)

    def _rebuild(self, n: Expr, kids) -> Expr:
        k = n.kind
        if k == RAT:
            return n
        if k in FIELD_OPS:
            return self._field(k, kids[0], kids[1])
        if k == SQRT:
            return self.sqrt(kids[0])
        if k == EXP:
            return self.exp(None if n.natural else kids[0], kids[-1])
        if k == LOG:
            return self.log(None if n.natural else kids[0], kids[-1], n.branch)
        if k == SINPI:
            return self.sin_pi(kids[0])
        if k == ARCSINPI:
            return self.arcsin_over_pi(kids[0])
        if k == POLYROOT:
            if all(a is b for a, b in zip(kids, n.children)):
                return n
            return self.polyroot(kids, n.selector)
        raise AssertionError(k)


@dataclass(frozen=True)
class EulerForm:
    """cos/sin split of (-1)^x; cos_part^2 + sin_part^2 encloses 1."""

    cos_part: Expr
    sin_part: Expr


def _is_provably_positive(x: Expr) -> bool:
    if x.kind == RAT:
        return x.rat > 0
    try:
        enc = x.eval(64)
    except (DomainStraddle, MaxPrecision):
        return False
    return enc.is_real() and enc.re.strictly_positive()


def _check_isolation(node: Expr):
    """Selector must bracket a sign change and the derivative must not vanish on it."""
    sel = node.selector
    if not sel.im.is_zero_point():
        raise OutOfDomain("only real root selectors are supported")
    prec = 96
    lo_sign = node._point_sign(sel.re.lo, prec)
    hi_sign = node._point_sign(sel.re.hi, prec)
    if lo_sign is None or hi_sign is None or lo_sign == hi_sign:
        raise OutOfDomain("selector endpoints do not bracket a single sign change")
    deriv = RInterval.zero()
    n = len(node.children) - 1
    for k in range(n, 0, -1):
        coeff = node.children[k].eval(prec).re.mul(RInterval.from_int(k), prec)
        deriv = deriv.mul(sel.re, prec).add(coeff, prec)
    if deriv.contains_zero():
        raise OutOfDomain("derivative may vanish on the selector; root not isolated")


# --- quadratic-field flattening ----------------------------------------------

def _square_free_decomp(n: int) -> tuple[int, int]:
    """n = s^2 * m with m squarefree (n > 0); trial division, fine at test scale."""
    s, m = 1, 1
    d = 2
    while d * d <= n:
        count = 0
        while n % d == 0:
            n //= d
            count += 1
        s *= d ** (count // 2)
        if count % 2:
            m *= d
        d += 1 if d == 2 else 2
    return s, m * n


def quad_flatten(e: Expr) -> Optional[tuple[Fraction, Fraction, Fraction]]:
    """Flatten into u + v*sqrt(d) with rational u, v and squarefree integer d.

    Returns (u, 0, 0) for rational values; None when the expression leaves a
    single quadratic extension (nested or mixed radicals).
    """
    k = e.kind
    if k == RAT:
        return (e.rat, Fraction(0), Fraction(0))
    if k == SQRT:
        inner = quad_flatten(e.children[0])
        if inner is None or inner[1] != 0:
            return None
        u = inner[0]
        if u == 0:
            return (Fraction(0), Fraction(0), Fraction(0))
        sign = 1 if u > 0 else -1
        n = abs(u.numerator) * u.denominator
        s, m = _square_free_decomp(n)
        if m == 1 and sign == 1:
            return (Fraction(s, u.denominator), Fraction(0), Fraction(0))
        return (Fraction(0), Fraction(s, u.denominator), Fraction(sign * m))
    if k not in FIELD_OPS:
        return None
    a = quad_flatten(e.children[0])
    b = quad_flatten(e.children[1])
    if a is None or b is None:
        return None
    u1, v1, d1 = a
    u2, v2, d2 = b
    if v1 != 0 and v2 != 0 and d1 != d2:
        return None
    d = d1 if v1 != 0 else d2
    if k == ADD:
        return _quad_norm(u1 + u2, v1 + v2, d)
    if k == SUB:
        return _quad_norm(u1 - u2, v1 - v2, d)
    if k == MUL:
        return _quad_norm(u1 * u2 + v1 * v2 * d, u1 * v2 + v1 * u2, d)
    norm = u2 * u2 - v2 * v2 * d
    if norm == 0:
        return None
    ru = (u1 * u2 - v1 * v2 * d) / norm
    rv = (v1 * u2 - u1 * v2) / norm
    return _quad_norm(ru, rv, d)


def _quad_norm(u: Fraction, v: Fraction, d: Fraction):
    if v == 0 or d == 0:
        return (u, Fraction(0), Fraction(0))
    return (u, v, d)
