"""Exact synthetic geometry: points, lines, circles, the two classical
proportion constructions, anglesector tools, and transcendental-curve probes.

Angles are unit-circle points; there is no separate angle type. Coordinates
are expressions, so every derived length is exact and certifiable. The
quadratrix terminal point exists only as a limit: the y = 0 parameter is a
hard domain error, and the probes expose only finite-stage data (Clavius
bisection points, spiral secant intercepts) for the caller to study.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import (Coincident, DegenerateSecant, DomainStraddle, MaxPrecision,
                     NoIntersection, NonPositiveLength, NonPositiveSlope,
                     NotOnUnitCircle, OutOfRange)
from .expr import Context, Expr, to_text
from .interval import CInterval, pi_interval

_W40 = Fraction(1, 1 << 40)
_SEP_CAP = 1024


@dataclass(frozen=True)
class GPoint:
    x: Expr
    y: Expr


@dataclass(frozen=True)
class GLine:
    p: GPoint
    q: GPoint


@dataclass(frozen=True)
class GCircle:
    center: GPoint
    through: GPoint


@dataclass(frozen=True)
class CurveSample:
    parameter: Expr
    point: GPoint
    curve: str  # "quadratrix(R)" | "spiral(a)"


@dataclass
class Trace:
    """Append-only construction log; steps re-execute, drawables render."""

    steps: list = field(default_factory=list)
    samples: list = field(default_factory=list)

    def step(self, tool: str, inputs: tuple, outputs: tuple, drawables: tuple = ()):
        self.steps.append({"tool": tool, "inputs": inputs, "outputs": outputs,
                           "drawables": drawables})

    def sample(self, s: CurveSample):
        self.samples.append(s)


# --- exact sign reasoning ------------------------------------------------------

def _sign_of(e: Expr, cap: int = _SEP_CAP) -> Optional[int]:
    """+1/-1 when the enclosure separates from 0, None when undecided."""
    if e.kind == "rat":
        return (e.rat > 0) - (e.rat < 0)
    prec = 64
    while prec <= cap:
        try:
            enc = e.eval(prec)
        except (DomainStraddle, MaxPrecision):
            return None
        if enc.im.is_zero_point() or enc.im.contains_zero():
            if enc.re.strictly_positive():
                return 1
            if enc.re.strictly_negative():
                return -1
        prec *= 2
    return None


def _require_positive(e: Expr, what: str) -> None:
    if e.kind == "rat":
        if e.rat <= 0:
            raise NonPositiveLength(f"{what} must be positive, got {e.rat}")
        return
    if not e.eval(64).im.contains_zero():
        raise NonPositiveLength(f"{what} must be a real positive length")
    s = _sign_of(e)
    if s == 1:
        return
    if s == -1:
        raise NonPositiveLength(f"{what} is provably negative")
    raise MaxPrecision(f"cannot certify positivity of {what}")


# --- intersections ---------------------------------------------------------------

def line(ctx: Context, p: GPoint, q: GPoint) -> GLine:
    dx = ctx.sub(q.x, p.x)
    dy = ctx.sub(q.y, p.y)
    if dx.is_rat(0) and dy.is_rat(0):
        raise Coincident("line endpoints coincide")
    return GLine(p, q)


def circle(ctx: Context, center: GPoint, through: GPoint) -> GCircle:
    r2 = _dist2(ctx, center, through)
    if r2.is_rat(0):
        raise Coincident("circle radius is zero")
    return GCircle(center, through)


def _dist2(ctx: Context, a: GPoint, b: GPoint) -> Expr:
    dx = ctx.sub(b.x, a.x)
    dy = ctx.sub(b.y, a.y)
    return ctx.add(ctx.mul(dx, dx), ctx.mul(dy, dy))


def intersect(ctx: Context, a, b) -> list[GPoint]:
    """0, 1 or 2 points, ordered by enclosure midpoint (x then y)."""
    if isinstance(a, GLine) and isinstance(b, GLine):
        return _line_line(ctx, a, b)
    if isinstance(a, GLine) and isinstance(b, GCircle):
        return _line_circle(ctx, a, b)
    if isinstance(a, GCircle) and isinstance(b, GLine):
        return _line_circle(ctx, b, a)
    if isinstance(a, GCircle) and isinstance(b, GCircle):
        return _circle_circle(ctx, a, b)
    raise TypeError("intersect expects lines and circles")


def _line_line(ctx: Context, l1: GLine, l2: GLine) -> list[GPoint]:
    d1x, d1y = ctx.sub(l1.q.x, l1.p.x), ctx.sub(l1.q.y, l1.p.y)
    d2x, d2y = ctx.sub(l2.q.x, l2.p.x), ctx.sub(l2.q.y, l2.p.y)
    denom = ctx.sub(ctx.mul(d1x, d2y), ctx.mul(d1y, d2x))
    if denom.is_rat(0):
        off = ctx.sub(ctx.mul(ctx.sub(l2.p.x, l1.p.x), d1y),
                      ctx.mul(ctx.sub(l2.p.y, l1.p.y), d1x))
        if off.is_rat(0):
            raise Coincident("lines coincide")
        if _sign_of(off) is not None:
            raise NoIntersection("parallel distinct lines")
        raise MaxPrecision("cannot separate parallel lines")
    if denom.kind != "rat" and _sign_of(denom) is None:
        raise MaxPrecision("cannot certify the lines are not parallel")
    t = ctx.div(ctx.sub(ctx.mul(ctx.sub(l2.p.x, l1.p.x), d2y),
                        ctx.mul(ctx.sub(l2.p.y, l1.p.y), d2x)), denom)
    return [GPoint(ctx.add(l1.p.x, ctx.mul(t, d1x)),
                   ctx.add(l1.p.y, ctx.mul(t, d1y)))]


def _line_circle(ctx: Context, l: GLine, c: GCircle) -> list[GPoint]:
    dx, dy = ctx.sub(l.q.x, l.p.x), ctx.sub(l.q.y, l.p.y)
    fx, fy = ctx.sub(l.p.x, c.center.x), ctx.sub(l.p.y, c.center.y)
    a = ctx.add(ctx.mul(dx, dx), ctx.mul(dy, dy))
    b = ctx.mul(2, ctx.add(ctx.mul(fx, dx), ctx.mul(fy, dy)))
    r2 = _dist2(ctx, c.center, c.through)
    cc = ctx.sub(ctx.add(ctx.mul(fx, fx), ctx.mul(fy, fy)), r2)
    disc = ctx.sub(ctx.mul(b, b), ctx.mul(4, ctx.mul(a, cc)))
    sign = _sign_of(disc) if not disc.is_rat(0) else 0
    if disc.is_rat(0):
        t = ctx.div(ctx.mul(-1, b), ctx.mul(2, a))
        return [_along(ctx, l.p, t, dx, dy)]
    if sign == -1:
        raise NoIntersection("line provably misses the circle")
    if sign is None:
        raise MaxPrecision("cannot certify tangency vs crossing")
    root = ctx.sqrt(disc)
    t1 = ctx.div(ctx.sub(ctx.mul(-1, b), root), ctx.mul(2, a))
    t2 = ctx.div(ctx.add(ctx.mul(-1, b), root), ctx.mul(2, a))
    pts = [_along(ctx, l.p, t1, dx, dy), _along(ctx, l.p, t2, dx, dy)]
    return _order_points(pts)


def _along(ctx: Context, p: GPoint, t: Expr, dx: Expr, dy: Expr) -> GPoint:
    return GPoint(ctx.add(p.x, ctx.mul(t, dx)), ctx.add(p.y, ctx.mul(t, dy)))


def _circle_circle(ctx: Context, c1: GCircle, c2: GCircle) -> list[GPoint]:
    ax, ay = c1.center.x, c1.center.y
    bx, by = c2.center.x, c2.center.y
    ux, uy = ctx.sub(bx, ax), ctx.sub(by, ay)
    d2 = ctx.add(ctx.mul(ux, ux), ctx.mul(uy, uy))
    r1 = _dist2(ctx, c1.center, c1.through)
    r2 = _dist2(ctx, c2.center, c2.through)
    if d2.is_rat(0):
        if ctx.sub(r1, r2).is_rat(0):
            raise Coincident("circles coincide")
        raise NoIntersection("concentric circles with distinct radii")
    lam = ctx.div(ctx.add(d2, ctx.sub(r1, r2)), ctx.mul(2, d2))
    x0 = GPoint(ctx.add(ax, ctx.mul(lam, ux)), ctx.add(ay, ctx.mul(lam, uy)))
    x1 = GPoint(ctx.sub(x0.x, uy), ctx.add(x0.y, ux))
    return _line_circle(ctx, GLine(x0, x1), c1)


def _order_points(pts: list[GPoint]) -> list[GPoint]:
    """Lexicographic by enclosure midpoint at a fixed precision: total and deterministic."""
    def key(p: GPoint):
        return (p.x.eval(128).re.mid().to_fraction(),
                p.y.eval(128).re.mid().to_fraction())
    return sorted(pts, key=key)


# --- proportion constructions -----------------------------------------------------

def mean_proportional(ctx: Context, a: Expr, b: Expr,
                      trace: Optional[Trace] = None) -> Expr:
    """x with a : x = x : b, i.e. x = sqrt(a*b), by the semicircle construction."""
    a, b = ctx._coerce(a), ctx._coerce(b)
    _require_positive(a, "first segment")
    _require_positive(b, "second segment")
    x = ctx.sqrt(ctx.mul(a, b))
    if trace is not None:
        zero = ctx.rat(0)
        A = GPoint(zero, zero)
        D = GPoint(a, zero)
        B = GPoint(ctx.add(a, b), zero)
        M = GPoint(ctx.div(ctx.add(a, b), 2), zero)
        C = GPoint(a, x)
        trace.step("meanprop", (to_text(a), to_text(b)), (to_text(x),),
                   (("segment", A, D), ("segment", D, B), ("circle", M, A),
                    ("segment", D, C), ("point", C)))
    return x


def fourth_proportional(ctx: Context, a: Expr, b: Expr, c: Expr,
                        trace: Optional[Trace] = None) -> Expr:
    """x with x : a = c : b, i.e. x = a*c/b, by the similar-triangle construction."""
    a, b, c = ctx._coerce(a), ctx._coerce(b), ctx._coerce(c)
    for name, seg in (("a", a), ("b", b), ("c", c)):
        _require_positive(seg, f"segment {name}")
    x = ctx.div(ctx.mul(a, c), b)
    if trace is not None:
        zero = ctx.rat(0)
        A = GPoint(zero, zero)
        Ap = GPoint(zero, a)
        Gp = GPoint(c, a)
        G = GPoint(b, zero)
        D = GPoint(a, zero)
        drawables = [("segment", A, D), ("segment", A, Ap), ("segment", Ap, Gp),
                     ("point", G)]
        diff = ctx.sub(b, c)
        if not diff.is_rat(0) and _sign_of(diff, cap=256) is not None:
            O = GPoint(zero, ctx.div(ctx.mul(a, b), diff))
            Dp = GPoint(ctx.div(ctx.mul(a, ctx.sub(Ap.y, O.y)),
                                ctx.sub(zero, O.y)), a)
            drawables += [("segment", O, G), ("segment", O, D), ("point", Dp)]
        trace.step("fourthprop", (to_text(a), to_text(b), to_text(c)), (to_text(x),),
                   tuple(drawables))
    return x


# --- anglesector tools ---------------------------------------------------------------

def right_anglesect(ctx: Context, u: Expr, v: Expr,
                    trace: Optional[Trace] = None) -> GPoint:
    """Unit-circle point dividing the right angle in ratio u : v from the x-axis.

    The point is (cos(pi*t/2), sin(pi*t/2)) with t = u/(u+v), realized with
    sin_pi nodes only (cos via the complementary angle).
    """
    u, v = ctx._coerce(u), ctx._coerce(v)
    _require_positive(u, "ratio numerator")
    _require_positive(v, "ratio complement")
    t = ctx.div(u, ctx.add(u, v))
    half = Fraction(1, 2)
    p = GPoint(ctx.sin_pi(ctx.mul(half, ctx.sub(1, t))),
               ctx.sin_pi(ctx.mul(half, t)))
    if trace is not None:
        trace.step("ra", (to_text(u), to_text(v)), (to_text(p.x), to_text(p.y)),
                   (("point", p), ("segment", GPoint(ctx.rat(0), ctx.rat(0)), p)))
    return p


def reverse_anglesect(ctx: Context, p: GPoint,
                      trace: Optional[Trace] = None) -> Expr:
    """Fraction of the right angle below the unit-circle point p: (2/pi) arcsin(y)."""
    _check_unit_circle(ctx, p)
    y = p.y
    s = _sign_of(y)
    if s == -1:
        raise NotOnUnitCircle("point lies below the first-quadrant arc")
    out = ctx.mul(2, ctx.arcsin_over_pi(y))
    if trace is not None:
        trace.step("rra", (to_text(p.x), to_text(p.y)), (to_text(out),),
                   (("point", p),))
    return out


def _check_unit_circle(ctx: Context, p: GPoint) -> None:
    resid = ctx.sub(_dist2(ctx, GPoint(ctx.rat(0), ctx.rat(0)), p), 1)
    if resid.is_rat(0):
        return
    if _sign_of(resid) is not None:
        raise NotOnUnitCircle(f"x^2 + y^2 - 1 is provably nonzero for ({to_text(p.x)}, {to_text(p.y)})")
    # residual encloses 0 down to separation cap: accept (necessary check)


def general_anglesect(ctx: Context, theta: GPoint, u: Expr, v: Expr,
                      trace: Optional[Trace] = None) -> GPoint:
    """Divide the acute angle at theta in ratio u : v via reverse-then-right anglesection."""
    u, v = ctx._coerce(u), ctx._coerce(v)
    f = reverse_anglesect(ctx, theta, trace)
    w = ctx.mul(f, ctx.div(u, ctx.add(u, v)))
    out = right_anglesect(ctx, w, ctx.sub(1, w), trace)
    if trace is not None:
        trace.step("anglesect", (to_text(theta.x), to_text(theta.y),
                                 to_text(u), to_text(v)),
                   (to_text(out.x), to_text(out.y)), (("point", out),))
    return out


# --- curve probes -------------------------------------------------------------------

def quadratrix_x_of_y(ctx: Context, yv: Expr, R: Expr,
                      trace: Optional[Trace] = None) -> Expr:
    """Abscissa of the quadratrix at height yv: x = yv / tan((pi/2)(yv/R)).

    yv = 0 is the terminal limit and is rejected: the generating motions
    provide no intersection point there.
    """
    yv, R = ctx._coerce(yv), ctx._coerce(R)
    _require_positive(R, "quadratrix parameter R")
    if yv.is_rat(0):
        raise OutOfRange("the quadratrix has no generated point at y = 0")
    s_y = _sign_of(yv)
    s_top = _sign_of(ctx.sub(R, yv))
    if s_y == -1 or s_top == -1:
        raise OutOfRange("quadratrix height must satisfy 0 < y < R")
    if s_y is None or s_top is None:
        raise MaxPrecision("cannot certify 0 < y < R")
    t = ctx.div(yv, R)
    half = Fraction(1, 2)
    x = ctx.mul(yv, ctx.div(ctx.sin_pi(ctx.mul(half, ctx.sub(1, t))),
                            ctx.sin_pi(ctx.mul(half, t))))
    if trace is not None:
        trace.sample(CurveSample(yv, GPoint(x, yv), f"quadratrix({to_text(R)})"))
    return x


def quadratrix_y_of_slope(ctx: Context, m: Expr,
                          trace: Optional[Trace] = None) -> Expr:
    """Height of quadratrix (R=1) meeting the radial line y = m*x: (2/pi) arctan(m)."""
    m = ctx._coerce(m)
    if m.is_rat(0) or _sign_of(m) != 1:
        raise NonPositiveSlope("radial slope must be positive")
    sine = ctx.div(m, ctx.sqrt(ctx.add(1, ctx.mul(m, m))))
    y = ctx.mul(2, ctx.arcsin_over_pi(sine))
    if trace is not None:
        trace.sample(CurveSample(m, GPoint(ctx.div(y, m), y), "quadratrix(1)"))
    return y


def clavius_point(ctx: Context, n: int, trace: Optional[Trace] = None) -> GPoint:
    """Quadratrix point at y = 2^-n reached by n successive compass bisections."""
    if n < 1:
        raise OutOfRange("at least one bisection required")
    y = Fraction(1, 1 << n)
    x = quadratrix_x_of_y(ctx, ctx.rat(y), ctx.rat(1), trace=None)
    p = GPoint(x, ctx.rat(y))
    if trace is not None:
        trace.step("clavius", (str(n),), (to_text(x), str(y)), (("point", p),))
        trace.sample(CurveSample(ctx.rat(y), p, "quadratrix(1)"))
    return p


def spiral_point(ctx: Context, theta: Expr, R: Expr) -> GPoint:
    """Point of the spiral r = a*theta with quarter-turn radius R (a = 2R/pi)."""
    a = ctx.div(ctx.mul(2, R), ctx.pi())
    t = ctx.div(theta, ctx.pi())
    r = ctx.mul(a, theta)
    half = Fraction(1, 2)
    return GPoint(ctx.mul(r, ctx.sin_pi(ctx.sub(half, t))),
                  ctx.mul(r, ctx.sin_pi(t)))


def spiral_secant_cut(ctx: Context, theta0: Expr, h: Expr, R: Expr,
                      trace: Optional[Trace] = None) -> Expr:
    """x-axis intercept of the secant through spiral points at theta0 and theta0 - h.

    As h -> 0 the intercepts approach the tangent cut on the initial tangent
    line; only the secant data is exposed, a tangent is not constructible.
    """
    theta0, h, R = ctx._coerce(theta0), ctx._coerce(h), ctx._coerce(R)
    if h.is_rat(0) or h.eval(96).re.contains_zero():
        raise DegenerateSecant("secant offset encloses 0")
    if _sign_of(h) != 1 or _sign_of(ctx.sub(theta0, h)) != 1:
        raise DegenerateSecant("need 0 < h < theta0")
    p0 = spiral_point(ctx, theta0, R)
    p1 = spiral_point(ctx, ctx.sub(theta0, h), R)
    dy = ctx.sub(p1.y, p0.y)
    cut = ctx.sub(p0.x, ctx.div(ctx.mul(p0.y, ctx.sub(p1.x, p0.x)), dy))
    if trace is not None:
        trace.sample(CurveSample(theta0, p0, f"spiral({to_text(R)})"))
        trace.sample(CurveSample(ctx.sub(theta0, h), p1, f"spiral({to_text(R)})"))
        trace.step("spiral-secant", (to_text(theta0), to_text(h)), (to_text(cut),),
                   (("segment", p0, p1),))
    return cut


@dataclass(frozen=True)
class SpiralProbeReport:
    """Secant-limit study at the quarter turn; reports, never reconciles.

    Two candidate closed forms disagree by a factor of 2 in the classical
    sources: the polar subtangent R*pi/2 and the 'one eighth of the
    circumference' reading pi*R/4. Both are carried with their measured
    discrepancies; the report itself is the deliverable.
    """

    k_range: tuple[int, ...]
    intercepts: tuple[str, ...]
    differences: tuple[str, ...]
    shrink_factors: tuple[float, ...]
    limit_estimate: str
    subtangent: str
    eighth_reading: str
    discrepancy_subtangent: str
    discrepancy_eighth: str
    factor_between_readings: float


def spiral_probe_report(ctx: Context, R: Expr | int = 1, k_min: int = 3,
                        k_max: int = 12, digits: int = 12) -> SpiralProbeReport:
    R = ctx._coerce(R)
    pi = ctx.pi()
    width = Fraction(1, 1 << 64)
    ks = tuple(range(k_min, k_max + 1))
    theta0 = ctx.div(pi, 2)
    vals = []
    for k in ks:
        h = ctx.div(pi, 1 << k)
        cut = spiral_secant_cut(ctx, theta0, h, R)
        vals.append(cut.enclosure(width))
    mids = [v.re.mid().to_fraction() for v in vals]
    diffs = [mids[i + 1] - mids[i] for i in range(len(mids) - 1)]
    shrink = tuple(float(diffs[i] / diffs[i + 1]) for i in range(len(diffs) - 1))
    limit = mids[-1] + (mids[-1] - mids[-2])  # first-order extrapolation
    sub = ctx.div(ctx.mul(R, pi), 2).enclosure(width)
    eighth = ctx.div(ctx.mul(R, pi), 4).enclosure(width)
    sub_mid = sub.re.mid().to_fraction()
    eighth_mid = eighth.re.mid().to_fraction()
    fmt = lambda fr: _fixed(fr, digits)
    return SpiralProbeReport(
        ks,
        tuple(fmt(m) for m in mids),
        tuple(fmt(d) for d in diffs),
        shrink,
        fmt(limit),
        fmt(sub_mid),
        fmt(eighth_mid),
        fmt(abs(limit - sub_mid)),
        fmt(abs(limit - eighth_mid)),
        float(sub_mid / eighth_mid),
    )


def _fixed(fr: Fraction, digits: int) -> str:
    sign = "-" if fr < 0 else ""
    scaled = abs(fr) * 10**digits
    n = int(scaled)
    if scaled - n >= Fraction(1, 2):
        n += 1
    s = str(n).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"
