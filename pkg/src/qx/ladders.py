"""Ladders to exponential-logarithmic numbers: descent, reduction, ascent.

A ladder over base b is a finite sequence of rungs a_1..a_m where each a_k
is algebraic over the preceding field F_{k-1} = Q(a_1..a_k, b^{a_1}..b^{a_k})
or b^{a_k} is. Descent reads the rungs off an expression's exp/log DAG,
reduction removes rungs that are rational-affine combinations of earlier
ones, and ascent records which member of each pair {a_k, b^{a_k}} is the
new transcendental, conditional on the Schanuel conjecture.

Rational dependence is semi-decidable: reduction uses exact rational
decomposition when rungs are explicit rational combinations and falls back
to PSLQ with caller-set bounds; every relation is labeled exact or
heuristic and heuristic ones are re-verified by enclosure at the stated
precision. "No relation found" is never a proof of independence.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

import mpmath
from mpmath import mp

from . import expr as E
from .errors import MaxPrecision, NotReduced, UnsupportedNode
from .expr import Context, Expr
from .interval import CInterval, refine
from .minpoly import Verdict, transcendence_rules

ELEMENT = "element-algebraic"
EXPONENTIAL = "exponential-algebraic"

DEFAULT_MAX_COEFF = 10**6
DEFAULT_PRECISION_BITS = 160


@dataclass(frozen=True)
class Rung:
    value: Expr
    kind: str  # ELEMENT: a_k is algebraic over F_{k-1}; EXPONENTIAL: b^{a_k} is
    witness: str = "structural"


@dataclass(frozen=True)
class Relation:
    """Integer vector (n_0..n_m) with n_0 + sum n_j * a_j = 0 (exactly or heuristically)."""

    coefficients: tuple[int, ...]
    confidence: str  # "exact" | "heuristic"
    precision_bits: Optional[int] = None


@dataclass(frozen=True)
class Removal:
    original_index: int
    rung: Rung
    relation: Relation
    constant: Fraction
    combo: tuple[tuple[int, Fraction], ...]  # (kept-rung index, q_j)
    identity_verified: bool


@dataclass(frozen=True)
class Ladder:
    base: Expr
    rungs: tuple[Rung, ...]
    removals: tuple[Removal, ...] = ()

    def __len__(self):
        return len(self.rungs)


@dataclass(frozen=True)
class AscentReport:
    """Per-rung new transcendental b_k, conditional on the Schanuel conjecture."""

    choices: tuple[Expr, ...]
    kinds: tuple[str, ...]
    degree: int
    conditional: bool
    notes: tuple[str, ...]
    crosschecks: tuple[Optional[Verdict], ...]


def descend(xi: Expr, ctx: Context) -> Ladder:
    """Build a ladder generating xi, rungs in dependency order.

    Natural-base exp/log nodes are not exponential-logarithmic over an
    algebraic base and are rejected (there is no ladder to pi).
    """
    normalized = ctx.rewrite_elprop(ctx.euler_expand(xi))
    rungs: list[Rung] = []
    registered: set[int] = set()
    for node in normalized.walk():
        if node.kind == E.EXP:
            if node.natural:
                raise UnsupportedNode("natural-base exponential has no ladder over an algebraic base")
            value = node.arg
            if id(value) not in registered:
                registered.add(id(value))
                rungs.append(Rung(value, ELEMENT))
        elif node.kind == E.LOG:
            if node.natural:
                raise UnsupportedNode("natural-base logarithm has no ladder over an algebraic base")
            if id(node) not in registered:
                registered.add(id(node))
                rungs.append(Rung(node, EXPONENTIAL))
    return Ladder(ctx.base, tuple(rungs))


# --- rational-affine decomposition -------------------------------------------

def linear_decompose(e: Expr) -> dict:
    """Write e as q_0 + sum q_i * atom_i exactly; atoms keyed by node, None = 1.

    Atoms are content-stripped cores: rational factors are pulled out of
    products and quotients, so 2*x, x*(-3) and -x/2 all share the atom x.
    """
    if e.kind == E.RAT:
        return {None: e.rat}
    if e.kind in (E.ADD, E.SUB):
        left = linear_decompose(e.children[0])
        right = linear_decompose(e.children[1])
        sign = 1 if e.kind == E.ADD else -1
        out = dict(left)
        for key, coef in right.items():
            out[key] = out.get(key, Fraction(0)) + sign * coef
        return {k: v for k, v in out.items() if v != 0} or {None: Fraction(0)}
    content, core = _content_core(e)
    if core is None or content == 0:
        return {None: content}
    if core is not e:
        inner = linear_decompose(core)
        out = {k: v * content for k, v in inner.items() if v * content != 0}
        return out or {None: Fraction(0)}
    return {e: Fraction(1)}


def _content_core(e: Expr):
    """(q, core) with e = q * core exactly, core free of rational factors."""
    if e.kind == E.RAT:
        return e.rat, None
    if e.kind == E.MUL:
        c1, k1 = _content_core(e.children[0])
        c2, k2 = _content_core(e.children[1])
        if k1 is None:
            return c1 * c2, k2
        if k2 is None:
            return c1 * c2, k1
        return c1 * c2, e.ctx.mul(k1, k2)
    if e.kind == E.DIV:
        c1, k1 = _content_core(e.children[0])
        c2, k2 = _content_core(e.children[1])
        if k2 is None:
            return c1 / c2, k1  # denominator is a nonzero rational by construction
        if k1 is None:
            return c1 / c2, e.ctx.div(e.ctx.rat(1), k2)
        return c1 / c2, e.ctx.div(k1, k2)
    return Fraction(1), e


def _nullspace(columns: list[dict]) -> list[list[Fraction]]:
    """Rational nullspace basis of the matrix whose columns are decompositions."""
    keys: list = []
    seen = set()
    for col in columns:
        for k in col:
            marker = id(k) if k is not None else None
            if marker not in seen:
                seen.add(marker)
                keys.append(k)
    rows = [[col.get(k, Fraction(0)) for col in columns] for k in keys]
    n = len(columns)
    # Gaussian elimination to RREF
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        basis.append(vec)
    return basis


def _canonical_int_vector(vec: list[Fraction]) -> tuple[int, ...]:
    lcm = 1
    for v in vec:
        lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    neg = [-v for v in ints]
    return tuple(neg) if neg < ints else tuple(ints)


def detect_relation(values: list[Expr], max_coeff: int = DEFAULT_MAX_COEFF,
                    precision_bits: int = DEFAULT_PRECISION_BITS) -> Optional[Relation]:
    """Integer relation n_0 + sum n_j v_j = 0 within the given bounds, or None.

    Exact relations come from rational-affine structure and are verified in
    rational arithmetic; heuristic ones come from PSLQ and are verified by
    enclosure at the stated precision. None is absence of evidence only.
    """
    exact = _detect_exact(values, max_coeff)
    if exact is not None:
        return exact
    return _detect_pslq(values, max_coeff, precision_bits)


def _detect_exact(values: list[Expr], max_coeff: int) -> Optional[Relation]:
    columns = [{None: Fraction(1)}] + [linear_decompose(v) for v in values]
    basis = _nullspace(columns)
    candidates = []
    for vec in basis:
        ints = _canonical_int_vector(vec)
        if any(ints) and max(abs(v) for v in ints) <= max_coeff:
            candidates.append(ints)
    if not candidates:
        return None
    best = min(candidates, key=lambda v: (max(abs(c) for c in v), v))
    assert _verify_exact(best, values)
    return Relation(best, "exact")


def _verify_exact(coeffs: tuple[int, ...], values: list[Expr]) -> bool:
    total: dict = {None: Fraction(coeffs[0])}
    for n, v in zip(coeffs[1:], values):
        for key, coef in linear_decompose(v).items():
            total[key] = total.get(key, Fraction(0)) + n * coef
    return all(v == 0 for v in total.values())


def _to_mpf(dy) -> mpmath.mpf:
    return mp.make_mpf(dy.to_mpf())


def _detect_pslq(values: list[Expr], max_coeff: int,
                 precision_bits: int) -> Optional[Relation]:
    work = precision_bits + 48
    try:
        encs = [refine(v.eval, Fraction(1, 1 << work)) for v in values]
    except MaxPrecision:
        return None
    res = [e.re.mid() for e in encs]
    ims = [e.im.mid() for e in encs]
    with mp.workprec(work + 32):
        tol = mpmath.mpf(2) ** (-precision_bits)
        candidates = []
        # one PSLQ pass per component; a route needs all entries nonzero,
        # so mixed real/imaginary collections only resolve via the exact path
        if all(not m.is_zero() for m in res):
            try:
                got = mpmath.pslq([mpmath.mpf(1)] + [_to_mpf(m) for m in res],
                                  tol=tol, maxcoeff=max_coeff, maxsteps=2000)
            except ValueError:
                got = None
            if got:
                candidates.append(tuple(got))
        if len(ims) >= 2 and all(not m.is_zero() for m in ims):
            try:
                got = mpmath.pslq([_to_mpf(m) for m in ims],
                                  tol=tol, maxcoeff=max_coeff, maxsteps=2000)
            except ValueError:
                got = None
            if got:
                candidates.append((0, *got))
    for cand in candidates:
        if _verify_heuristic(cand, encs, precision_bits):
            neg = tuple(-c for c in cand)
            return Relation(min(neg, cand), "heuristic", precision_bits)
    return None


def _verify_heuristic(coeffs, encs: list[CInterval], precision_bits: int) -> bool:
    prec = precision_bits + 48
    total = CInterval.from_int(coeffs[0])
    for n, enc in zip(coeffs[1:], encs):
        total = total.add(enc.mul(CInterval.from_int(n), prec), prec)
    bound = Fraction(1, 1 << precision_bits)
    return (abs(total.re.mag().to_fraction()) < bound
            and abs(total.im.mag().to_fraction()) < bound)


# --- reduction -----------------------------------------------------------------

def reduce_ladder(ladder: Ladder, ctx: Context, max_coeff: int = DEFAULT_MAX_COEFF,
                  precision_bits: int = DEFAULT_PRECISION_BITS) -> Ladder:
    """Remove rungs that are rational-affine combinations of earlier kept rungs.

    Lowest index first; each removal stores its relation and the exponential
    identity b^{a_k} = b^q * prod (b^{a_j})^{q_j}, verified by enclosure
    overlap at width 2^-40 (powers read as b^{q_j a_j}, principal values).
    """
    kept: list[Rung] = []
    removals: list[Removal] = list(ladder.removals)
    for index, rung in enumerate(ladder.rungs):
        rel = _relate_to_prefix([r.value for r in kept], rung.value,
                                max_coeff, precision_bits)
        if rel is None:
            kept.append(rung)
            continue
        constant, combo = _solve_combo(rel, len(kept))
        verified = _verify_removal_identity(ctx, ladder.base, rung.value,
                                            constant, combo, kept)
        removals.append(Removal(index, rung, rel, constant, tuple(combo), verified))
    return Ladder(ladder.base, tuple(kept), tuple(removals))


def _relate_to_prefix(prefix: list[Expr], value: Expr, max_coeff: int,
                      precision_bits: int) -> Optional[Relation]:
    rel = detect_relation(prefix + [value], max_coeff, precision_bits)
    if rel is None or rel.coefficients[-1] == 0:
        return None
    return rel


def _solve_combo(rel: Relation, kept_count: int):
    ns = rel.coefficients
    nk = ns[-1]
    constant = Fraction(-ns[0], nk)
    combo = [(j, Fraction(-ns[j + 1], nk)) for j in range(kept_count) if ns[j + 1]]
    return constant, combo


def _verify_removal_identity(ctx: Context, base: Expr, a_k: Expr, q: Fraction,
                             combo, kept: list[Rung]) -> bool:
    lhs = ctx.exp(base, a_k)
    rhs = ctx.exp(base, ctx.rat(q))
    for j, qj in combo:
        rhs = ctx.mul(rhs, ctx.exp(base, ctx.mul(ctx.rat(qj), kept[j].value)))
    width = Fraction(1, 1 << 40)
    try:
        left = lhs.enclosure(width)
        right = rhs.enclosure(width)
    except MaxPrecision:
        return False
    return left.intersects(right)


# --- ascent ----------------------------------------------------------------------

def ascend(ladder: Ladder, ctx: Context) -> AscentReport:
    """Schanuel-conditional bookkeeping: exactly one new transcendental per rung.

    ELEMENT rungs (a_k algebraic over F_{k-1}) contribute b^{a_k}; EXPONENTIAL
    rungs contribute a_k itself. The report is always conditional; per-rung
    unconditional verdicts from the rule base are attached as cross-checks.
    """
    values = [r.value for r in ladder.rungs]
    if values:
        stored = _detect_exact(values, DEFAULT_MAX_COEFF)
        if stored is not None:
            raise NotReduced(f"rational relation {stored.coefficients} persists among rungs")
    choices = []
    kinds = []
    crosschecks = []
    for rung in ladder.rungs:
        if rung.kind == ELEMENT:
            chosen = ctx.exp(ladder.base, rung.value)
        else:
            chosen = rung.value
        choices.append(chosen)
        kinds.append(rung.kind)
        verdict = transcendence_rules(chosen)
        crosschecks.append(verdict if verdict.status == "transcendental" else None)
    notes = ["conditional on the Schanuel conjecture",
             "ln(base) is not in the algebraic closure of F_m"]
    if not ladder.rungs and ladder.base.is_rat(-1):
        notes.append("empty ladder: ln(-1) = i*pi is not algebraic, unconditionally (Lindemann)")
    return AscentReport(tuple(choices), tuple(kinds), len(ladder.rungs), True,
                        tuple(notes), tuple(crosschecks))
