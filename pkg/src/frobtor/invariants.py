"""Socle/colon ideals, the c invariant, depth and regular sequences.

Everything here is small linear algebra over the standard-monomial basis:
(0 : J) is the kernel of stacked multiplication matrices, regularity of y
is injectivity of multiplication by y on a degree window, and depth is
found by greedily extending a sequence of linear forms through successive
quotients.  On capped (non-Artinian) algebras each answer is recomputed on
the cap-(2D-2) twin; disagreement raises CapUnstable rather than letting a
truncation artifact leak into a reported invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from . import linalg
from .errors import CapUnstable, NotRegular, PositiveDepth
from .ringkit import (
    RingElement,
    RingPresentation,
    build_algebra,
    monomials_of_degree,
    poly_freeze,
)


def _as_element(algebra, e):
    if isinstance(e, RingElement):
        if e.algebra is algebra:
            return e
        return algebra.nf(dict(e.terms))
    return algebra.nf(dict(e))


# ---------------------------------------------------------------------------
# colon ideals
# ---------------------------------------------------------------------------


def _colon_once(algebra, gens):
    """Kernel basis of the stacked multiplication maps, plus trust window."""
    gens = [g for g in gens if not g.is_zero]
    s = algebra.dim
    if not gens:
        vectors = [np.eye(s, dtype=np.int64)[i] for i in range(s)]
        window = None
        return vectors, window
    stacked = np.vstack([algebra.mult_operator(g) for g in gens])
    ker = linalg.kernel_basis(stacked, algebra.p)
    vectors = [ker[:, t].astype(np.int64) for t in range(ker.shape[1])]
    if algebra.artinian:
        return vectors, None
    window = algebra.cap - max(g.degree() for g in gens)
    deg = algebra.std_degrees
    kept = []
    for v in vectors:
        nz = np.nonzero(v)[0]
        if all(int(deg[i]) < window for i in nz):
            kept.append(v)
    return kept, window


def _canonical_span(vectors, ncols, p):
    if not vectors:
        return np.zeros((0, ncols), dtype=np.int8)
    r, pivots = linalg.rref(np.stack(vectors), p)
    return r[: len(pivots)]


def colon_into_zero(algebra, gens):
    """k-basis of (0 : J) = { a in R : a g = 0 for every generator g }.

    On capped algebras, kernel vectors reaching into the top degrees (cap
    artifacts like y^(D-1) "annihilating" y when y^D is truncated away) are
    filtered by a trust window, and the remainder must agree with the
    cap-(2D-2) twin, else CapUnstable.
    """
    gens = [_as_element(algebra, g) for g in gens]
    vectors, window = _colon_once(algebra, gens)
    if not algebra.artinian and window is not None:
        big = algebra.verification_algebra()
        gens_big = [_as_element(big, g) for g in gens]
        vectors_big, _ = _colon_once(big, gens_big)
        # compare the spans inside the smaller trust window; small std
        # monomials are a prefix of the big ones, so truncation is a slice
        deg_big = big.std_degrees
        in_window = []
        for v in vectors_big:
            nz = np.nonzero(v)[0]
            if all(int(deg_big[i]) < window for i in nz):
                in_window.append(v[: algebra.dim])
        a = _canonical_span(vectors, algebra.dim, algebra.p)
        b = _canonical_span(in_window, algebra.dim, algebra.p)
        if a.shape != b.shape or (a != b).any():
            raise CapUnstable(
                f"(0:J) changed between cap {algebra.cap} and cap {big.cap}"
            )
    return [algebra.from_vector((v % algebra.p).astype(np.int8)) for v in vectors]


def socle_basis(algebra):
    """k-basis of the socle (0 : m)."""
    return colon_into_zero(algebra, algebra.gens())


# ---------------------------------------------------------------------------
# condition (1): annihilator of m^p escapes m^p
# ---------------------------------------------------------------------------


def _m_power_generators(algebra, s):
    return [algebra.nf({m: 1}) for m in monomials_of_degree(algebra.n, s)]


def condition1(algebra):
    """Does (0 : m^p) contain an element outside m^p?

    For fields the question degenerates (m = 0); they report False — see
    condition1_note for the explanation string.
    """
    if algebra.is_field():
        return False
    p = algebra.p
    basis = colon_into_zero(algebra, _m_power_generators(algebra, p))
    return any(not algebra.in_m_power(e, p) for e in basis)


def condition1_note(algebra):
    if algebra.is_field():
        return "regular ring: the socle test degenerates, reported false"
    return None


# ---------------------------------------------------------------------------
# the c invariant
# ---------------------------------------------------------------------------


def c_invariant(algebra):
    """Least s >= 1 such that the socle is not contained in m^s.

    Raises PositiveDepth when the socle is zero (after stabilization),
    since then no such s exists.
    """
    basis = socle_basis(algebra)
    if not basis:
        raise PositiveDepth("the socle is zero: no annihilator witness exists")
    s = 1
    while s <= algebra.cap:
        if not all(algebra.in_m_power(e, s) for e in basis):
            return s
        s += 1
    raise CapUnstable(f"socle stays inside m^{algebra.cap}: cap too small")


def min_r_threshold(c, p):
    """Least r >= 1 with p^r > c."""
    if c < 1:
        raise ValueError(f"c must be positive, got {c}")
    r = 1
    power = p
    while power <= c:
        power *= p
        r += 1
    return r


# ---------------------------------------------------------------------------
# regular elements, depth, quotients
# ---------------------------------------------------------------------------


def _injective_on_window(algebra, y):
    op = algebra.mult_operator(y)
    if algebra.artinian:
        cols = np.arange(algebra.dim)
    else:
        window = algebra.cap - max(y.degree(), 0)
        cols = np.nonzero(algebra.std_degrees < window)[0]
    if cols.size == 0:
        return True
    return linalg.rank(op[:, cols], algebra.p) == cols.size


def is_regular(algebra, y):
    """Is multiplication by y injective (y a nonzerodivisor)?

    Tested on the degree-< D - deg(y) truncation; torsion found there is
    genuine (the products involved never reach the cap).  A clean window
    must be confirmed by the cap-(2D-2) twin, else CapUnstable.
    """
    y = _as_element(algebra, y)
    if y.is_unit():
        raise ValueError("units are not interesting here: pass an element of m")
    if y.is_zero:
        return False
    if not _injective_on_window(algebra, y):
        return False
    if algebra.artinian:
        return True
    big = algebra.verification_algebra()
    if not _injective_on_window(big, _as_element(big, y)):
        raise CapUnstable(
            f"multiplication by {y!r} looks injective at cap {algebra.cap} "
            f"but has torsion at cap {big.cap}"
        )
    return True


def _quotient_by(algebra, y):
    pres = algebra.presentation
    new = RingPresentation(
        p=pres.p,
        variables=pres.variables,
        relations=pres.relations + (poly_freeze(y.terms),),
        cap=pres.cap,
        modules=(),
    )
    return build_algebra(new)


def _linear_candidates(algebra):
    """Nonzero linear forms with first nonzero coefficient 1, fixed order."""
    n, p = algebra.n, algebra.p
    for coeffs in product(range(p), repeat=n):
        if not any(coeffs):
            continue
        lead = next(c for c in coeffs if c)
        if lead != 1:
            continue
        poly = {}
        for i, c in enumerate(coeffs):
            if c:
                exp = [0] * n
                exp[i] = 1
                poly[tuple(exp)] = c
        yield poly


def _greedy_sequence(algebra, d_max):
    seq = []  # raw linear-form dicts
    current = algebra
    while len(seq) < d_max:
        found = None
        for cand in _linear_candidates(current):
            e = current.nf(dict(cand))
            if e.is_zero:
                continue
            if is_regular(current, e):
                found = cand
                break
        if found is None:
            break
        seq.append(found)
        current = _quotient_by(current, current.nf(dict(found)))
    return seq, current


def find_regular_sequence(algebra, d_max=None):
    """A maximal regular sequence of linear forms, found greedily.

    Each candidate is tested on the successive quotient; the returned
    elements live in the original algebra.  An empty list means depth 0
    (at least among linear forms, which suffices for the bundled corpus).
    """
    if d_max is None:
        d_max = algebra.n
    seq, _ = _greedy_sequence(algebra, d_max)
    return [algebra.nf(dict(c)) for c in seq]


def depth(algebra):
    return len(find_regular_sequence(algebra))


def reduce_regular(algebra, ys):
    """The quotient R/(y_1..y_d) for a checked regular sequence.

    Each y_i must be regular on R/(y_1..y_{i-1}), else NotRegular.  The
    quotient keeps the requested cap of the original presentation.
    """
    current = algebra
    for y in ys:
        e = _as_element(current, y)
        if not is_regular(current, e):
            raise NotRegular(f"{e!r} is a zerodivisor on the current quotient")
        current = _quotient_by(current, e)
    return current


# ---------------------------------------------------------------------------
# the assembled report
# ---------------------------------------------------------------------------


@dataclass
class InvariantReport:
    ring: str
    p: int
    artinian: bool
    graded: bool
    length: Optional[int]
    m_nilpotency: Optional[int]
    socle_dim: int
    socle: list = field(default_factory=list)
    condition1: bool = False
    note: Optional[str] = None
    depth: int = 0
    regular_sequence: list = field(default_factory=list)
    c: Optional[int] = None
    c_y: Optional[int] = None
    r_threshold: Optional[int] = None

    def to_dict(self):
        return {
            "ring": self.ring,
            "p": self.p,
            "artinian": self.artinian,
            "graded": self.graded,
            "length": self.length,
            "m_nilpotency": self.m_nilpotency,
            "socle_dim": self.socle_dim,
            "socle": list(self.socle),
            "condition1": self.condition1,
            "note": self.note,
            "depth": self.depth,
            "regular_sequence": list(self.regular_sequence),
            "c": self.c,
            "c_y": self.c_y,
            "r_threshold": self.r_threshold,
        }

    def to_text(self):
        def show(v):
            return "-" if v is None else str(v)

        lines = [
            f"ring:             {self.ring}",
            f"characteristic:   {self.p}",
            f"artinian:         {self.artinian}",
            f"graded:           {self.graded}",
            f"length:           {show(self.length)}",
            f"m-nilpotency:     {show(self.m_nilpotency)}",
            f"socle dimension:  {self.socle_dim}",
            f"socle basis:      {', '.join(self.socle) if self.socle else '-'}",
            f"condition (1):    {self.condition1}",
            f"depth:            {self.depth}",
            f"regular sequence: "
            f"{', '.join(self.regular_sequence) if self.regular_sequence else '-'}",
            f"c:                {show(self.c)}",
            f"c_y:              {show(self.c_y)}",
            f"r threshold:      {show(self.r_threshold)}",
        ]
        if self.note:
            lines.append(f"note: {self.note}")
        return "\n".join(lines) + "\n"


def m_nilpotency(algebra):
    """Least t with m^t = 0, or None when m is not nilpotent."""
    if not algebra.artinian:
        return None
    t = 1
    while t <= algebra.dim + 1:
        if all(algebra.nf({m: 1}).is_zero
               for m in monomials_of_degree(algebra.n, t)):
            return t
        t += 1
    return None  # pragma: no cover - artinian m is always nilpotent


def full_report(algebra):
    """Everything the `check` command prints, in one pass."""
    socle = socle_basis(algebra)
    cond = condition1(algebra)
    seq = find_regular_sequence(algebra)
    d = len(seq)
    c = c_y = None
    if d == 0:
        c = c_invariant(algebra) if socle else None
        threshold = min_r_threshold(c, algebra.p) if c is not None else None
    else:
        reduced = reduce_regular(algebra, seq)
        c_y = c_invariant(reduced)
        threshold = min_r_threshold(c_y, algebra.p)
    return InvariantReport(
        ring=repr(algebra),
        p=algebra.p,
        artinian=algebra.artinian,
        graded=algebra.graded,
        length=algebra.dim if algebra.artinian else None,
        m_nilpotency=m_nilpotency(algebra),
        socle_dim=len(socle),
        socle=[repr(e) for e in socle],
        condition1=cond,
        note=condition1_note(algebra),
        depth=d,
        regular_sequence=[repr(e) for e in seq],
        c=c,
        c_y=c_y,
        r_threshold=threshold,
    )
