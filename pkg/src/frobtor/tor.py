"""Frobenius-twisted Tor: twisting complexes, homology lengths, Tor tables.

The r-fold twist of a free complex raises every differential entry to its
p^r-th power.  Since a -> a^(p^r) is a ring endomorphism in characteristic
p, the twist of a complex is again a complex, and the homology of the
twisted minimal resolution of M computes Tor_j of M against R carrying the
r-fold Frobenius module structure.

Homology lengths are F_p dimensions (the residue field here is F_p, so
length = dimension).  On capped algebras each value is assembled from a
trusted-degree window and re-checked on the cap-(2D-2) twin:

    v1 = trusted window at cap D
    v2 = the same window at cap 2D-2
    v3 = the full (wider) trusted window at cap 2D-2

v1 = v2 = v3 reports the exact value; v1 = v2 < v3 reports INFINITE (new
classes keep entering as the window widens, the Tor_0 behaviour of a
positive-dimensional module); anything else reports UNSTABLE.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from . import invariants as invariants_mod
from . import linalg
from .errors import (
    CapTooSmall,
    CapUnstable,
    ContainmentViolation,
    NotApplicable,
    NotArtinian,
    PositiveDepth,
)
from .ringkit import frob_power, poly_degree
from .resolve import (
    FreeComplex,
    ModulePresentation,
    expand_matrix,
    graded_block,
    layer_coords,
    matrix_shape,
    minimal_free_resolution,
    minimal_generators,
    vector_from_dense,
)

INFINITE = "INFINITE"
UNSTABLE = "UNSTABLE"

#: JSON/text spelling of the markers (exact values stay ints).
_MARKER_OUT = {INFINITE: "INF", UNSTABLE: "UNSTABLE"}


def _marker_out(value):
    return _MARKER_OUT.get(value, value)


# ---------------------------------------------------------------------------
# twisting
# ---------------------------------------------------------------------------


def _max_relation_degree(algebra):
    return max((poly_degree(dict(rel)) for rel in algebra.presentation.relations),
               default=0)


def require_twist_cap(algebra, r):
    """Capped algebras must keep p^r-th powers of the relations visible."""
    if algebra.artinian:
        return
    need = algebra.p ** r * _max_relation_degree(algebra) + 2
    if algebra.cap < need:
        raise CapTooSmall(
            f"cap {algebra.cap} too small for twist r={r}: need at least {need}"
        )


def _twist_entry(algebra, e, r):
    """frob_power with an algebra-level memo (matrix entries repeat a lot)."""
    cache = getattr(algebra, "_twist_cache", None)
    if cache is None:
        cache = algebra._twist_cache = {}
    key = (e.freeze(), r)
    hit = cache.get(key)
    if hit is None:
        hit = cache[key] = frob_power(e, r)
    return hit


def twist(complex_, r):
    """Entrywise p^r-th power of every differential.

    Degree shifts scale by p^r; minimality is preserved because the new
    entries land in m^(p^r).  The verification twin, when present, is
    twisted alongside.
    """
    if r < 1:
        raise ValueError(f"twist exponent must be >= 1, got {r}")
    algebra = complex_.algebra
    require_twist_cap(algebra, r)
    q = algebra.p ** r
    diffs = [[[_twist_entry(algebra, e, r) for e in row] for row in d]
             for d in complex_.differentials]
    shifts = None
    if complex_.shifts is not None:
        shifts = [[q * s for s in stage] for stage in complex_.shifts]
    out = FreeComplex(algebra, diffs, l0=complex_.ranks[0], shifts=shifts,
                      stable=list(complex_.stable))
    if complex_.twin is not None:
        out.twin = twist(complex_.twin, r)
    return out


# ---------------------------------------------------------------------------
# homology of a free complex
# ---------------------------------------------------------------------------


def _caches(complex_):
    """Per-complex memo for graded blocks and their ranks."""
    cache = getattr(complex_, "_homology_cache", None)
    if cache is None:
        cache = complex_._homology_cache = {"block": {}, "rank": {}}
    return cache


def _block_of(algebra, complex_, n, delta, cache):
    """Degree-delta block of d_n; a rank-0 stage yields an empty block."""
    key = (n, delta)
    hit = cache["block"].get(key)
    if hit is not None:
        return hit
    shifts = complex_.shifts
    src = shifts[n]
    tgt = shifts[n - 1]
    if not src:
        _, nrows = layer_coords(algebra, tgt, delta)
        a = np.zeros((nrows, 0), dtype=np.int8)
    else:
        a, _, _, _, _ = graded_block(algebra, complex_.differentials[n - 1],
                                     tgt, src, delta)
    cache["block"][key] = a
    return a


def _rank_of(algebra, complex_, n, delta, cache):
    key = (n, delta)
    hit = cache["rank"].get(key)
    if hit is None:
        block = _block_of(algebra, complex_, n, delta, cache)
        hit = cache["rank"][key] = linalg.rank(block, algebra.p)
    return hit


def _graded_homology_by_degree(complex_, j, degrees):
    """{delta: dim of H_j in total degree delta} from per-degree blocks.

    Blocks and ranks are cached on the complex, so consecutive homology
    stages share the work on their common differential.
    """
    algebra = complex_.algebra
    shifts = complex_.shifts
    cache = _caches(complex_)
    out = {}
    for delta in degrees:
        _, n_mid = layer_coords(algebra, shifts[j], delta)
        if n_mid == 0:
            out[delta] = 0
            continue
        rank_in = _rank_of(algebra, complex_, j, delta, cache) if j else 0
        if j + 1 > complex_.length:
            rank_out = 0
        else:
            rank_out = _rank_of(algebra, complex_, j + 1, delta, cache)
            if j and rank_out and (j, delta) not in cache.setdefault("ok", set()):
                a = _block_of(algebra, complex_, j, delta, cache)
                b = _block_of(algebra, complex_, j + 1, delta, cache)
                if not linalg.matmul_is_zero(a, b, algebra.p):
                    raise ContainmentViolation(
                        f"graded blocks of d_{j} . d_{j + 1} at degree "
                        f"{delta} do not compose to zero")
                cache["ok"].add((j, delta))
        out[delta] = n_mid - rank_in - rank_out
    return out


def _trust_top(algebra, complex_, j):
    """First untrusted total degree for H_j of a graded complex.

    The kernel of d_j is exact below cap + min-shift(F_{j-1}), the image
    of d_{j+1} is complete below cap + min-shift(F_{j+1}), and the F_j
    coordinates themselves are complete below cap + min-shift(F_j).
    Shifts only grow along a minimal complex, so the binding constraint
    is normally F_{j-1} (or F_j itself when j = 0).
    """
    shifts = complex_.shifts
    mins = []
    for stage in (shifts[j - 1] if j >= 1 else None, shifts[j],
                  shifts[j + 1] if j + 1 < len(shifts) else None):
        if stage:
            mins.append(min(stage))
    if not mins:
        return algebra.cap
    return algebra.cap + min(mins)


def _dense_homology(complex_, j):
    algebra = complex_.algebra
    s = algebra.dim
    if j == 0:
        a = np.zeros((0, complex_.ranks[0] * s), dtype=np.int8)
    else:
        a = expand_matrix(algebra, complex_.differentials[j - 1])
    if j == complex_.length:
        b = np.zeros((complex_.ranks[j] * s, 0), dtype=np.int8)
    else:
        b = expand_matrix(algebra, complex_.differentials[j])
    return linalg.quotient_dim(a, b, algebra.p)


def _ensure_twin(complex_):
    if complex_.twin is not None:
        return complex_.twin
    algebra = complex_.algebra
    big = algebra.verification_algebra()
    diffs = [[[big.nf(dict(e.terms)) for e in row] for row in d]
             for d in complex_.differentials]
    complex_.twin = FreeComplex(big, diffs, l0=complex_.ranks[0],
                                shifts=complex_.shifts)
    return complex_.twin


def _truncated_terms(e, cap):
    return {m: c for m, c in e.terms.items() if sum(m) < cap}


def _stage_agrees(complex_, twin, n):
    """Do d_n's entries at the two caps agree below the small cap?

    When they do, the degree-delta blocks of the two expansions are the
    same matrices for every delta inside the small trust window, because
    all contributing monomials and normal forms live below the cap.
    """
    cache = _caches(complex_).setdefault("agree", {})
    hit = cache.get(n)
    if hit is not None:
        return hit
    cap = complex_.algebra.cap
    ok = True
    small_d = complex_.differentials[n - 1]
    big_d = twin.differentials[n - 1]
    for row_s, row_b in zip(small_d, big_d):
        for e_s, e_b in zip(row_s, row_b):
            if _truncated_terms(e_s, cap) != _truncated_terms(e_b, cap):
                ok = False
                break
        if not ok:
            break
    cache[n] = ok
    return ok


def _window_agrees(complex_, twin, j):
    for n in (j, j + 1):
        if 1 <= n <= complex_.length and not _stage_agrees(complex_, twin, n):
            return False
    return True


def homology_length(complex_, j):
    """Length of H_j = ker(d_j)/im(d_{j+1}), with d_0 the zero map.

    Returns an exact integer when certified, otherwise the INFINITE or
    UNSTABLE marker string.  At j = length the incoming differential is
    the zero map, so the answer is the length of the full kernel.
    """
    if j < 0 or j > complex_.length:
        raise ValueError(f"need 0 <= j <= {complex_.length}, got {j}")
    algebra = complex_.algebra
    if complex_.ranks[j] == 0:
        return 0
    if algebra.artinian:
        if complex_.shifts is not None:
            lo = min(complex_.shifts[j])
            hi = max(complex_.shifts[j]) + algebra.top_degree + 1
            return sum(_graded_homology_by_degree(
                complex_, j, range(lo, hi)).values())
        return _dense_homology(complex_, j)
    twin = _ensure_twin(complex_)
    if complex_.shifts is not None:
        if not _window_agrees(complex_, twin, j):
            return UNSTABLE
        t_small = _trust_top(algebra, complex_, j)
        t_big = _trust_top(twin.algebra, twin, j)
        lo = min(complex_.shifts[j])
        small = _graded_homology_by_degree(complex_, j, range(lo, t_small))
        v1 = sum(small.values())
        # The stage-agreement check above makes the twin's blocks below
        # t_small the same matrices as the cap-D ones, so the re-count at
        # the wider cap only has to cover the extension of the window.
        tail = _graded_homology_by_degree(twin, j, range(t_small, t_big))
        v3 = v1 + sum(tail.values())
        if v3 == v1:
            return v1
        return INFINITE
    # ungraded fallback: raw dimensions at the two caps
    v1 = _dense_homology(complex_, j)
    v2 = _dense_homology(twin, j)
    if v1 == v2:
        return v1
    if v2 > v1:
        return INFINITE
    return UNSTABLE


# ---------------------------------------------------------------------------
# cached per-algebra profile feeding the tables and probes
# ---------------------------------------------------------------------------


def algebra_profile(algebra):
    """Condition-(1) flag, depth, c after reduction, twist threshold."""
    prof = getattr(algebra, "_tor_profile", None)
    if prof is not None:
        return prof
    prof = {
        "condition1": invariants_mod.condition1(algebra),
        "nilpotency": invariants_mod.m_nilpotency(algebra),
        "length": algebra.dim if algebra.artinian else None,
    }
    seq = invariants_mod.find_regular_sequence(algebra)
    prof["depth"] = len(seq)
    prof["sequence"] = seq
    try:
        if prof["depth"] == 0:
            prof["c"] = invariants_mod.c_invariant(algebra)
        else:
            reduced = invariants_mod.reduce_regular(algebra, seq)
            prof["c"] = invariants_mod.c_invariant(reduced)
    except (PositiveDepth, CapUnstable):
        prof["c"] = None
    prof["r_threshold"] = (invariants_mod.min_r_threshold(prof["c"], algebra.p)
                           if prof["c"] else None)
    algebra._tor_profile = prof
    return prof


def zero_twist_certificate(algebra, r):
    """m^(p^r) = 0 makes every twisted differential vanish identically."""
    if not algebra.artinian:
        return False
    nil = algebra_profile(algebra)["nilpotency"]
    return nil is not None and algebra.p ** r >= nil


# ---------------------------------------------------------------------------
# Tor tables
# ---------------------------------------------------------------------------


@dataclass
class TorRow:
    j: int
    length: Union[int, str]
    betti: int
    ratio: Optional[float] = None

    def to_dict(self):
        d = {"j": self.j, "length": _marker_out(self.length),
             "betti": self.betti}
        if self.ratio is not None:
            d["ratio"] = self.ratio
        return d


@dataclass
class TorTable:
    module: str
    ring: str
    r: int
    rows: List[TorRow] = field(default_factory=list)
    verdicts: List[str] = field(default_factory=list)

    def lengths(self):
        return [row.length for row in self.rows]

    def betti(self):
        return [row.betti for row in self.rows]

    def to_dict(self):
        return {
            "module": self.module,
            "r": self.r,
            "rows": [row.to_dict() for row in self.rows],
            "verdicts": list(self.verdicts),
        }

    def to_text(self):
        lines = [f"ring:   {self.ring}",
                 f"module: {self.module}",
                 f"twist:  r = {self.r}",
                 "",
                 f"{'j':>3}  {'length':>8}  {'betti':>6}  {'ratio':>6}"]
        for row in self.rows:
            ratio = "-" if row.ratio is None else f"{row.ratio:g}"
            lines.append(f"{row.j:>3}  {str(_marker_out(row.length)):>8}  "
                         f"{row.betti:>6}  {ratio:>6}")
        for v in self.verdicts:
            lines.append(f"* {v}")
        return "\n".join(lines) + "\n"


def _module_label(pres):
    label = getattr(pres, "name", None)
    if label:
        return label
    return f"coker({pres.g}x{pres.h})"


def _ratio_of(length, betti):
    if not isinstance(length, int) or betti == 0:
        return None
    q, rem = divmod(length, betti)
    return q if rem == 0 else length / betti


def tor_frobenius(pres, r, n):
    """Table of Tor_j lengths for j = 0..n, plus Betti and ratio rows.

    Markers are recorded per entry and never abort the table; rows that
    depend on an unstable resolution stage are marked UNSTABLE.  Tables
    are memoized per (presentation, r, n) on the algebra.
    """
    algebra = pres.algebra
    require_twist_cap(algebra, r)
    cache = getattr(algebra, "_tor_table_cache", None)
    if cache is None:
        cache = algebra._tor_table_cache = {}
    key = (pres.freeze(), r, n, _module_label(pres))
    hit = cache.get(key)
    if hit is not None:
        return hit
    table = cache[key] = _tor_frobenius_table(pres, r, n)
    return table


def _tor_frobenius_table(pres, r, n):
    algebra = pres.algebra
    table = TorTable(module=_module_label(pres), ring=repr(algebra), r=r)
    if zero_twist_certificate(algebra, r):
        # every twisted differential is the zero matrix, so H_j = R^(l_j)
        res = minimal_free_resolution(pres, n, strict=False)
        length = algebra.dim
        for j in range(n + 1):
            value = res.ranks[j] * length
            table.rows.append(TorRow(j, value, res.ranks[j],
                                     _ratio_of(value, res.ranks[j])))
        table.verdicts.append(
            f"zero-twist certificate: m^(p^r) = 0, so every length is "
            f"betti * {length}")
        return table
    res = minimal_free_resolution(pres, n + 1, strict=False)
    tw = twist(res, r)
    for j in range(n + 1):
        # H_j consumes d_j and d_{j+1}: stages up to j+1 must be stable
        if not all(res.stable[: min(j + 1, len(res.stable))]):
            value = UNSTABLE
        else:
            value = homology_length(tw, j)
        table.rows.append(TorRow(j, value, res.ranks[j],
                                 _ratio_of(value, res.ranks[j])))
    if not all(res.stable):
        first = res.stable.index(False)
        table.verdicts.append(
            f"resolution unstable from stage {first + 1}: increase the cap")
    return table


# ---------------------------------------------------------------------------
# rigidity probe
# ---------------------------------------------------------------------------


@dataclass
class RigidityReport:
    module: str
    ring: str
    r: int
    table: TorTable
    first_vanishing: Optional[int]
    later_nonvanishing: Optional[int]
    free: bool
    flagged: bool
    verdicts: List[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "module": self.module,
            "r": self.r,
            "first_vanishing": self.first_vanishing,
            "later_nonvanishing": self.later_nonvanishing,
            "free": self.free,
            "flagged": self.flagged,
            "verdicts": list(self.verdicts),
            "table": self.table.to_dict(),
        }

    def to_text(self):
        lines = [self.table.to_text().rstrip(), ""]
        lines.append(f"first vanishing j >= 1: {self.first_vanishing}")
        lines.append(f"later nonvanishing:     {self.later_nonvanishing}")
        lines.append(f"free module:            {self.free}")
        lines.append(f"flagged:                {self.flagged}")
        for v in self.verdicts:
            lines.append(f"* {v}")
        return "\n".join(lines) + "\n"


def _is_nonzero(value):
    return value == INFINITE or (isinstance(value, int) and value > 0)


def rigidity_probe(pres, r, n):
    """Vanishing pattern of Tor_j (j >= 1) against the structural facts.

    Over a ring where the annihilator of m^p escapes m^p, any vanishing
    Tor_j (j >= 1) forces freeness; with positive depth and p^r past the
    c-threshold, a vanishing with infinite projective dimension must be
    followed by a later nonvanishing.  A window of depth+1 consecutive
    vanishings forces finite projective dimension.  A flagged report means
    the computed data contradicts one of these, which in a correct engine
    indicates a bug -- tests treat flags as failures.
    """
    algebra = pres.algebra
    table = tor_frobenius(pres, r, n)
    prof = algebra_profile(algebra)
    free = pres.is_free()
    vanishing = [row.j for row in table.rows
                 if row.j >= 1 and row.length == 0]
    first = vanishing[0] if vanishing else None
    later = None
    if first is not None:
        for row in table.rows:
            if row.j > first and _is_nonzero(row.length):
                later = row.j
                break
    pd_finite = free or any(b == 0 for b in table.betti()[1:])
    verdicts = []
    flagged = False

    if prof["condition1"]:
        if first is not None and not free:
            flagged = True
            verdicts.append(
                f"FLAG: Tor_{first} = 0 over an annihilator-escape ring, "
                f"but the module is not free")
        else:
            verdicts.append(
                "annihilator-escape ring: vanishing pattern consistent "
                "(vanishing only for free modules)")

    threshold = prof["r_threshold"]
    if prof["depth"] > 0 and threshold is not None and r >= threshold:
        if first is None or pd_finite or later is not None:
            verdicts.append(
                "positive depth, twist past the c-threshold: pattern "
                "consistent")
        else:
            # every entry after `first` vanished; conclusive only if the
            # vanishing tail is longer than the depth window
            tail = [row.length for row in table.rows if row.j > first]
            if len(tail) > prof["depth"]:
                flagged = True
                verdicts.append(
                    f"FLAG: Tor_{first} = 0 with infinite projective "
                    f"dimension and no later nonvanishing up to N={n}")
            else:
                verdicts.append(
                    f"inconclusive: vanishing at j={first} too close to "
                    f"N={n} to demand a later nonvanishing")

    # depth+1 consecutive vanishings force finite projective dimension
    window = prof["depth"] + 1
    run, window_at = 0, None
    for row in table.rows:
        if row.j < 1:
            continue
        if row.length == 0:
            run += 1
            if run >= window:
                window_at = row.j - window + 1
                break
        else:
            run = 0
    if window_at is not None:
        if pd_finite:
            verdicts.append(
                f"window of {window} consecutive vanishings from "
                f"j={window_at}: finite projective dimension confirmed")
        else:
            flagged = True
            verdicts.append(
                f"FLAG: {window} consecutive vanishings from j={window_at} "
                f"but the resolution never terminates in range")

    return RigidityReport(
        module=table.module, ring=table.ring, r=r, table=table,
        first_vanishing=first, later_nonvanishing=later, free=free,
        flagged=flagged, verdicts=verdicts,
    )


# ---------------------------------------------------------------------------
# ratio report
# ---------------------------------------------------------------------------


@dataclass
class RatioReport:
    module: str
    ring: str
    r: int
    ratios: List[Optional[float]]
    verdict: Optional[str]
    table: TorTable

    def to_dict(self):
        return {
            "module": self.module,
            "r": self.r,
            "ratios": list(self.ratios),
            "verdict": self.verdict,
            "table": self.table.to_dict(),
        }

    def to_text(self):
        lines = [self.table.to_text().rstrip(), ""]
        lines.append("ratios (length / betti): "
                     + ", ".join("-" if x is None else f"{x:g}"
                                 for x in self.ratios))
        if self.verdict:
            lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def ratio_report(pres, r, n):
    """Length-to-Betti ratios, with the exact-constancy verdict when m^p = 0.

    Raises NotApplicable for modules of finite projective dimension: the
    ratios are undefined past pd.
    """
    algebra = pres.algebra
    table = tor_frobenius(pres, r, n)
    if pres.is_free() or any(b == 0 for b in table.betti()[1:]):
        raise NotApplicable(
            "finite projective dimension: ratios undefined past pd")
    ratios = [row.ratio for row in table.rows]
    verdict = None
    if zero_twist_certificate(algebra, 1):
        length = algebra.dim
        if all(x == length for x in ratios[1:]):
            verdict = f"constant = length(R) = {length}"
    return RatioReport(module=table.module, ring=table.ring, r=r,
                       ratios=ratios, verdict=verdict, table=table)


# ---------------------------------------------------------------------------
# balance oracle: resolve the twisted-structure module on the other side
# ---------------------------------------------------------------------------


def frobenius_module_presentation(algebra, r):
    """R with the a.b = a^(p^r) b action, as an explicit finite presentation.

    The underlying k-space is R itself; the variable x_i acts as
    multiplication by x_i^(p^r).  Minimal generators are basis vectors
    spanning V/mV; the relations minimally generate the kernel of the
    induced surjection R^g -> V.
    """
    if not algebra.artinian:
        raise NotArtinian("the twisted-structure module needs a finite basis")
    p = algebra.p
    s = algebra.dim
    q = p ** r
    var_ops = []
    for i in range(algebra.n):
        exp = [0] * algebra.n
        exp[i] = q
        e = algebra.nf({tuple(exp): 1})
        var_ops.append(algebra.mult_operator(e).astype(np.int64))
    # the twisted action of each standard monomial, as an s x s matrix
    mono_ops = {}
    for m in algebra.std_monomials:
        op = np.eye(s, dtype=np.int64)
        for i, e in enumerate(m):
            for _ in range(e):
                op = (var_ops[i] @ op) % p
        mono_ops[m] = op
    ech = linalg.OnlineEchelon(s, p)
    m_cols = [op.T for m, op in mono_ops.items() if sum(m) > 0]
    if m_cols:
        ech.seed_rref(np.vstack(m_cols))
    gens = []
    for i in range(s):
        v = np.zeros(s, dtype=np.int64)
        v[i] = 1
        if ech.add(v):
            gens.append(i)
    g = len(gens)
    phi = np.zeros((s, g * s), dtype=np.int64)
    for t, gen_idx in enumerate(gens):
        for b, m in enumerate(algebra.std_monomials):
            phi[:, t * s + b] = mono_ops[m][:, gen_idx]
    ker = linalg.kernel_basis(phi % p, p)
    vectors = [vector_from_dense(algebra, ker[:, t], g)
               for t in range(ker.shape[1])]
    kept = minimal_generators(algebra, vectors)
    rows = [[col[i] for col in kept] for i in range(g)]
    return ModulePresentation(algebra, rows, generators=g)


class _QuotientSpace:
    """M = R^g / (column span of the relations) as a plain F_p space."""

    def __init__(self, algebra, pres):
        self.algebra = algebra
        self.g = pres.g
        s = algebra.dim
        n = self.g * s
        rel = expand_matrix(algebra, pres.rows) if pres.h else None
        if rel is not None and rel.shape[1]:
            r, pivots = linalg.rref(rel.T, algebra.p)
            self.red = r[: len(pivots)].astype(np.int64)
            self.pivots = list(pivots)
        else:
            self.red = np.zeros((0, n), dtype=np.int64)
            self.pivots = []
        pivot_set = set(self.pivots)
        self.free_cols = [c for c in range(n) if c not in pivot_set]
        self.dim = len(self.free_cols)
        self._op_cache = {}

    def reduce(self, mat):
        """Reduce row vectors modulo the relation span, keep free coords."""
        p = self.algebra.p
        mat = np.asarray(mat, dtype=np.int64) % p
        for row, piv in zip(self.red, self.pivots):
            coef = mat[:, piv].copy()
            if coef.any():
                mat = (mat - np.outer(coef, row)) % p
        return mat[:, self.free_cols]

    def entry_operator(self, e):
        """dim x dim matrix of multiplication by e on the quotient."""
        key = e.freeze()
        hit = self._op_cache.get(key)
        if hit is not None:
            return hit
        s = self.algebra.dim
        n = self.g * s
        op = np.zeros((n, n), dtype=np.int64)
        block = self.algebra.mult_operator(e).astype(np.int64)
        for i in range(self.g):
            op[i * s:(i + 1) * s, i * s:(i + 1) * s] = block
        lifted = op[:, self.free_cols]  # images of the quotient basis
        out = self.reduce(lifted.T).T
        self._op_cache[key] = out
        return out

    def expand_map(self, rows):
        """Quotient-level matrix of a RingElement matrix acting on M^h."""
        a, b = matrix_shape(rows)
        out = np.zeros((a * self.dim, b * self.dim), dtype=np.int8)
        for i in range(a):
            for j in range(b):
                e = rows[i][j]
                if not e.is_zero:
                    out[i * self.dim:(i + 1) * self.dim,
                        j * self.dim:(j + 1) * self.dim] = \
                        self.entry_operator(e) % self.algebra.p
        return out


def balance_lengths(pres, r, n):
    """Tor lengths from the other side: H_j(resolution of twisted R ⊗ M)."""
    algebra = pres.algebra
    if not algebra.artinian:
        raise NotArtinian("balance oracle requires an Artinian algebra")
    phi = frobenius_module_presentation(algebra, r)
    res = minimal_free_resolution(phi, n + 1)
    q = _QuotientSpace(algebra, pres)
    out = []
    for j in range(n + 1):
        if res.ranks[j] == 0 or q.dim == 0:
            out.append(0)
            continue
        if j == 0:
            a = np.zeros((0, res.ranks[0] * q.dim), dtype=np.int8)
        else:
            a = q.expand_map(res.differentials[j - 1])
        b = q.expand_map(res.differentials[j])
        out.append(linalg.quotient_dim(a, b, algebra.p))
    return out


def tor_balance_oracle(pres, r, n):
    """Entrywise equality flags between the two routes to the Tor lengths.

    The twisted-resolution route and the resolve-the-twisted-module route
    must agree for j = 0..n; a False anywhere means one of the two
    pipelines is wrong.  Artinian only.
    """
    table = tor_frobenius(pres, r, n)
    other = balance_lengths(pres, r, n)
    return [table.rows[j].length == other[j] for j in range(n + 1)]


# ---------------------------------------------------------------------------
# quotient coefficients
# ---------------------------------------------------------------------------


def tor_vs_quotient_coeffs(pres, r, ys, n):
    """Lengths of H_j(twisted resolution ⊗ R/(y)), plus implication checks.

    The y_i must be regular on the successive quotients (NotRegular
    otherwise, raised by the ring reduction).  An empty sequence returns
    the plain Tor table.  With t = len(ys), a vanishing run
    Tor_{j+1} = ... = Tor_{j+t} = 0 must force the (j+t) entry of the
    reduced table to vanish; the verdict records whether that held.
    """
    algebra = pres.algebra
    if not ys:
        return tor_frobenius(pres, r, n)
    reduced = invariants_mod.reduce_regular(algebra, ys)
    table = tor_frobenius(pres, r, n)
    res = minimal_free_resolution(pres, n + 1, strict=False)
    tw = twist(res, r)
    diffs = [[[reduced.nf(dict(e.terms)) for e in row] for row in d]
             for d in tw.differentials]
    reduced_complex = FreeComplex(reduced, diffs, l0=tw.ranks[0],
                                  shifts=tw.shifts)
    if not reduced.artinian and tw.twin is not None:
        reduced_big = reduced.verification_algebra()
        twin_diffs = [[[reduced_big.nf(dict(e.terms)) for e in row]
                       for row in d] for d in tw.twin.differentials]
        reduced_complex.twin = FreeComplex(
            reduced_big, twin_diffs, l0=tw.ranks[0], shifts=tw.twin.shifts)
    out = TorTable(module=table.module, ring=repr(reduced), r=r)
    for j in range(n + 1):
        value = homology_length(reduced_complex, j)
        out.rows.append(TorRow(j, value, res.ranks[j],
                               _ratio_of(value, res.ranks[j])))
    t = len(ys)
    holds = True
    triggered = 0
    for j in range(0, n + 1 - t):
        if all(table.rows[j + i].length == 0 for i in range(1, t + 1)):
            triggered += 1
            val = out.rows[j + t].length
            if isinstance(val, int) and val != 0:
                holds = False
    if triggered == 0:
        out.verdicts.append(
            "vanishing-run implication: no run to check (vacuously holds)")
    else:
        out.verdicts.append(
            f"vanishing-run implication checked on {triggered} run(s): "
            + ("holds" if holds else "VIOLATED"))
    return out
