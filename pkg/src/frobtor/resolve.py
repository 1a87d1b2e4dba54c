"""Finitely presented modules, syzygies, minimal free resolutions.

A module is the cokernel of a matrix over the algebra (rows = generators,
columns = relations).  Syzygies are found by expanding matrices over the
standard-monomial basis into F_p matrices, taking kernel bases, and
selecting minimal generating sets (Nakayama: keep vectors that survive
modulo m times the kernel submodule).

Two computation lanes:

* graded: when the algebra is graded and the matrix admits degree shifts
  making every entry homogeneous, everything decomposes by total degree
  into small blocks.  All bundled rings take this lane; it is what makes
  deep resolutions cheap.
* general: one dense expansion with a trust window.  Kernel vectors whose
  components have degree >= cap - maxdeg(entries) may be cap artifacts and
  are discarded.

Neither lane can certify results beyond the cap on a non-Artinian algebra,
so resolutions come in pairs: the working cap D and the verification cap
2D-2 must agree stage by stage, otherwise stages are flagged unstable
(raised as CapUnstable in strict mode).
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import CapUnstable, ContainmentViolation, PresentationError
from .linalg import OnlineEchelon
from .ringkit import RingElement, poly_freeze

# ---------------------------------------------------------------------------
# matrices of ring elements (list of rows; columns are the relations)
# ---------------------------------------------------------------------------


def _entry_raw(e):
    if isinstance(e, RingElement):
        return poly_freeze(e.terms)
    if isinstance(e, dict):
        return poly_freeze(e)
    return tuple(e)  # already a frozen (monomial, coeff) tuple


def nf_matrix(algebra, rows):
    out = []
    for row in rows:
        new = []
        for e in row:
            if isinstance(e, RingElement) and e.algebra is algebra:
                new.append(e)
            elif isinstance(e, RingElement):
                new.append(algebra.nf(dict(e.terms)))
            else:
                new.append(algebra.nf(dict(e)))
        out.append(new)
    return out


def matrix_freeze(rows):
    return tuple(tuple(e.freeze() for e in row) for row in rows)


def matrix_shape(rows):
    return len(rows), len(rows[0]) if rows else 0


def max_entry_degree(rows):
    return max((e.degree() for row in rows for e in row), default=0)


def matrix_columns(rows):
    g, h = matrix_shape(rows)
    return [tuple(rows[i][j] for i in range(g)) for j in range(h)]


def columns_to_matrix(cols, g):
    if not cols:
        return [[] for _ in range(g)]
    return [[col[i] for col in cols] for i in range(g)]


def expand_vector(algebra, vec):
    if not vec:
        return np.zeros(0, dtype=np.int8)
    return np.concatenate([e.to_vector() for e in vec])


def vector_from_dense(algebra, dense, g):
    s = algebra.dim
    return tuple(algebra.from_vector(dense[i * s:(i + 1) * s]) for i in range(g))


def expand_matrix(algebra, rows):
    """The (g*s) x (h*s) F_p matrix of the map R^h -> R^g given by rows."""
    g, h = matrix_shape(rows)
    s = algebra.dim
    out = np.zeros((g * s, h * s), dtype=np.int8)
    for i in range(g):
        for j in range(h):
            e = rows[i][j]
            if not e.is_zero:
                out[i * s:(i + 1) * s, j * s:(j + 1) * s] = algebra.mult_operator(e)
    return out


# ---------------------------------------------------------------------------
# minimal generators (Nakayama)
# ---------------------------------------------------------------------------


def _m_closure_echelon(algebra, dense_rows, ncoords):
    """Echelon of the F_p span of m * (R-span of the given dense vectors).

    Uses that m*K is spanned over F_p by mu*v for standard monomials mu of
    positive degree and v among the generators of K.
    """
    p = algebra.p
    s = algebra.dim
    g = ncoords // s if s else 0
    ech = OnlineEchelon(ncoords, p)
    if not len(dense_rows) or ncoords == 0:
        return ech
    arr = np.stack([np.asarray(v, dtype=np.int64) % p for v in dense_rows])
    arr = arr.reshape(len(dense_rows), g, s)
    blocks = []
    for m in algebra.std_monomials:
        if sum(m) == 0:
            continue
        op = algebra.mult_operator_monomial(m).astype(np.int64)
        prod = (arr @ op.T).reshape(len(dense_rows), ncoords) % p
        if prod.any():
            blocks.append(prod.astype(np.int8))
    if blocks:
        ech.seed_rref(np.concatenate(blocks, axis=0))
    return ech


def minimal_generators(algebra, vectors):
    """Greedy sublist whose images form a basis of span/(m*span).

    Vectors are tuples of RingElements (elements of R^g); the R-span of the
    full input is the submodule in question.  Deterministic: vectors are
    examined in input order and kept exactly when they fall outside
    m*span + (span of the vectors already kept).
    """
    vectors = list(vectors)
    if not vectors:
        return []
    g = len(vectors[0])
    dense = [expand_vector(algebra, v) for v in vectors]
    ech = _m_closure_echelon(algebra, dense, g * algebra.dim)
    kept = []
    for v, dv in zip(vectors, dense):
        if ech.add(dv):
            kept.append(v)
    return kept


# ---------------------------------------------------------------------------
# grading support
# ---------------------------------------------------------------------------


def grade_matrix(algebra, rows):
    """Degree shifts (targets, sources) making every entry homogeneous.

    Returns (tgt_shifts, src_shifts) with min target shift 0, or None when
    the algebra is not graded or no consistent assignment exists.  An entry
    of degree e at (i, j) forces src[j] - tgt[i] = e.
    """
    if not algebra.graded:
        return None
    g, h = matrix_shape(rows)
    if g == 0:
        return [], []
    degs = {}
    for i in range(g):
        for j in range(h):
            e = rows[i][j]
            if e.is_zero:
                continue
            if e.degree() != e.min_degree():
                return None
            degs[(i, j)] = e.degree()
    tgt = [None] * g
    src = [None] * h
    # BFS over the bipartite constraint graph, one component at a time
    for start in range(g):
        if tgt[start] is not None:
            continue
        tgt[start] = 0
        queue = [("t", start)]
        while queue:
            kind, idx = queue.pop()
            if kind == "t":
                for j in range(h):
                    d = degs.get((idx, j))
                    if d is None:
                        continue
                    want = tgt[idx] + d
                    if src[j] is None:
                        src[j] = want
                        queue.append(("s", j))
                    elif src[j] != want:
                        return None
            else:
                for i in range(g):
                    d = degs.get((i, idx))
                    if d is None:
                        continue
                    want = src[idx] - d
                    if tgt[i] is None:
                        tgt[i] = want
                        queue.append(("t", i))
                    elif tgt[i] != want:
                        return None
    for j in range(h):
        if src[j] is None:  # all-zero column; only possible in raw input
            src[j] = 1
    low = min(tgt)
    tgt = [t - low for t in tgt]
    src = [s_ - low for s_ in src]
    return tgt, src


def _infer_src_shifts(rows, tgt_shifts):
    """Source shifts consistent with the given target shifts, or None."""
    g, h = matrix_shape(rows)
    src = [None] * h
    for j in range(h):
        for i in range(g):
            e = rows[i][j]
            if e.is_zero:
                continue
            if e.degree() != e.min_degree():
                return None
            want = tgt_shifts[i] + e.degree()
            if src[j] is None:
                src[j] = want
            elif src[j] != want:
                return None
    for j in range(h):
        if src[j] is None:
            src[j] = 1
    return src


def _degree_indices(algebra, d):
    """Std-monomial indices of degree d, in descending grevlex order (so
    generated syzygies list x before y, matching the printer)."""
    if d < 0 or d > algebra.top_degree:
        return []
    return list(reversed(algebra.std_by_degree[d]))


def layer_coords(algebra, shifts, d):
    """Coordinates of total degree d in (+)_i R(-shifts[i]).

    Returns ([(summand, std-index-list, offset)], total size).
    """
    out = []
    off = 0
    for i, t in enumerate(shifts):
        idx = _degree_indices(algebra, d - t)
        out.append((i, idx, off))
        off += len(idx)
    return out, off


def graded_block(algebra, rows, tgt_shifts, src_shifts, d):
    """Degree-d block of the expanded map, plus both coordinate layouts.

    The (entry, source-degree, target-degree) slices of the multiplication
    operators are cached on the algebra: the same variables and low-degree
    binomials recur across stages, complexes and modules.
    """
    src_layout, ncols = layer_coords(algebra, src_shifts, d)
    tgt_layout, nrows = layer_coords(algebra, tgt_shifts, d)
    a = np.zeros((nrows, ncols), dtype=np.int8)
    layers = algebra._layer_cache
    for j, cidx, coff in src_layout:
        if not cidx:
            continue
        sdeg = d - src_shifts[j]
        for i, ridx, roff in tgt_layout:
            if not ridx:
                continue
            e = rows[i][j]
            if e.is_zero:
                continue
            key = (e.freeze(), sdeg, d - tgt_shifts[i])
            blk = layers.get(key)
            if blk is None:
                op = algebra.mult_operator(e)
                blk = layers[key] = np.ascontiguousarray(op[np.ix_(ridx, cidx)])
            a[roff:roff + len(ridx), coff:coff + len(cidx)] = blk
    return a, src_layout, ncols, tgt_layout, nrows


def _variable_ops(algebra):
    ops = []
    for t in range(algebra.n):
        exp = [0] * algebra.n
        exp[t] = 1
        ops.append(algebra.mult_operator_monomial(tuple(exp)).astype(np.int64))
    return ops


def _layer_transfer(algebra, shifts, d, var_ops):
    """Multiplication-by-variable maps from the degree d-1 layer to degree d."""
    src_layout, n_prev = layer_coords(algebra, shifts, d - 1)
    tgt_layout, n_cur = layer_coords(algebra, shifts, d)
    layers = algebra._layer_cache
    outs = []
    for t, op in enumerate(var_ops):
        x = np.zeros((n_cur, n_prev), dtype=np.int8)
        for (j, pidx, poff), (_, cidx, coff) in zip(src_layout, tgt_layout):
            if pidx and cidx:
                key = ("var", t, d - 1 - shifts[j])
                blk = layers.get(key)
                if blk is None:
                    blk = layers[key] = np.ascontiguousarray(
                        op[np.ix_(cidx, pidx)], dtype=np.int8)
                x[coff:coff + len(cidx), poff:poff + len(pidx)] = blk
        outs.append(x)
    return outs


def graded_syzygy_generators(algebra, rows, tgt_shifts, src_shifts):
    """Minimal homogeneous generators of ker(rows), degree by degree.

    Returns (columns, degrees, window_top): window_top is None for Artinian
    algebras (results exact) and otherwise the first total degree at which
    generators can no longer be seen at this cap.

    The degree-d kernel block is exact as long as the target layer is
    complete, i.e. d < cap + min(tgt_shifts); minimal generators at degree
    d are the kernel vectors outside sum_t x_t * K_{d-1}.
    """
    p = algebra.p
    g, h = matrix_shape(rows)
    if h == 0:
        top = None if algebra.artinian else algebra.cap + (min(tgt_shifts) if tgt_shifts else 0)
        return [], [], top
    if algebra.artinian:
        loop_top = max(src_shifts) + algebra.top_degree + 1
        report_top = None
    else:
        loop_top = algebra.cap + (min(tgt_shifts) if tgt_shifts else 0)
        report_top = loop_top
    var_ops = _variable_ops(algebra)
    gens = []
    gen_degrees = []
    prev_kernel = None  # rows = full kernel basis at the previous degree
    for d in range(min(src_shifts), loop_top):
        a, src_layout, ncols, _, _ = graded_block(
            algebra, rows, tgt_shifts, src_shifts, d)
        if ncols == 0:
            prev_kernel = np.zeros((0, 0), dtype=np.int64)
            continue
        ker = linalg.kernel_basis(a, p).T.astype(np.int64)  # rows = basis
        ech = OnlineEchelon(ncols, p)
        if prev_kernel is not None and prev_kernel.size:
            transfers = _layer_transfer(algebra, src_shifts, d, var_ops)
            if transfers:
                stacked = np.concatenate([x.T for x in transfers], axis=1)
                moved = linalg.matmul_mod(prev_kernel, stacked, p)
                ech.seed_rref(np.concatenate(
                    np.split(moved, len(transfers), axis=1), axis=0))
        # m.ker(d) sits inside ker(d), so the number of new minimal
        # generators at this degree is exactly the rank gap; the greedy
        # scan can stop as soon as that many vectors are accepted.
        want = ker.shape[0] - ech.dim
        if want > 0:
            for v in ker:
                if ech.add(v):
                    vec = [algebra.zero()] * h
                    for j, cidx, coff in src_layout:
                        terms = {}
                        for t, b in enumerate(cidx):
                            c = int(v[coff + t]) % p
                            if c:
                                terms[algebra.std_monomials[b]] = c
                        if terms:
                            vec[j] = RingElement(algebra, terms, False)
                    gens.append(tuple(vec))
                    gen_degrees.append(d)
                    want -= 1
                    if want == 0:
                        break
        prev_kernel = ker
    return gens, gen_degrees, report_top


# ---------------------------------------------------------------------------
# general (ungraded) lane
# ---------------------------------------------------------------------------


def _dense_degree(algebra, v):
    s = algebra.dim
    nz = np.nonzero(np.asarray(v))[0]
    if nz.size == 0:
        return 0
    return max(int(algebra.std_degrees[i % s]) for i in nz)


def general_syzygy_generators(algebra, rows):
    """Kernel generators from one dense expansion, with cap trust filtering.

    Returns (columns, degrees, window_top); window_top None when Artinian.
    On capped algebras, kernel vectors with a component of degree
    >= cap - maxdeg(entries) are discarded: their products with the matrix
    reach beyond the cap, so they may be truncation artifacts.
    """
    p = algebra.p
    g, h = matrix_shape(rows)
    s = algebra.dim
    if h == 0:
        return [], [], None if algebra.artinian else algebra.cap
    a = expand_matrix(algebra, rows)
    ker = linalg.kernel_basis(a, p)
    cand = [ker[:, t].astype(np.int64) for t in range(ker.shape[1])]
    if algebra.artinian:
        window_top = None
        trusted = cand
    else:
        window_top = algebra.cap - max_entry_degree(rows)
        trusted = [v for v in cand if _dense_degree(algebra, v) < window_top]
    order = sorted(range(len(trusted)),
                   key=lambda t: (_dense_degree(algebra, trusted[t]), t))
    trusted = [trusted[t] for t in order]
    if not trusted:
        return [], [], window_top
    ech = _m_closure_echelon(algebra, trusted, h * s)
    gens = []
    degrees = []
    for v in trusted:
        if ech.add(v):
            gens.append(vector_from_dense(algebra, (v % p).astype(np.int8), h))
            degrees.append(_dense_degree(algebra, v))
    return gens, degrees, window_top


# ---------------------------------------------------------------------------
# module presentations
# ---------------------------------------------------------------------------


class ModulePresentation:
    """coker of a matrix (rows = generators, columns = relations).

    Minimized on construction: unit entries are removed by row/column
    reduction, then redundant relation columns are pruned by the Nakayama
    criterion.  The raw (pre-minimization) matrix is kept so the module can
    be rebuilt on the verification-cap twin of the algebra.
    """

    def __init__(self, algebra, rows, generators=None, _raw=None):
        self.algebra = algebra
        if not rows and generators:
            rows = [[] for _ in range(generators)]
        if _raw is None:
            self.raw = tuple(tuple(_entry_raw(e) for e in row) for row in rows)
        else:
            self.raw = _raw
        self.raw_generators = len(rows)
        rows = nf_matrix(algebra, rows)
        rows = self._strip_units(rows)
        rows = self._prune_columns(rows)
        self.rows = rows
        self.g, self.h = matrix_shape(rows)
        self.minimal = True

    def _strip_units(self, rows):
        alg = self.algebra
        p = alg.p
        while True:
            g, h = matrix_shape(rows)
            hit = None
            for i in range(g):
                for j in range(h):
                    if rows[i][j].is_unit():
                        hit = (i, j)
                        break
                if hit:
                    break
            if hit is None:
                return rows
            i, j = hit
            u = rows[i][j]
            # invert the unit: u = c(1+n) with n nilpotent, so
            # u^-1 = c^-1 (1 - n + n^2 - ...)
            c_inv = pow(u.constant_term(), p - 2, p) if p > 2 else 1
            nil = u * c_inv - alg.one()
            inv = alg.one()
            term = alg.one()
            sign = 1
            while True:
                term = term * nil
                sign = -sign
                if term.is_zero:
                    break
                inv = inv + term * sign
            inv = inv * c_inv
            col_j = [rows[t][j] * inv for t in range(g)]
            new_rows = []
            for t in range(g):
                if t == i:
                    continue
                new_rows.append([
                    rows[t][k] - col_j[t] * rows[i][k]
                    for k in range(h) if k != j
                ])
            rows = new_rows

    def _prune_columns(self, rows):
        g, h = matrix_shape(rows)
        if g == 0 or h == 0:
            return [row[:0] for row in rows]
        cols = [c for c in matrix_columns(rows) if any(not e.is_zero for e in c)]
        kept = minimal_generators(self.algebra, cols)
        return columns_to_matrix(kept, g)

    # --- constructors ---

    @classmethod
    def k_module(cls, algebra):
        """R/m: one generator, the variables as relations."""
        return cls(algebra, [[algebra.var(i) for i in range(algebra.n)]])

    @classmethod
    def free_module(cls, algebra, rank):
        return cls(algebra, [[] for _ in range(rank)], generators=rank)

    def rebuilt_at(self, algebra2):
        """The same raw presentation over a different-cap twin algebra."""
        if algebra2 is self.algebra:
            return self
        rows = [[algebra2.nf(dict(e)) for e in row] for row in self.raw]
        if not rows:
            return ModulePresentation(algebra2, [], generators=self.raw_generators)
        return ModulePresentation(algebra2, rows, _raw=self.raw)

    def freeze(self):
        return (self.g, matrix_freeze(self.rows))

    def is_free(self):
        return self.h == 0

    def columns(self):
        return matrix_columns(self.rows)

    def __repr__(self):
        return f"<module presentation: {self.g} generators, {self.h} relations>"


def is_free(m):
    """A minimized presentation with no relations presents a free module."""
    return m.is_free()


# ---------------------------------------------------------------------------
# free complexes
# ---------------------------------------------------------------------------


class FreeComplex:
    """F_0 <- F_1 <- ... <- F_N with RingElement matrices as differentials.

    differentials[n] is d_{n+1} : F_{n+1} -> F_n (the list index is one
    less than the homological degree of the source).  `shifts`, when
    present, lists the generator degrees of each F_i and certifies every
    differential is homogeneous for them.
    """

    twin = None  # verification-cap twin, attached by minimal_free_resolution

    def __init__(self, algebra, differentials, l0=None, shifts=None,
                 stable=None, window_tops=None):
        self.algebra = algebra
        self.differentials = differentials
        if differentials:
            ranks = [len(differentials[0])]
        else:
            ranks = [l0 if l0 is not None else 0]
        for d in differentials:
            ranks.append(matrix_shape(d)[1])
        for n in range(len(differentials) - 1):
            if matrix_shape(differentials[n])[1] != matrix_shape(differentials[n + 1])[0]:
                raise PresentationError("differential shapes do not compose")
        self.ranks = ranks
        self.length = len(ranks) - 1
        self.shifts = shifts
        self.stable = stable if stable is not None else [True] * len(differentials)
        self.window_tops = (window_tops if window_tops is not None
                            else [None] * len(differentials))

    def differential(self, n):
        """d_n : F_n -> F_{n-1} (n is 1-based)."""
        return self.differentials[n - 1]

    def check_complex(self):
        """Verify d_n . d_{n+1} = 0 at ring level, else ContainmentViolation."""
        for n in range(len(self.differentials) - 1):
            a = self.differentials[n]
            b = self.differentials[n + 1]
            ga, ha = matrix_shape(a)
            _, hb = matrix_shape(b)
            for i in range(ga):
                for k in range(hb):
                    acc = self.algebra.zero()
                    for j in range(ha):
                        if not a[i][j].is_zero and not b[j][k].is_zero:
                            acc = acc + a[i][j] * b[j][k]
                    if not acc.is_zero:
                        raise ContainmentViolation(
                            f"d_{n + 1} . d_{n + 2} has a nonzero entry at "
                            f"({i},{k}): {acc!r}"
                        )

    def is_minimal(self):
        return all(e.constant_term() == 0
                   for d in self.differentials for row in d for e in row)

    def max_entry_degree(self, n):
        return max_entry_degree(self.differentials[n - 1])

    def __repr__(self):
        return f"<free complex, ranks {self.ranks}>"


# ---------------------------------------------------------------------------
# syzygies and resolutions
# ---------------------------------------------------------------------------


def _syzygy_once(algebra, rows, tgt_shifts=None):
    """One syzygy step: (columns, degrees, (tgt, src) or None, window_top)."""
    g, h = matrix_shape(rows)
    if h == 0:
        top = None if algebra.artinian else algebra.cap
        return [], [], None, top
    if tgt_shifts is not None:
        src = _infer_src_shifts(rows, tgt_shifts)
        graded = (list(tgt_shifts), src) if src is not None else None
    else:
        graded = grade_matrix(algebra, rows)
    if graded is not None:
        tgt, src = graded
        gens, degs, top = graded_syzygy_generators(algebra, rows, tgt, src)
        return gens, degs, (tgt, src), top
    gens, degs, top = general_syzygy_generators(algebra, rows)
    return gens, degs, None, top


def _matrices_agree(rows_small, rows_big, cap):
    """Same shape and same entries after truncating the big side below cap."""
    if matrix_shape(rows_small) != matrix_shape(rows_big):
        return False
    g, h = matrix_shape(rows_small)
    for i in range(g):
        for j in range(h):
            small = rows_small[i][j].terms
            big = {m: c for m, c in rows_big[i][j].terms.items() if sum(m) < cap}
            if dict(small) != big:
                return False
    return True


def syzygy(algebra, rows):
    """Matrix whose columns minimally generate {v : rows . v = 0}.

    On capped algebras the computation is repeated on the cap-(2D-2) twin
    and must produce identical ranks and identical generators up to the
    smaller cap, else CapUnstable.
    """
    rows = nf_matrix(algebra, rows)
    g, h = matrix_shape(rows)
    gens, _, _, _ = _syzygy_once(algebra, rows)
    result = columns_to_matrix(gens, h)
    if not algebra.artinian:
        big = algebra.verification_algebra()
        rows_big = [[big.nf(dict(e.terms)) for e in row] for row in rows]
        gens_big, _, _, _ = _syzygy_once(big, rows_big)
        result_big = columns_to_matrix(gens_big, h)
        if not _matrices_agree(result, result_big, algebra.cap):
            raise CapUnstable(
                f"syzygy changed between cap {algebra.cap} and cap {big.cap}"
            )
    return result


def _build_resolution(algebra, pres, n):
    """F_0 .. F_n (n differentials) at a single cap, no stability check."""
    if n == 0:
        shifts = [[0] * pres.g] if algebra.graded else None
        return FreeComplex(algebra, [], l0=pres.g, shifts=shifts)
    d1 = pres.rows if pres.h > 0 else [[] for _ in range(pres.g)]
    diffs = [d1]
    window_tops = [None]
    shifts_all = None
    if algebra.graded:
        graded = grade_matrix(algebra, pres.rows) if pres.h > 0 else ([0] * pres.g, [])
        if graded is not None:
            shifts_all = [list(graded[0]), list(graded[1])]
    current = d1
    while len(diffs) < n:
        if matrix_shape(current)[1] == 0:
            current = []
            diffs.append(current)
            window_tops.append(None)
            if shifts_all is not None:
                shifts_all.append([])
            continue
        tgt_shifts = shifts_all[len(diffs) - 1] if shifts_all is not None else None
        gens, degs, shifts_used, top = _syzygy_once(algebra, current, tgt_shifts)
        nxt = columns_to_matrix(gens, matrix_shape(current)[1])
        diffs.append(nxt)
        window_tops.append(top)
        if shifts_all is not None:
            if shifts_used is not None:
                shifts_all.append(list(degs))
            else:
                shifts_all = None
        current = nxt
    return FreeComplex(algebra, diffs, l0=pres.g, shifts=shifts_all,
                       window_tops=window_tops)


def _slice_complex(res, n):
    if res.length <= n:
        return res
    sub = FreeComplex(res.algebra, res.differentials[:n], l0=res.ranks[0],
                      shifts=res.shifts[:n + 1] if res.shifts is not None else None,
                      stable=res.stable[:n], window_tops=res.window_tops[:n])
    if res.twin is not None:
        sub.twin = _slice_complex(res.twin, n)
    return sub


def minimal_free_resolution(pres, n, strict=True):
    """Minimal free resolution of coker(pres) out to homological degree n.

    The returned complex has ranks (l_0 .. l_n).  On capped algebras a twin
    resolution at cap 2D-2 is computed and compared stage by stage; stages
    from the first disagreement onward are flagged unstable, which raises
    CapUnstable in strict mode.  The twin is attached as `.twin`.
    """
    if n < 0:
        raise ValueError("resolution bound must be >= 0")
    algebra = pres.algebra
    cache = algebra._resolution_cache
    key = pres.freeze()
    hit = cache.get(key)
    if hit is not None and hit.length >= n:
        res = hit
    else:
        res = _build_resolution(algebra, pres, n)
        if not algebra.artinian:
            big = algebra.verification_algebra()
            res_big = _build_resolution(big, pres.rebuilt_at(big), n)
            stable = []
            ok = True
            for i in range(len(res.differentials)):
                if ok and not _matrices_agree(
                        res.differentials[i], res_big.differentials[i], algebra.cap):
                    ok = False
                stable.append(ok)
            res.stable = stable
            res.twin = res_big
        cache[key] = res
    res = _slice_complex(res, n)
    if strict and not all(res.stable):
        first = res.stable.index(False)
        raise CapUnstable(
            f"resolution stage {first + 1} changed between caps {algebra.cap} "
            f"and {algebra.verification_algebra().cap}"
        )
    return res


def betti_numbers(pres, n, strict=True):
    """(l_0 .. l_n): ranks of the minimal resolution = dims of Tor_i(M, k)."""
    return list(minimal_free_resolution(pres, n, strict=strict).ranks[: n + 1])
