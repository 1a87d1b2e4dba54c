"""Seeded random generators: modules, minimal complexes, small rings.

Everything is driven by an explicit ``random.Random`` so that a fixed
seed reproduces byte-identical runs.  Complexes are built so that
``d . d = 0`` holds exactly at the ring level (zero-product chains mixed
by constant invertible matrices), never merely modulo the degree cap.
"""

import random

import numpy as np

from . import linalg
from .resolve import FreeComplex, ModulePresentation, matrix_shape
from .ringkit import build_algebra, parse_presentation


def rng_from(seed):
    return random.Random(seed)


# ---------------------------------------------------------------------------
# random elements and module presentations
# ---------------------------------------------------------------------------


def _monomials_of_degree(algebra, d):
    return [m for m in algebra.std_monomials if sum(m) == d]


def random_element(algebra, rng, degrees=(1, 2), terms=1):
    """A nonzero normal-form element supported in the given degrees."""
    pool = []
    for d in degrees:
        pool.extend(_monomials_of_degree(algebra, d))
    if not pool:
        pool = _monomials_of_degree(algebra, 1)
    out = algebra.zero()
    for _ in range(terms):
        m = rng.choice(pool)
        c = rng.randrange(1, algebra.p)
        out = out + algebra.nf({m: c})
    if out.is_zero:
        out = algebra.nf({rng.choice(pool): 1})
    return out


def random_module(algebra, rng, max_gens=2, max_cols=3, homogeneous=False):
    """A minimized random cokernel presentation.

    With homogeneous=True every column is concentrated in one degree, so
    the matrix grades and the per-degree homology lane applies; otherwise
    entries may mix degrees and some may be zero.
    """
    g = rng.randint(1, max_gens)
    h = rng.randint(1, max_cols)
    rows = [[algebra.zero() for _ in range(h)] for _ in range(g)]
    for j in range(h):
        if homogeneous:
            d = rng.choice([1, 1, 2])
            for i in range(g):
                if rng.random() < 0.7:
                    rows[i][j] = random_element(algebra, rng, degrees=(d,),
                                                terms=1)
        else:
            for i in range(g):
                roll = rng.random()
                if roll < 0.45:
                    rows[i][j] = random_element(algebra, rng, degrees=(1,))
                elif roll < 0.7:
                    rows[i][j] = random_element(algebra, rng, degrees=(2,))
                elif roll < 0.8:
                    rows[i][j] = random_element(algebra, rng, degrees=(1, 2),
                                                terms=2)
    return ModulePresentation(algebra, rows)


# ---------------------------------------------------------------------------
# random minimal complexes with exact d^2 = 0
# ---------------------------------------------------------------------------


def _entry_pool(algebra):
    """Small maximal-ideal elements to use as block entries."""
    pool = []
    for i in range(algebra.n):
        v = algebra.var(i)
        if not v.is_zero:
            pool.append(v)
            sq = v * v
            if not sq.is_zero and not sq.truncated:
                pool.append(sq)
    return pool


def _fp_matrix(rows_of_elements, scalars_left, scalars_right, algebra, p):
    """scalars_left @ M @ scalars_right with RingElement entries (exact)."""
    g, h = matrix_shape(rows_of_elements)
    gl = scalars_left.shape[0]
    hr = scalars_right.shape[1]
    mid = [[algebra.zero() for _ in range(hr)] for _ in range(g)]
    for i in range(g):
        for jj in range(hr):
            acc = algebra.zero()
            for j in range(h):
                c = int(scalars_right[j, jj]) % p
                if c and not rows_of_elements[i][j].is_zero:
                    acc = acc + rows_of_elements[i][j] * c
            mid[i][jj] = acc
    out = [[algebra.zero() for _ in range(hr)] for _ in range(gl)]
    for ii in range(gl):
        for jj in range(hr):
            acc = algebra.zero()
            for i in range(g):
                c = int(scalars_left[ii, i]) % p
                if c and not mid[i][jj].is_zero:
                    acc = acc + mid[i][jj] * c
            out[ii][jj] = acc
    return out


def _random_invertible(n, p, rng):
    if n == 0:
        return np.zeros((0, 0), dtype=np.int8)
    while True:
        a = np.array([[rng.randrange(p) for _ in range(n)] for _ in range(n)],
                     dtype=np.int8)
        if linalg.rank(a, p) == n:
            return a


def random_minimal_complex(algebra, rng, max_stages=4, max_rank=3):
    """A minimal free complex with d^2 = 0 exactly over the ring.

    Construction: partial matchings of zero-product chain entries give a
    block complex, then each stage is mixed by a random invertible
    constant matrix; both steps preserve d^2 = 0 at ring level and keep
    every entry inside the maximal ideal.
    """
    pool = _entry_pool(algebra)
    length = rng.randint(2, max_stages)
    ranks = [rng.randint(1, max_rank) for _ in range(length + 1)]
    # out_entry[b]: the entry of the previous differential whose source
    # coordinate is b, constraining what may map into b next.
    raw = []
    out_entry = [None] * ranks[0]
    for n in range(1, length + 1):
        g, h = ranks[n - 1], ranks[n]
        d = [[algebra.zero() for _ in range(h)] for _ in range(g)]
        rows_avail = list(range(g))
        cols_avail = list(range(h))
        rng.shuffle(rows_avail)
        rng.shuffle(cols_avail)
        pairs = rng.randint(1, min(g, h))
        new_out = [None] * h
        for a, b in zip(rows_avail[:pairs], cols_avail[:pairs]):
            prev = out_entry[a]
            if prev is None:
                choices = pool
            else:
                choices = [f for f in pool if (prev * f).is_zero]
            if not choices:
                continue
            f = rng.choice(choices)
            d[a][b] = f
            new_out[b] = f
        raw.append(d)
        out_entry = new_out
    # Mix every stage by constant invertible matrices.
    mixers = [_random_invertible(r, algebra.p, rng) for r in ranks]
    inverses = [linalg.solve(m, np.eye(m.shape[0], dtype=np.int8), algebra.p)
                if m.shape[0] else m for m in mixers]
    differentials = []
    for n in range(1, length + 1):
        differentials.append(_fp_matrix(raw[n - 1], mixers[n - 1],
                                        inverses[n], algebra, algebra.p))
    if rng.random() < 0.35:
        # Trailing zero stage: gives honest rank-0 positions to test.
        differentials.append([[] for _ in range(ranks[-1])])
    return FreeComplex(algebra, differentials, l0=ranks[0])


# ---------------------------------------------------------------------------
# finite projective dimension modules over k[x,y]/(x^2)
# ---------------------------------------------------------------------------


def random_finite_pd_module(algebra, rng, max_summands=3):
    """Cokernel of unimodular row/column operations applied to diag(y^a).

    The result is a direct sum of R and R/(y^a) pieces in disguise, so it
    has projective dimension at most 1 with a split-injective minimal
    presentation.  Operations only combine rows/columns of matching
    degree, keeping the matrix gradable.
    """
    y = algebra.var("y")
    g = rng.randint(1, max_summands)
    h = rng.randint(1, g)
    powers = sorted(rng.randint(1, 2) for _ in range(h))
    rows = [[algebra.zero() for _ in range(h)] for _ in range(g)]
    for j, a in enumerate(powers):
        e = algebra.one()
        for _ in range(a):
            e = e * y
        rows[j][j] = e
    col_deg = list(powers)
    for _ in range(rng.randint(0, 4)):
        op = rng.random()
        if op < 0.5 and h >= 2:
            # column j += y^t * column i, with t closing the degree gap
            i, j = rng.sample(range(h), 2)
            t = col_deg[j] - col_deg[i]
            if t < 0:
                i, j = j, i
                t = -t
            mult = algebra.one()
            for _ in range(t):
                mult = mult * y
            for a in range(g):
                rows[a][j] = rows[a][j] + rows[a][i] * mult
        elif g >= 2:
            # constant row addition: every generator sits in degree zero
            b, a = rng.sample(range(g), 2)
            for j in range(h):
                rows[a][j] = rows[a][j] + rows[b][j]
    # Append redundant columns (copies): stripped again by minimization.
    for _ in range(rng.randint(0, 2)):
        src = rng.randrange(h)
        for a in range(g):
            rows[a].append(rows[a][src])
    for row in rows:
        for e in row:
            if e.truncated:
                raise ValueError("truncated entry in finite-pd generator")
    return ModulePresentation(algebra, rows)


# ---------------------------------------------------------------------------
# random small rings for consistency sweeps
# ---------------------------------------------------------------------------

_VARS = ("x", "y", "z")


def random_ring_source(rng):
    """Source text for a random ring in the supported families.

    Families: Artinian monomial quotients, Artinian monomial+one-binomial
    quotients, and the depth-one hypersurfaces k[x,y]/(x^a).
    """
    family = rng.choice(["monomial", "monomial", "binomial", "depth1"])
    if family == "depth1":
        p = rng.choice([2, 3])
        a = rng.randint(2, 3)
        return f"ring F{p}[x,y]/(x^{a}) cap 12"
    p = rng.choice([2, 3])
    n = rng.randint(1, 3)
    names = _VARS[:n]
    rels = []
    for v in names:
        rels.append(f"{v}^{rng.randint(2, 3)}")
    mons = []
    for _ in range(rng.randint(0, 2)):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            mons.append(f"{names[i]}*{names[j]}")
    rels.extend(sorted(set(mons)))
    if family == "binomial" and n >= 2:
        i, j = rng.sample(range(n), 2)
        rels.append(f"{names[i]}*{names[j]} + {names[i]}^2")
    return f"ring F{p}[{','.join(names)}]/({', '.join(rels)})"


def random_ring(rng):
    source = random_ring_source(rng)
    pres = parse_presentation(source)
    return build_algebra(pres), pres
