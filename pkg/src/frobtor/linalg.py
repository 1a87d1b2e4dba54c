"""Dense linear algebra over prime fields F_p.

Matrices are numpy integer arrays with entries reduced mod p.  Everything the
rest of the package needs reduces to four primitives: reduced row echelon
form, rank, kernel bases and solving linear systems.  Two implementations are
kept side by side:

* a plain numpy route (`impl="numpy"`), easy to audit, used as the reference
* numba-jitted elimination loops (`impl="fast"`), with F_2 rows bit-packed
  into uint64 words, used by default once warmed up

Both are exercised against each other in the test suite.  All outputs are
canonical (derived from the RREF), so results are deterministic across runs.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ContainmentViolation

try:
    from numba import njit

    _HAVE_NUMBA = True
except Exception:  # pragma: no cover - numba is a hard dep, but stay usable
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


# Flip to "numpy" (e.g. in tests) to force the reference implementation.
DEFAULT_IMPL = os.environ.get("FROBTOR_LINALG_IMPL", "fast" if _HAVE_NUMBA else "numpy")


def _as_modp(a, p):
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2d array, got shape {a.shape}")
    return np.mod(a, p)


def _inverse_table(p):
    inv = np.zeros(p, dtype=np.int64)
    for v in range(1, p):
        inv[v] = pow(v, p - 2, p)
    return inv


# ---------------------------------------------------------------------------
# reference implementation (numpy row ops)
# ---------------------------------------------------------------------------


def _rref_numpy(a, p):
    """Gauss-Jordan on a copy; returns (rref matrix, pivot column list)."""
    a = a.copy()
    m, n = a.shape
    inv = _inverse_table(p)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * inv[a[r, c]]) % p
        mask = np.nonzero(a[:, c])[0]
        mask = mask[mask != r]
        if mask.size:
            a[mask] = (a[mask] - np.outer(a[mask, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


# ---------------------------------------------------------------------------
# fast implementation (numba; F_2 bit-packed, general p on int64)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _rref_f2_packed(rows, ncols, pivots):
    m, nw = rows.shape
    npiv = 0
    r = 0
    for c in range(ncols):
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        piv = -1
        for i in range(r, m):
            if rows[i, w] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(nw):
                tmp = rows[r, k]
                rows[r, k] = rows[piv, k]
                rows[piv, k] = tmp
        for i in range(m):
            if i != r and (rows[i, w] & bit):
                for k in range(w, nw):
                    rows[i, k] ^= rows[r, k]
        pivots[npiv] = c
        npiv += 1
        r += 1
        if r == m:
            break
    return npiv


@njit(cache=True)
def _rref_modp_jit(a, p, inv, pivots):
    m, n = a.shape
    npiv = 0
    r = 0
    for c in range(n):
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(c, n):
                tmp = a[r, k]
                a[r, k] = a[piv, k]
                a[piv, k] = tmp
        v = inv[a[r, c]]
        if v != 1:
            for k in range(c, n):
                a[r, k] = (a[r, k] * v) % p
        for i in range(m):
            if i != r and a[i, c] != 0:
                f = p - a[i, c]
                for k in range(c, n):
                    a[i, k] = (a[i, k] + f * a[r, k]) % p
        pivots[npiv] = c
        npiv += 1
        r += 1
        if r == m:
            break
    return npiv


def _pack_f2(a):
    """Pack rows into uint64 words (64 columns per word), reducing mod 2.

    The uint8 wraparound keeps the low bit for any integer input, so no
    separate mod pass is needed.
    """
    m, n = a.shape
    nw = max(1, (n + 63) // 64)
    u = a.astype(np.uint8)
    u &= 1
    packed = np.packbits(u, axis=1, bitorder="little")
    out = np.zeros((m, nw * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return np.ascontiguousarray(out).view(np.uint64)


def _unpack_f2(rows, ncols):
    m = rows.shape[0]
    bits = np.unpackbits(rows.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :ncols].astype(np.int8)


def _rref_fast(a, p):
    m, n = a.shape
    if m == 0 or n == 0:
        return a.copy(), []
    cap = min(m, n)
    pivbuf = np.empty(cap, dtype=np.int64)
    if p == 2:
        packed = _pack_f2(a)
        npiv = _rref_f2_packed(packed, n, pivbuf)
        return _unpack_f2(packed, n), list(pivbuf[:npiv])
    work = a.copy()
    npiv = _rref_modp_jit(work, p, _inverse_table(p), pivbuf)
    return work, list(pivbuf[:npiv])


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def rref(a, p, impl=None):
    """Reduced row echelon form over F_p.

    Args:
        a: 2d integer array.
        p: prime modulus.
        impl: "fast", "numpy" or None for the module default.

    Returns:
        (r, pivots): the RREF as an int8 array and the pivot column indices
        in increasing order.
    """
    if impl is None:
        impl = DEFAULT_IMPL
    if impl == "fast" and p == 2:
        # the packing step reduces mod 2 itself, so skip the int64 round trip
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError(f"expected a 2d array, got shape {a.shape}")
        if a.shape[0] == 0 or a.shape[1] == 0:
            return np.zeros(a.shape, dtype=np.int8), []
        r, piv = _rref_fast(a, p)
        return r, list(piv)
    a = _as_modp(a, p)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a.astype(np.int8), []
    if impl == "fast":
        r, piv = _rref_fast(a, p)
    else:
        r, piv = _rref_numpy(a, p)
    return r.astype(np.int8), list(piv)


def rank(a, p, impl=None):
    if impl is None:
        impl = DEFAULT_IMPL
    if impl == "fast" and p == 2:
        # pivot count straight off the packed elimination, skipping the
        # unpack that full rref output would need
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError(f"expected a 2d array, got shape {a.shape}")
        if a.shape[0] == 0 or a.shape[1] == 0:
            return 0
        packed = _pack_f2(a)
        pivbuf = np.empty(min(a.shape), dtype=np.int64)
        return int(_rref_f2_packed(packed, a.shape[1], pivbuf))
    a = _as_modp(a, p)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    return len(rref(a, p, impl=impl)[1])


def kernel_basis(a, p, impl=None):
    """Basis of the right null space, as the columns of an (n, k) array.

    The basis is the canonical one read off the RREF: each free column
    contributes one vector with a 1 in that position.
    """
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"expected a 2d array, got shape {a.shape}")
    m, n = a.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int8)
    if m == 0:
        return np.eye(n, dtype=np.int8)
    r, pivots = rref(a, p, impl=impl)
    piv = np.asarray(pivots, dtype=np.int64)
    mask = np.ones(n, dtype=bool)
    if piv.size:
        mask[piv] = False
    free = np.nonzero(mask)[0]
    out = np.zeros((n, free.size), dtype=np.int8)
    if free.size:
        out[free, np.arange(free.size)] = 1
        if piv.size:
            out[piv] = (p - r[:piv.size][:, free]) % p
    return out


def image_basis(a, p, impl=None):
    """The pivot columns of `a`: a basis of the column space."""
    a = _as_modp(a, p)
    _, pivots = rref(a, p, impl=impl)
    return a[:, pivots].astype(np.int8)


def solve(a, b, p, impl=None):
    """One solution x of a @ x = b (mod p), or None if inconsistent.

    b may be a vector or a matrix of stacked right-hand-side columns; the
    result has matching shape.
    """
    a = _as_modp(a, p)
    b_arr = np.asarray(b, dtype=np.int64) % p
    single = b_arr.ndim == 1
    if single:
        b_arr = b_arr[:, None]
    m, n = a.shape
    if b_arr.shape[0] != m:
        raise ValueError(f"shape mismatch: {a.shape} vs {b_arr.shape}")
    aug = np.hstack([a, b_arr])
    r, pivots = rref(aug, p, impl=impl)
    x = np.zeros((n, b_arr.shape[1]), dtype=np.int8)
    for row, c in enumerate(pivots):
        if c >= n:  # pivot in the rhs block: inconsistent system
            return None
        x[c] = r[row, n:]
    return x[:, 0] if single else x


def quotient_dim(a, b, p, impl=None):
    """dim (ker a / im b) over F_p, checking im b is contained in ker a.

    a : (m, n) and b : (n, k) so that a @ b should vanish mod p.

    Raises:
        ContainmentViolation: if a @ b != 0, i.e. the would-be quotient is
            not well defined.
    """
    a = _as_modp(a, p)
    b = _as_modp(b, p)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if not matmul_is_zero(a, b, p):
        raise ContainmentViolation(
            "image is not contained in the kernel (product is nonzero)"
        )
    ker = a.shape[1] - rank(a, p, impl=impl)
    return ker - rank(b, p, impl=impl)


@njit(cache=True)
def _xor_accumulate_jit(a, bp, out):
    m, kk = a.shape
    nw = bp.shape[1]
    for i in range(m):
        for t in range(kk):
            if a[i, t]:
                for w in range(nw):
                    out[i, w] ^= bp[t, w]


def _matmul_f2_packed(a, b):
    """Packed rows of (a @ b) mod 2; both factors are reduced here."""
    bp = _pack_f2(b)
    out = np.zeros((a.shape[0], bp.shape[1]), dtype=np.uint64)
    am = np.bitwise_and(a, 1)
    if am.dtype != np.int8:
        am = am.astype(np.int8)
    _xor_accumulate_jit(np.ascontiguousarray(am), bp, out)
    return out


def matmul_mod(a, b, p):
    """Exact a @ b mod p as int64.

    Large products run through float64 BLAS (exact: entries < p <= 7 and
    the accumulated sums stay far below 2^53) or, over F_2, through
    bit-packed XOR accumulation.
    """
    if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    work = a.shape[0] * a.shape[1] * b.shape[1]
    if p == 2 and work >= (1 << 18) and _HAVE_NUMBA:
        packed = _matmul_f2_packed(a, b)
        return _unpack_f2(packed, b.shape[1]).astype(np.int64)
    if work >= (1 << 14):
        c = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
        return np.mod(c, p).astype(np.int64)
    out = np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)
    return out % p


def matmul_is_zero(a, b, p):
    """Is a @ b = 0 mod p?  Avoids unpacking on the F_2 fast path."""
    if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
        return True
    if p == 2 and a.shape[0] * a.shape[1] * b.shape[1] >= (1 << 18) and _HAVE_NUMBA:
        return not np.any(_matmul_f2_packed(a, b))
    return not np.any(matmul_mod(a, b, p))


def matmul(a, b, p):
    a = _as_modp(a, p)
    b = _as_modp(b, p)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return matmul_mod(a, b, p).astype(np.int8)


class OnlineEchelon:
    """Incremental row span with membership queries.

    Rows are added one at a time; `add` reports whether the row enlarged the
    span.  Used for greedy minimal-generator selection, where candidate
    vectors arrive in a fixed order and we keep exactly the ones outside the
    span built so far.
    """

    def __init__(self, n, p):
        self.n = n
        self.p = p
        self._rows = []  # list of (pivot index, normalised int64 row)
        self._inv = _inverse_table(p)

    @property
    def dim(self):
        return len(self._rows)

    def _reduce(self, v):
        p = self.p
        for piv, row in self._rows:
            c = v[piv]
            if c:
                v = (v - c * row) % p
        return v

    def contains(self, v):
        v = np.asarray(v, dtype=np.int64) % self.p
        return not np.any(self._reduce(v))

    def add(self, v):
        """Reduce v against the span; absorb it if independent.

        Returns True when v was independent (span grew).
        """
        v = np.asarray(v, dtype=np.int64) % self.p
        v = self._reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        v = (v * self._inv[v[piv]]) % self.p
        # keep existing rows reduced against the new one
        for i, (q, row) in enumerate(self._rows):
            c = row[piv]
            if c:
                self._rows[i] = (q, (row - c * v) % self.p)
        self._rows.append((piv, v))
        self._rows.sort(key=lambda t: t[0])
        return True

    def add_many(self, vectors):
        for v in vectors:
            self.add(v)

    def seed_rref(self, a):
        """Replace the current span by the row space of `a` in one rref call.

        Much faster than add_many for a large batch; any rows added before
        are discarded.
        """
        a = np.asarray(a)
        if a.size == 0 or a.shape[0] == 0:
            self._rows = []
            return
        r, pivots = rref(a, self.p)
        self._rows = [(int(piv), r[i].astype(np.int64)) for i, piv in enumerate(pivots)]


def warmup():
    """Trigger numba JIT compilation of the elimination kernels."""
    if not _HAVE_NUMBA:
        return
    a = np.array([[1, 0, 1], [1, 1, 0]], dtype=np.int64)
    rref(a, 2, impl="fast")
    rref(a, 3, impl="fast")
    rref(a, 5, impl="fast")
    rref(a, 7, impl="fast")
