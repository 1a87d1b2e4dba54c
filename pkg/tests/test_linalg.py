import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from frobtor import linalg
from frobtor.errors import ContainmentViolation

PRIMES = [2, 3, 5, 7]


def random_matrix(rng, m, n, p):
    return rng.integers(0, p, size=(m, n), dtype=np.int64)


@pytest.mark.parametrize("p", PRIMES)
def test_rref_agrees_between_implementations(p):
    rng = np.random.default_rng(1234 + p)
    for _ in range(120):
        m, n = rng.integers(0, 41, size=2)
        a = random_matrix(rng, m, n, p)
        r_fast, piv_fast = linalg.rref(a, p, impl="fast")
        r_ref, piv_ref = linalg.rref(a, p, impl="numpy")
        assert piv_fast == piv_ref
        assert np.array_equal(r_fast, r_ref)


@pytest.mark.parametrize("p", PRIMES)
def test_rref_shape_and_idempotence(p):
    rng = np.random.default_rng(99 + p)
    for _ in range(60):
        m, n = rng.integers(1, 30, size=2)
        a = random_matrix(rng, m, n, p)
        r, piv = linalg.rref(a, p)
        # pivot columns look like unit vectors
        for i, c in enumerate(piv):
            col = np.zeros(m, dtype=np.int8)
            col[i] = 1
            assert np.array_equal(r[:, c], col)
        r2, piv2 = linalg.rref(r, p)
        assert piv2 == piv
        assert np.array_equal(r2, r)


@pytest.mark.parametrize("p", PRIMES)
def test_kernel_really_is_kernel(p):
    rng = np.random.default_rng(7 + p)
    for _ in range(80):
        m, n = rng.integers(0, 25, size=2)
        a = random_matrix(rng, m, n, p)
        k = linalg.kernel_basis(a, p)
        assert k.shape[0] == n
        assert linalg.rank(a, p) + k.shape[1] == n
        if m and k.shape[1]:
            assert not np.any((a @ k.astype(np.int64)) % p)
        # basis really is independent
        assert linalg.rank(k.T, p) == k.shape[1]


@pytest.mark.parametrize("p", PRIMES)
def test_image_basis_spans_columns(p):
    rng = np.random.default_rng(42 + p)
    for _ in range(60):
        m, n = rng.integers(1, 20, size=2)
        a = random_matrix(rng, m, n, p)
        im = linalg.image_basis(a, p)
        assert im.shape[1] == linalg.rank(a, p)
        # every column of a is solvable against the basis
        x = linalg.solve(im, a, p)
        if im.shape[1] > 0 or linalg.rank(a, p) == 0:
            assert x is not None
            assert np.array_equal((im.astype(np.int64) @ x) % p, a % p)


@pytest.mark.parametrize("p", PRIMES)
def test_solve_roundtrip_and_inconsistency(p):
    rng = np.random.default_rng(5 + p)
    for _ in range(80):
        m, n = rng.integers(1, 20, size=2)
        a = random_matrix(rng, m, n, p)
        x0 = rng.integers(0, p, size=n, dtype=np.int64)
        b = (a @ x0) % p
        x = linalg.solve(a, b, p)
        assert x is not None
        assert np.array_equal((a @ x.astype(np.int64)) % p, b)
    # a clearly inconsistent system
    a = np.zeros((2, 3), dtype=np.int64)
    assert linalg.solve(a, np.array([1, 0]), p) is None


def test_quotient_dim_containment_check():
    a = np.array([[1, 1]], dtype=np.int64)  # kernel = span (1,1) over F_2
    b = np.array([[1], [1]], dtype=np.int64)
    assert linalg.quotient_dim(a, b, 2) == 0
    bad = np.array([[1], [0]], dtype=np.int64)
    with pytest.raises(ContainmentViolation):
        linalg.quotient_dim(a, bad, 2)


@pytest.mark.parametrize("p", [2, 3])
def test_quotient_dim_counts(p):
    # ker(0-map) / im(identity) on F^3 is 0; / im(0) is 3
    zero = np.zeros((1, 3), dtype=np.int64)
    eye = np.eye(3, dtype=np.int64)
    assert linalg.quotient_dim(zero, eye, p) == 0
    assert linalg.quotient_dim(zero, np.zeros((3, 1), dtype=np.int64), p) == 3


def test_empty_shapes():
    for p in PRIMES:
        assert linalg.rank(np.zeros((0, 5), dtype=np.int64), p) == 0
        assert linalg.rank(np.zeros((5, 0), dtype=np.int64), p) == 0
        k = linalg.kernel_basis(np.zeros((0, 4), dtype=np.int64), p)
        assert k.shape == (4, 4)
        assert linalg.kernel_basis(np.zeros((3, 0), dtype=np.int64), p).shape == (0, 0)


@given(
    p=st.sampled_from(PRIMES),
    seed=st.integers(0, 2**32 - 1),
    m=st.integers(1, 12),
    n=st.integers(1, 12),
)
@settings(max_examples=120, deadline=None)
def test_rank_properties(p, seed, m, n):
    rng = np.random.default_rng(seed)
    a = random_matrix(rng, m, n, p)
    b = random_matrix(rng, n, m, p)
    ra = linalg.rank(a, p)
    assert ra == linalg.rank(a.T, p)
    assert ra <= min(m, n)
    assert linalg.rank(linalg.matmul(a, b, p), p) <= min(ra, linalg.rank(b, p))


@given(p=st.sampled_from(PRIMES), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_online_echelon_matches_batch_rank(p, seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(1, 15, size=2)
    a = random_matrix(rng, m, n, p)
    ech = linalg.OnlineEchelon(n, p)
    grew = [ech.add(row) for row in a]
    assert ech.dim == linalg.rank(a, p)
    assert sum(grew) == ech.dim
    for row in a:
        assert ech.contains(row)
    comb = a.sum(axis=0) % p
    assert ech.contains(comb)


def test_online_echelon_rejects_dependent():
    ech = linalg.OnlineEchelon(3, 5)
    assert ech.add([1, 2, 3])
    assert ech.add([0, 1, 1])
    assert not ech.add([1, 3, 4])  # sum of the two above
    assert not ech.contains([0, 0, 1])
