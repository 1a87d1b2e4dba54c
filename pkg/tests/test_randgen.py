"""Soundness of the random generators: the properties the suites lean on."""

import pytest

from frobtor import corpus, randgen
from frobtor.resolve import grade_matrix, matrix_shape, minimal_free_resolution
from frobtor.ringkit import build_algebra, parse_presentation
from frobtor.tor import tor_frobenius, twist


def make(src):
    return build_algebra(parse_presentation(src))


@pytest.fixture(scope="module")
def r1():
    return make("ring F2[x,y]/(x^2, x*y, y^2)")


@pytest.fixture(scope="module")
def ex31():
    alg, _ = corpus.load_ring("ex31")
    return alg


@pytest.fixture(scope="module")
def depth1():
    alg, _ = corpus.load_ring("depth1")
    return alg


def compose(a, b):
    """Ring-level matrix product of two RingElement matrices."""
    g, mid = matrix_shape(a)
    mid2, h = matrix_shape(b)
    assert mid == mid2
    out = []
    for i in range(g):
        row = []
        for j in range(h):
            acc = None
            for t in range(mid):
                term = a[i][t] * b[t][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def all_zero(rows):
    return all(e.is_zero for row in rows for e in row)


def in_max_ideal(rows):
    return all(e.is_zero or not e.is_unit() for row in rows for e in row)


# ---------------------------------------------------------------------------
# elements and modules
# ---------------------------------------------------------------------------


def test_random_element_lands_in_m(r1):
    rng = randgen.rng_from(7)
    for _ in range(50):
        e = randgen.random_element(r1, rng)
        assert not e.is_unit()


def test_random_module_is_minimized(ex31):
    rng = randgen.rng_from(3)
    for _ in range(30):
        m = randgen.random_module(ex31, rng)
        assert in_max_ideal(m.rows)
        assert m.minimal


def test_homogeneous_modules_are_gradable(ex31):
    rng = randgen.rng_from(5)
    seen = 0
    for _ in range(30):
        m = randgen.random_module(ex31, rng, homogeneous=True)
        if m.h:
            assert grade_matrix(ex31, m.rows) is not None
            seen += 1
    assert seen >= 10


def test_random_module_deterministic(ex31):
    def draw():
        rng = randgen.rng_from(11)
        return [randgen.random_module(ex31, rng).freeze() for _ in range(6)]

    assert draw() == draw()


# ---------------------------------------------------------------------------
# minimal complexes
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(12))
def test_random_complex_squares_to_zero(ex31, seed):
    rng = randgen.rng_from(seed)
    L = randgen.random_minimal_complex(ex31, rng)
    for n in range(len(L.differentials) - 1):
        d, d_next = L.differentials[n], L.differentials[n + 1]
        if matrix_shape(d_next)[1] == 0:
            continue
        assert all_zero(compose(d, d_next))
    for d in L.differentials:
        assert in_max_ideal(d)


def test_twisted_complex_still_squares_to_zero(ex31):
    rng = randgen.rng_from(19)
    L = randgen.random_minimal_complex(ex31, rng)
    for r in (1, 2):
        T = twist(L, r)
        for n in range(len(T.differentials) - 1):
            if matrix_shape(T.differentials[n + 1])[1] == 0:
                continue
            assert all_zero(compose(T.differentials[n], T.differentials[n + 1]))


def test_trailing_zero_stage_occurs(ex31):
    hits = 0
    for seed in range(40):
        L = randgen.random_minimal_complex(ex31, randgen.rng_from(seed))
        if L.ranks[-1] == 0:
            hits += 1
    assert hits >= 5


# ---------------------------------------------------------------------------
# finite projective dimension generator
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(8))
def test_finite_pd_module_has_short_resolution(depth1, seed):
    m = randgen.random_finite_pd_module(depth1, randgen.rng_from(seed))
    res = minimal_free_resolution(m, 4)
    assert all(rk == 0 for rk in res.ranks[2:])


def test_finite_pd_module_has_vanishing_twisted_tor(depth1):
    m = randgen.random_finite_pd_module(depth1, randgen.rng_from(2))
    table = tor_frobenius(m, 1, 3)
    assert table.lengths()[1:] == [0, 0, 0]


# ---------------------------------------------------------------------------
# random rings
# ---------------------------------------------------------------------------


def test_random_rings_parse_and_stay_small():
    rng = randgen.rng_from(0)
    saw_capped = saw_artinian = False
    for _ in range(40):
        alg, _ = randgen.random_ring(rng)
        assert alg.p in (2, 3)
        assert alg.n <= 3
        if alg.artinian:
            saw_artinian = True
        else:
            saw_capped = True
            assert alg.cap <= 12
    assert saw_artinian and saw_capped


def test_random_ring_source_deterministic():
    a = [randgen.random_ring_source(randgen.rng_from(33)) for _ in range(3)]
    b = [randgen.random_ring_source(randgen.rng_from(33)) for _ in range(3)]
    assert a == b
