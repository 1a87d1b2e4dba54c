import random

import pytest

from frobtor import ringkit
from frobtor.errors import NotArtinian, PresentationError, RingSyntaxError
from frobtor.ringkit import (
    LocalAlgebra,
    algebra_length,
    build_algebra,
    frob_power,
    grevlex_key,
    groebner_basis,
    monomials_of_degree,
    parse_presentation,
    poly_freeze,
    poly_lead,
    presentation_to_string,
    reduce_full,
)

R1_SRC = "ring F 2 [x,y] / (x^2, x*y, y^2) cap 8"
R2_SRC = "ring F 2 [x,y] / (x*y, x^2) cap 8"
M3_SRC = "ring F 3 [x,y] / (x^3, x^2*y, x*y^2, y^3)"


@pytest.fixture(scope="module")
def r1():
    return build_algebra(parse_presentation(R1_SRC))


@pytest.fixture(scope="module")
def r2():
    return build_algebra(parse_presentation(R2_SRC))


def test_grevlex_order_degree_two():
    mons = monomials_of_degree(2, 2)  # ascending
    # grevlex: y^2 < x*y < x^2
    assert mons == [(0, 2), (1, 1), (2, 0)]
    assert grevlex_key((1, 0)) > grevlex_key((0, 1))  # x > y


def test_build_r1(r1):
    assert r1.artinian
    assert r1.std_monomials == [(0, 0), (0, 1), (1, 0)]  # 1, y, x
    assert algebra_length(r1) == 3
    assert r1.graded


def test_build_r2(r2):
    assert not r2.artinian
    # 1, x, y, y^2, ..., y^7
    expected = [(0, 0), (0, 1), (1, 0)] + [(0, d) for d in range(2, 8)]
    assert sorted(r2.std_monomials, key=grevlex_key) == sorted(expected, key=grevlex_key)
    assert r2.dim == 9
    with pytest.raises(NotArtinian):
        algebra_length(r2)


def test_build_field():
    alg = build_algebra(parse_presentation("ring F 2 [x] / (x)"))
    assert alg.artinian and alg.dim == 1 and alg.is_field()
    assert algebra_length(alg) == 1


def test_build_m3_cube():
    alg = build_algebra(parse_presentation(M3_SRC))
    assert alg.artinian
    assert alg.dim == 6  # 1, x, y, x^2, xy, y^2
    assert algebra_length(alg) == 6


def test_nf_examples(r1, r2):
    assert r1.element_from_string("x^2 + x") == r1.var("x")
    assert r2.element_from_string("y*x + y^3") == r2.element_from_string("y^3")
    assert r1.element_from_string("0").is_zero
    assert r1.nf({}).is_zero


def test_nf_idempotent_random(r1, r2):
    rng = random.Random(7)
    for alg in (r1, r2):
        for _ in range(200):
            raw = {
                tuple(rng.randrange(4) for _ in range(alg.n)): rng.randrange(alg.p)
                for _ in range(rng.randrange(1, 5))
            }
            e = alg.nf(raw)
            again, _ = alg.nf_dict(e.terms)
            assert again == e.terms


def test_frob_power_examples(r1, r2):
    x, y = r1.var("x"), r1.var("y")
    assert frob_power(x + y, 1).is_zero  # m^2 = 0 kills squares
    assert frob_power(r2.var("y"), 1) == r2.element_from_string("y^2")
    assert frob_power(r1.one(), 3) == r1.one()
    with pytest.raises(ValueError):
        frob_power(x, 0)


@pytest.mark.parametrize("src,r", [(R1_SRC, 1), (R2_SRC, 1), (R2_SRC, 2), (M3_SRC, 1)])
def test_frob_power_is_ring_hom(src, r):
    """frob agrees with repeated multiplication and is additive/multiplicative."""
    alg = build_algebra(parse_presentation(src))
    rng = random.Random(100 + r)
    mons = alg.std_monomials
    for _ in range(1000):
        def rand_elem():
            terms = {}
            for _ in range(rng.randrange(1, 4)):
                m = mons[rng.randrange(len(mons))]
                terms[m] = rng.randrange(1, alg.p)
            return alg.nf(terms)

        a, b = rand_elem(), rand_elem()
        fa, fb = frob_power(a, r), frob_power(b, r)
        assert frob_power(a + b, r) == fa + fb
        assert frob_power(a * b, r) == fa * fb
        # dual route: genuine repeated multiplication
        q = alg.p ** r
        power = alg.one()
        for _ in range(q):
            power = power * a
        assert power == fa


def test_division_trace_invariant(r2):
    """e - nf(e) must lie in the relation ideal: check the quotient trace."""
    rng = random.Random(3)
    gens = r2.presentation.relation_dicts()
    pairs = [(poly_lead(g), g) for g in r2.gb]
    for _ in range(60):
        raw = {
            (rng.randrange(4), rng.randrange(4)): rng.randrange(1, 2)
            for _ in range(rng.randrange(1, 4))
        }
        trace = [{} for _ in pairs]
        rem = reduce_full(dict(raw), pairs, r2.p, trace=trace)
        # raw = sum trace_i * gb_i + rem  (as raw polynomials)
        acc = dict(rem)
        for q, (_, g) in zip(trace, pairs):
            acc = ringkit.poly_add(acc, ringkit.poly_mul(q, g, r2.p), r2.p)
        assert acc == {m: c for m, c in raw.items() if c % r2.p}
    # every original generator lies in the ideal of the reduced basis
    for g in gens:
        assert not reduce_full(dict(g), pairs, r2.p)


def test_monomial_ideal_std_brute_force():
    src = "ring F 2 [x,y,z] / (x^2, x*y, x*z) cap 6"
    alg = build_algebra(parse_presentation(src))
    rel_leads = [(2, 0, 0), (1, 1, 0), (1, 0, 1)]
    brute = []
    for d in range(alg.cap):
        for m in monomials_of_degree(3, d):
            if not any(ringkit.mono_divides(l, m) for l in rel_leads):
                brute.append(m)
    assert sorted(alg.std_monomials, key=grevlex_key) == sorted(brute, key=grevlex_key)


def test_parse_roundtrip():
    for src in [R1_SRC, R2_SRC, M3_SRC,
                "ring F 5 [a,b] / (a^2 + 4*b^2, a*b) cap 9",
                "ring F 2 [x,y] / (x*y, x^2) cap 8\nmodule M = coker [[x], [y]]\nmodule K = k"]:
        pres = parse_presentation(src)
        printed = presentation_to_string(pres)
        assert parse_presentation(printed) == pres


def test_parse_comments_and_signs():
    pres = parse_presentation(
        "# a test ring\nring F 3 [x,y] / (x^2 - y^2, # inline\n x*y) cap 4"
    )
    assert dict(pres.relations[0]) == {(2, 0): 1, (0, 2): 2}


def test_parse_errors_carry_position():
    with pytest.raises(RingSyntaxError) as e:
        parse_presentation("ring F 2 [x,y] / (x^2 @)")
    assert "line 1" in str(e.value)
    with pytest.raises(RingSyntaxError):
        parse_presentation("ring F 2 [x y] / (x)")
    with pytest.raises(RingSyntaxError):
        parse_presentation("rong F 2 [x] / (x)")


def test_presentation_validation():
    with pytest.raises(PresentationError, match="not prime"):
        parse_presentation("ring F 4 [x] / (x^2)")
    with pytest.raises(PresentationError, match="[Dd]uplicate"):
        parse_presentation("ring F 2 [x,x] / (x^2)")
    with pytest.raises(PresentationError, match="constant term"):
        parse_presentation("ring F 2 [x] / (x^2 + 1)")
    with pytest.raises(PresentationError, match="cap"):
        parse_presentation("ring F 2 [x] / (x^2) cap 1")
    with pytest.raises(PresentationError, match="cap 3 too small"):
        build_algebra(parse_presentation("ring F 2 [x,y] / (x^3*y) cap 3"))


def test_zero_ring_rejected():
    pres = parse_presentation("ring F 2 [x,y] / (x, x*y) cap 4")
    # sneak a unit in behind the parser's back: x and x+y and y, then 1 via gb?
    bad = ringkit.RingPresentation(
        p=2,
        variables=("x",),
        relations=(poly_freeze({(1,): 1}), poly_freeze({(1,): 1, (0,): 1})),
        cap=4,
    )
    with pytest.raises(PresentationError, match="zero ring"):
        LocalAlgebra(bad)
    # while the honest presentation is fine
    assert build_algebra(pres).dim > 0


def test_cap_ignored_for_artinian():
    alg = build_algebra(parse_presentation("ring F 2 [x,y] / (x^2, x*y, y^4) cap 2"))
    assert alg.artinian
    assert alg.dim == 5
    assert set(alg.std_monomials) == {(0, 0), (1, 0), (0, 1), (0, 2), (0, 3)}


def test_at_cap_shares_groebner(r2):
    big = r2.verification_algebra()
    assert big.cap == 2 * r2.cap - 2
    assert big.gb is r2.gb
    assert big.dim == 3 + (big.cap - 2)
    assert r2.at_cap(r2.cap) is r2


def test_mult_operator_matches_multiplication(r2):
    rng = random.Random(11)
    for _ in range(40):
        mons = r2.std_monomials
        e = r2.nf({mons[rng.randrange(len(mons))]: 1})
        op = r2.mult_operator(e)
        j = rng.randrange(r2.dim)
        prod = e * r2.basis_element(j)
        assert (op[:, j] == prod.to_vector()).all()


def test_in_m_power(r2, r1):
    x = r2.var("x")
    y = r2.var("y")
    assert r2.in_m_power(x, 1)
    assert not r2.in_m_power(x, 2)
    assert r2.in_m_power(y * y, 2)
    assert r2.in_m_power(r2.zero(), 5)
    assert not r1.in_m_power(r1.one(), 1)
    # x*y is 0 in r2, hence in every power of m
    assert r2.in_m_power(x * y, 7)


def test_truncation_flag(r2):
    y7 = r2.element_from_string("y^7")
    assert not y7.truncated
    y8 = y7 * r2.var("y")
    assert y8.is_zero and y8.truncated
    # artinian algebras never truncate
    r1 = build_algebra(parse_presentation(R1_SRC))
    assert not (r1.var("x") * r1.var("x")).truncated
