import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ainfcat.coeff import (
    CoefficientRing,
    CoeffRingMorphism,
    RingError,
    associated_graded,
    novikov_specialize,
)
from ainfcat.graded import GradingDatum, GradingMorphism

Z = GradingDatum.standard()


def mixed_ring(trunc=8):
    # x1 even, x2 odd, x3 even with d(x2) = x3; one NE generator
    from ainfcat.coeff import MonoidSpec

    mono = MonoidSpec(1, ((1,),), ((0,),))
    return CoefficientRing.bulk_polynomial(
        ["a", "t", "s"], degrees=[0, -1, 0], differential=[[0, 0, 0], [0, 0, 0], [0, 1, 0]],
        trunc=trunc, monoid=mono,
    )


# -- an independent model: ordinary polynomials in commuting/anticommuting letters over Q


def oracle_of(elem):
    out = {}
    for (u, k), c in elem.terms.items():
        word = []
        coeff = Fraction(c)
        for i, ki in enumerate(k):
            coeff /= math.factorial(ki)
            word += [i] * ki
        key = (u, tuple(word))
        out[key] = out.get(key, 0) + coeff
    return out


def oracle_mul(a, b, odd, trunc):
    out = {}
    for (u1, w1), c1 in a.items():
        for (u2, w2), c2 in b.items():
            word = list(w1) + list(w2)
            # bubble sort with Koszul signs
            sign = 1
            for i in range(len(word)):
                for j in range(len(word) - 1 - i):
                    if word[j] > word[j + 1]:
                        if odd[word[j]] and odd[word[j + 1]]:
                            sign = -sign
                        word[j], word[j + 1] = word[j + 1], word[j]
            if any(odd[v] and word.count(v) > 1 for v in set(word)):
                continue
            u = tuple(x + y for x, y in zip(u1, u2))
            if sum(u) + len(word) >= trunc:
                continue
            key = (u, tuple(word))
            out[key] = out.get(key, 0) + sign * c1 * c2
    return {k: v for k, v in out.items() if v}


def random_element(ring, rnd, terms=3):
    out = ring.zero
    for _ in range(terms):
        k = [rnd.randint(0, 3), rnd.randint(0, 1), rnd.randint(0, 3)]
        out = out + ring.monomial([rnd.randint(0, 2)], k, rnd.randint(-4, 4))
    return out


def test_examples():
    R = CoefficientRing.bulk_polynomial(["x"], trunc=8)
    assert R.parse("x1^[2]") * R.parse("x1^[3]") == R.parse("10*x1^[5]")
    T = CoefficientRing.bulk_polynomial(["th"], degrees=[1], trunc=8)
    th = T.bulk_var(1)
    assert th * th == T.zero
    P = CoefficientRing.polynomial(2, trunc=6)
    assert P.ne(1) * P.ne(2) == P.monomial([1, 1])


def test_differential_example():
    R = CoefficientRing.bulk_polynomial(["x", "y"], degrees=[0, 1], differential=[[0, 0], [2, 0]], trunc=8)
    assert R.parse("x1^[2]").d() == R.parse("2*x2*x1")
    assert R.one.d() == R.zero
    P = CoefficientRing.polynomial(1, trunc=5)
    assert P.ne(1).d() == P.zero


def test_filtration_levels():
    R = mixed_ring()
    assert R.one.filtration_level() == 0
    assert R.parse("r1*x1^[2]").filtration_level() == 3
    assert R.zero.filtration_level() == math.inf


def test_truncation_drops_high_weight():
    R = mixed_ring(trunc=3)
    assert R.parse("r1") * R.parse("x1^[2]") == R.zero


def test_bulk_differential_checks():
    from ainfcat.coeff import BulkSpec

    with pytest.raises(RingError):
        BulkSpec(("a", "b"), (Z.integer(0), Z.integer(0)), ((0, 0), (1, 0)))


def test_literal_errors():
    R = mixed_ring()
    with pytest.raises(RingError, match="column"):
        R.parse("2*x1 $ 3")
    with pytest.raises(RingError):
        R.parse("x9")


def test_literal_roundtrip():
    R = mixed_ring()
    e = R.parse("3*r1*x1^[2] - x2*x3 + 7")
    assert R.parse(repr(e)) == e


def test_random_triples_against_oracle():
    R = mixed_ring(8)
    odd = [False, True, False]
    rnd = random.Random(11)
    for _ in range(1000):
        a, b, c = (random_element(R, rnd) for _ in range(3))
        ab = a * b
        assert ab * c == a * (b * c)
        assert oracle_of(ab) == oracle_mul(oracle_of(a), oracle_of(b), odd, 8)
        (ae, ao), (_, bo) = a.parity_parts(), b.parity_parts()
        assert ae * b == b * ae
        assert ao * bo == -(bo * ao)
        assert all(isinstance(v, int) for v in (ab * c).terms.values())


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_leibniz_and_square_zero(seed):
    R = mixed_ring(8)
    rnd = random.Random(seed)
    a, b = random_element(R, rnd), random_element(R, rnd)
    ae, ao = a.parity_parts()
    assert (a * b).d() == a.d() * b + ae * b.d() - ao * b.d()
    assert a.d().d() == R.zero


def test_novikov_examples():
    P = CoefficientRing.polynomial(1, trunc=2)
    x = novikov_specialize(P.ne(1), [Fraction(3, 2)])
    assert x.as_dict() == {Fraction(3, 2): 1}
    assert novikov_specialize(P.one, [1]).as_dict() == {0: 1}
    P2 = CoefficientRing.polynomial(1, trunc=3)
    y = novikov_specialize(P2.ne(1) + P2.ne(1, 2), [1])
    assert y.cutoff == 3
    # r^u + r^{2u} at trunc 2: r^{2u} is already outside the ring
    P1 = CoefficientRing.polynomial(1, trunc=2)
    z = novikov_specialize(P1.ne(1) + P1.ne(1, 2), [1])
    assert z.as_dict() == {1: 1}
    with pytest.raises(RingError):
        novikov_specialize(P.ne(1), [0])


def test_novikov_drops_beyond_cutoff():
    from ainfcat.coeff import MonoidSpec

    R = CoefficientRing(Z, MonoidSpec(1, ((1,),), ((0,),)), trunc=4)
    e = R.ne(1) + R.ne(1, 2)
    assert novikov_specialize(e, [Fraction(1, 2)]).as_dict() == {Fraction(1, 2): 1, 1: 1}
    assert novikov_specialize(e, [Fraction(1, 2)]).cutoff == 2
    # value at cutoff 2 dropped: kappa=1 gives T^1 + T^2 with cutoff 4
    assert novikov_specialize(R.ne(1, 3), [1]).as_dict() == {3: 1}


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_novikov_is_multiplicative_and_filtered(seed):
    R = mixed_ring(6)
    rnd = random.Random(seed)
    a, b = random_element(R, rnd), random_element(R, rnd)
    kappa = [Fraction(rnd.randint(1, 5), rnd.randint(1, 3))]
    na, nb = novikov_specialize(a, kappa), novikov_specialize(b, kappa)
    nab = novikov_specialize(a * b, kappa)
    assert nab.as_dict() == (na * nb).as_dict()
    if a.filtration_level() != math.inf and na.terms:
        # filtered: F_k maps into valuation >= k * min kappa restricted to NE part
        assert na.valuation() >= 0
    assert novikov_specialize(a.d(), kappa).as_dict() == {}


def test_associated_graded():
    P = CoefficientRing.polynomial(2, trunc=5)
    gr = associated_graded(P)
    assert gr.piece_basis(0) == [P.one_key]
    assert sorted(gr.piece_basis(1)) == sorted(list(P.ne(j).terms)[0] for j in (1, 2))
    assert gr.datum.ncoords == 2
    R = mixed_ring()
    grr = associated_graded(R)
    a = R.parse("x2")
    assert grr.d(grr.d(a)) == R.zero


def test_ring_morphism_checks():
    P = CoefficientRing.polynomial(1, trunc=6)
    Q = CoefficientRing.polynomial(1, trunc=6)
    f = CoeffRingMorphism(P, Q, GradingMorphism.identity(Z), (Q.ne(1, 2),))
    assert f(P.ne(1, 2)) == Q.ne(1, 4)
    assert f.check([P.parse("1 + 3*r1")]) == []
    bad = CoeffRingMorphism(P, Q, GradingMorphism.identity(Z), (Q.one,))
    assert bad.check() != []
