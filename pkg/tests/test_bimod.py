import pytest
from hypothesis import given, settings, strategies as st

from ainfcat import corpus
from ainfcat.ainfty import Cochain, Functor, hochschild_differential
from ainfcat.bimod import (
    BimoduleHom,
    bimod_brace,
    bimod_differential,
    check_bimodule,
    compose,
    cshriek,
    diagonal,
    generation_hypothesis,
    mu_bar,
    pullback_bimodule,
    pullback_hom,
    shift_bimodule,
)
from ainfcat.hoch import HochschildChain, b

from oracles import random_bimodule_hom, seeded

CATS = {"point": corpus.point, "dual": corpus.dual_numbers, "dg": corpus.dg_dual_numbers,
        "massey": corpus.massey, "two": corpus.two_objects, "curved": lambda: corpus.curved_toy(3)}


@pytest.mark.parametrize("name", sorted(CATS))
def test_diagonal_is_a_bimodule(name):
    M = diagonal(CATS[name]())
    assert check_bimodule(M, 3).passed
    assert bimod_differential(BimoduleHom.identity(M), 3).is_zero()


def test_diagonal_of_point():
    M = diagonal(corpus.point())
    assert list(M.keys) == ["e"]
    assert M.mu.table == {((), "e", ("e",)): {"e": -corpus.point().ring.one},
                          (("e",), "e", ()): {"e": -corpus.point().ring.one}}


def test_corrupted_diagonal_fails():
    M = diagonal(corpus.dual_numbers())
    mu = {k: dict(v) for k, v in M.mu.table.items()}
    mu[((), "x", ("1",))]["x"] = -mu[((), "x", ("1",))]["x"]
    assert not check_bimodule(M.with_mu(mu), 3).passed


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["dual", "dg", "massey", "two", "curved"]), st.integers(0, 1))
def test_differential_squares_to_zero(seed, name, parity):
    M = diagonal(CATS[name]())
    rho = random_bimodule_hom(M, M, parity, 2, seeded(seed))
    assert bimod_differential(bimod_differential(rho, 4), 4).truncate(2).is_zero()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["dual", "dg", "two"]))
def test_composition_is_associative(seed, name):
    M = diagonal(CATS[name]())
    rnd = seeded(seed)
    psi, rho, tau = (random_bimodule_hom(M, M, rnd.randint(0, 1), 2, rnd) for _ in range(3))
    left = compose(compose(psi, rho, 4), tau, 2)
    right = compose(psi, compose(rho, tau, 4), 2)
    assert (left - right).truncate(2).is_zero()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 1), st.integers(0, 1))
def test_differential_is_a_derivation(seed, p, q):
    M = diagonal(corpus.dg_dual_numbers())
    rnd = seeded(seed)
    psi, rho = random_bimodule_hom(M, M, p, 2, rnd), random_bimodule_hom(M, M, q, 2, rnd)
    lhs = bimod_differential(compose(psi, rho, 4), 2)
    a = compose(bimod_differential(psi, 4), rho, 2)
    c = compose(psi, bimod_differential(rho, 4), 2)
    # the second term carries the Koszul sign (-1)^{|psi|}
    rhs = a + (-c if psi.parity else c)
    assert (lhs - rhs).truncate(2).is_zero()


def test_identity_brace():
    M = diagonal(corpus.two_objects())
    ident = BimoduleHom.identity(M)
    rho = random_bimodule_hom(M, M, 1, 2, seeded(4))
    assert bimod_brace(rho, [], ident, [], max_len=2).table == rho.truncate(2).table


def test_shifts_compose():
    M = diagonal(corpus.dg_dual_numbers())
    a, bb = shift_bimodule(2, M), shift_bimodule(1, shift_bimodule(1, M))
    assert a.keys == bb.keys and a.mu.table == bb.mu.table
    assert check_bimodule(shift_bimodule(1, M), 3).passed
    assert shift_bimodule(0, M).mu.table == M.mu.table


def test_pullback_along_identities():
    cat = corpus.dual_numbers()
    M = diagonal(cat)
    ident = Functor.identity_of(cat)
    pb = pullback_bimodule(M, ident, ident)
    relabel = {k: {(n, "*", "*"): c for n, c in v.items()} for k, v in M.mu.table.items()}
    relabel_cells = {(lw, (m, "*", "*"), rw) for (lw, m, rw) in M.mu.table}
    assert {k for k in pb.mu.table} == relabel_cells
    assert sorted(pb.mu.table.values(), key=repr) == sorted(relabel.values(), key=repr)
    hom = pullback_hom(BimoduleHom.identity(M), ident, ident, pb, pb)
    assert hom.table == BimoduleHom.identity(pb).table


def test_pullback_preserves_bimodule_equation():
    D, P = corpus.dual_numbers(), corpus.point()
    F = Functor(D, P, {"*": "*"}, {("*", ("1",)): {"e": P.ring.one}})
    assert check_bimodule(pullback_bimodule(diagonal(P), F, F), 3).passed


@pytest.mark.parametrize("name", ["point", "dual", "dg", "massey", "two"])
def test_cshriek_is_a_bimodule(name):
    assert check_bimodule(cshriek(CATS[name](), 2), 2).passed


def test_cshriek_of_point():
    B = cshriek(corpus.point(), 2)
    assert sorted(B.keys) == [("*", (), "e", "e"), ("*", ("e",), "e", "e"), ("*", ("e", "e"), "e", "e")]
    assert [B.keys[k][2].as_int() for k in sorted(B.keys)] == [0, 1, 2]


def test_mu_bar_of_point_generator_is_minus_unit():
    P = corpus.point()
    B = cshriek(P, 2)
    gen = HochschildChain(P, B, {(("*", (), "e", "e"), ()): P.ring.one})
    assert mu_bar(gen, P, 2).table == {("*", ()): {"e": -P.ring.one}}


def test_mu_bar_of_zero_chain():
    P = corpus.point()
    B = cshriek(P, 2)
    assert mu_bar(HochschildChain(P, B, {}), P, 2).is_zero()


@pytest.mark.parametrize("name", ["point", "dual", "dg", "massey", "two"])
def test_mu_bar_anticommutes_with_differentials(name):
    # del(mu_bar(c)) = -mu_bar(b c) on the word window
    cat = CATS[name]()
    W = 2
    B = cshriek(cat, W)
    for key in sorted(B.keys, key=repr)[:150]:
        for s in range(2):
            for cs in cat.words(B.tgt(key), s):
                end = cat.tgt(cs[-1]) if cs else B.tgt(key)
                if end != B.src(key):
                    continue
                ch = HochschildChain(cat, B, {(key, tuple(cs)): cat.ring.one})
                lhs = hochschild_differential(mu_bar(ch, cat, W), cat, W)
                rhs = mu_bar(b(ch), cat, W)
                assert (lhs + rhs).truncate(W).is_zero()


def unit_cochain(cat):
    t = {(o, ()): {k: cat.ring.one} for o in cat.objects for k in cat.hom_keys(o, o) if k in ("e", "1", "iX", "iY")}
    return Cochain(cat, cat.value_space, 1, t)


def test_generation_hypothesis():
    P = corpus.point()
    assert generation_hypothesis(P, ["*"], unit_cochain(P)).passed
    A = corpus.a2_quiver()
    u = unit_cochain(A)
    assert generation_hypothesis(A, ["X", "Y"], u, chain_len=1).passed
    assert not generation_hypothesis(A, ["X"], u, chain_len=1).passed
    assert not generation_hypothesis(A, ["Y"], u, chain_len=1).passed
