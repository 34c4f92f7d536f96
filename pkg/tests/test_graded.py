import itertools

import pytest
from hypothesis import given, strategies as st

from ainfcat.graded import (
    GradingDatum,
    GradingError,
    GradingMorphism,
    LedgerError,
    Move,
    SignLedger,
    TorsorSymbol,
    TorsorWord,
    evaluate_ledger,
    koszul_reorder_sign,
    parity,
    parse_ledger,
    reorder_moves,
)

Z = GradingDatum.standard()


def sym(label, g, dual=False, datum=Z):
    return TorsorSymbol(label, datum.integer(g) if isinstance(g, int) else g, dual)


def composition_sign(pa, pb, pc, palpha, pbeta):
    """gamma(a, b, c) = beta(c, alpha(b, a)), with gamma = alpha + beta."""
    start = TorsorWord((sym("gamma", palpha + pbeta), sym("a", pa), sym("b", pb), sym("c", pc)))
    split = SignLedger((Move("split", 0, (("alpha", Z.integer(palpha)), ("beta", Z.integer(pbeta)))),))
    mid, s1 = evaluate_ledger(start, split)
    reorder = reorder_moves(mid, ["beta", "c", "alpha", "b", "a"])
    end, s2 = evaluate_ledger(mid, reorder)
    assert [x.label for x in end.symbols] == ["beta", "c", "alpha", "b", "a"]
    return s1 * s2


def test_parity_examples():
    assert parity(Z.integer(3)) == 1
    assert parity(Z.zero) == 0
    G = GradingDatum(1, (2,), (1, 0), (1, 1))
    assert G.degree(2, 1).parity == 1


def test_torsion_reduction_is_canonical():
    G = GradingDatum(1, (4,), (1, 0), (1, 0))
    assert G.degree(0, 5) == G.degree(0, 1)
    assert G.degree(0, 5).coords == (0, 1)


def test_datum_rejects_even_unit():
    with pytest.raises(GradingError):
        GradingDatum(1, (), (2,), (1,))


def test_presentation_normalizes():
    G, _ = GradingDatum.from_presentation(2, [[0, 2]], [1, 0], [1, 1])
    assert G.free_rank == 1 and G.torsion == (2,)


def test_exhaustive_composition_sign():
    for pa, pb, pc, pal, pbe in itertools.product((0, 1), repeat=5):
        want = (-1) ** (pal * pbe + pal * pc + pa * pb + pa * pc + pb * pc)
        assert composition_sign(pa, pb, pc, pal, pbe) == want


def test_swap_of_two_odd_symbols():
    assert koszul_reorder_sign([Z.integer(1), Z.integer(3)], [1, 0]) == -1
    assert koszul_reorder_sign([Z.integer(1), Z.integer(2)], [0, 1]) == 1


def test_reorder_rejects_bad_permutation():
    with pytest.raises(GradingError):
        koszul_reorder_sign([1, 1], [0, 0])


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_swap_symmetric_and_involutive(g, h):
    w = TorsorWord((sym("a", g), sym("b", h)))
    s_ab = evaluate_ledger(w, SignLedger((Move("swap", 0),)))[1]
    w2 = TorsorWord((sym("b", h), sym("a", g)))
    s_ba = evaluate_ledger(w2, SignLedger((Move("swap", 0),)))[1]
    twice = evaluate_ledger(w, SignLedger((Move("swap", 0), Move("swap", 0))))[1]
    assert s_ab == s_ba and twice == 1


@given(st.lists(st.integers(0, 3), min_size=2, max_size=6), st.randoms(use_true_random=False), st.integers(0, 20))
def test_ledger_concatenation_multiplies(degs, rnd, cut):
    word = TorsorWord(tuple(sym(f"s{i}", g) for i, g in enumerate(degs)))
    labels = [s.label for s in word.symbols]
    rnd.shuffle(labels)
    led = reorder_moves(word, labels)
    cut = min(cut, len(led.moves))
    first, second = led.split_at(cut)
    mid, s1 = evaluate_ledger(word, first)
    _, s2 = evaluate_ledger(mid, second)
    assert s1 * s2 == evaluate_ledger(word, led)[1]


def test_dual_collapse_in_wrong_order_rejected():
    w = TorsorWord((sym("d", 1), sym("d", 1, dual=True)))
    with pytest.raises(LedgerError) as err:
        evaluate_ledger(w, SignLedger((Move("contract", 0),)))
    assert err.value.position == 0


def test_double_dual_directive_rejected():
    with pytest.raises(LedgerError):
        parse_ledger("start a:1\nundual 0\n")


def test_point_to_boundary_pair_costs_a_sign():
    script = parse_ledger(
        """
        start o:0
        expand 0 d:1
        swap 0
        drop 2
        expect d:1 d^:1
        sign -1
        """
    )
    end, sign = script.run()
    assert sign == script.expect_sign == -1


def test_merge_is_positive():
    w = TorsorWord((sym("g", 1), sym("h", 2)))
    end, sign = evaluate_ledger(w, SignLedger((Move("merge", 0, ("gh",)),)))
    assert sign == 1 and end.symbols[0].degree == Z.integer(3)


@pytest.mark.parametrize("n,want", [(0, 1), (1, -1), (2, -1), (3, 1), (4, 1)])
def test_self_gluing_axiom(n, want):
    script = parse_ledger(
        "param n=0\nstart Bm:n Bp:n\naxiom 0 2 -> T:2n ; sign (-1)^(n(n+1)/2) ; cite self gluing\n",
        {"n": n},
    )
    assert script.run()[1] == want


def test_axiom_must_preserve_degree():
    with pytest.raises(LedgerError):
        parse_ledger("start a:1\naxiom 0 1 -> b:2 ; sign 1\n").run()


def test_ledger_errors_carry_line():
    with pytest.raises(LedgerError) as err:
        parse_ledger("start a:1\n\nfrobnicate 0\n")
    assert err.value.line == 3


def test_grading_morphism_reduction():
    Zmod = GradingDatum.cyclic(6)
    phi = GradingMorphism(Z, Zmod, ((1,),))
    assert phi(Z.integer(7)) == Zmod.integer(1)
    assert GradingMorphism.identity(Z)(Z.integer(5)) == Z.integer(5)


def test_grading_morphism_must_respect_unit():
    Zmod = GradingDatum.cyclic(6)
    with pytest.raises(GradingError):
        GradingMorphism(Z, Zmod, ((3,),))
