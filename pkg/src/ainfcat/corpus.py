"""Small categories used by the tests, demos, fixtures and CLI."""

from __future__ import annotations

from .ainfty import AinfCategory
from .coeff import CoefficientRing, MonoidSpec
from .graded import GradingDatum


def integers() -> CoefficientRing:
    return CoefficientRing.integers()


def t_adic(trunc: int = 6) -> CoefficientRing:
    """``Z[t]`` with ``|t| = 0``, truncated at ``t^trunc``."""
    Z = GradingDatum.standard()
    return CoefficientRing(Z, MonoidSpec(1, ((1,),), ((0,),)), trunc=trunc, name="Z[t]")


def point(ring: CoefficientRing | None = None) -> AinfCategory:
    """One object, ``hom = Z e`` in degree 0 with ``e e = e``."""
    return AinfCategory.from_algebra(ring or integers(), {"e": 0}, {("e", "e"): {"e": 1}}, name="point")


def dual_numbers(ring: CoefficientRing | None = None) -> AinfCategory:
    """``Q[x]/x^2`` with ``|x| = 0``."""
    prods = {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1}}
    return AinfCategory.from_algebra(ring or integers(), {"1": 0, "x": 0}, prods, name="dual numbers")


def _exterior_products(gens: dict) -> dict:
    """Products in ``Q[x]/x^2 (x) Lambda(eps)`` with ``x`` even and ``eps`` odd."""
    mono = {"1": (0, 0), "x": (1, 0), "e": (0, 1), "xe": (1, 1)}
    back = {v: k for k, v in mono.items()}
    out = {}
    for a, (xa, ea) in mono.items():
        for b, (xb, eb) in mono.items():
            if xa + xb > 1 or ea + eb > 1:
                continue
            out[(a, b)] = {back[(xa + xb, ea + eb)]: 1}
    return out


def dg_dual_numbers(ring: CoefficientRing | None = None) -> AinfCategory:
    """``Q[x]/x^2 (x) Lambda(eps)`` with ``|eps| = -1`` and ``d eps = x``; cohomology ``span(1, x eps)``."""
    degs = {"1": 0, "x": 0, "e": -1, "xe": -1}
    return AinfCategory.from_algebra(ring or integers(), degs, _exterior_products(degs), {"e": {"x": 1}},
                                     name="dg dual numbers")


def massey(ring: CoefficientRing | None = None) -> AinfCategory:
    """Unital minimal algebra on ``1, a, b`` (``|a| = 1``, ``|b| = 2``) with ``mu^3(a, a, a) = b``."""
    cat = AinfCategory.from_algebra(
        ring or integers(), {"1": 0, "a": 1, "b": 2},
        {("1", "1"): {"1": 1}, ("1", "a"): {"a": 1}, ("a", "1"): {"a": 1},
         ("1", "b"): {"b": 1}, ("b", "1"): {"b": 1}},
        name="massey")
    mu = dict(cat.mu.table)
    mu[("*", ("a", "a", "a"))] = {"b": cat.ring.one}
    return cat.with_mu(mu)


def two_objects(ring: CoefficientRing | None = None) -> AinfCategory:
    """The path algebra of ``X -> Y`` with an odd loop ``u`` on ``Y`` (``u^2 = 0``, ``d u = 0``)."""
    morph = {"iX": ("X", "X", 0), "iY": ("Y", "Y", 0), "f": ("X", "Y", 0), "u": ("Y", "Y", 1),
             "fu": ("X", "Y", 1)}
    prods = {("iX", "iX"): {"iX": 1}, ("iY", "iY"): {"iY": 1}, ("iX", "f"): {"f": 1}, ("f", "iY"): {"f": 1},
             ("iY", "u"): {"u": 1}, ("u", "iY"): {"u": 1}, ("f", "u"): {"fu": 1}, ("iX", "fu"): {"fu": 1},
             ("fu", "iY"): {"fu": 1}}
    return AinfCategory.from_dg(ring or integers(), ["X", "Y"], morph, prods, name="two objects")


def a2_quiver(ring: CoefficientRing | None = None) -> AinfCategory:
    """The path algebra of ``X -> Y`` in degree 0; smooth, and generated by both objects together."""
    morph = {"iX": ("X", "X", 0), "iY": ("Y", "Y", 0), "f": ("X", "Y", 0)}
    prods = {("iX", "iX"): {"iX": 1}, ("iY", "iY"): {"iY": 1}, ("iX", "f"): {"f": 1}, ("f", "iY"): {"f": 1}}
    return AinfCategory.from_dg(ring or integers(), ["X", "Y"], morph, prods, name="A2 quiver")


def curved_toy(trunc: int = 6) -> AinfCategory:
    """Over ``Z[t]``: ``1, x, y`` with ``|x| = 1``, ``|y| = 2``, ``d x = y`` and curvature ``t y``.

    ``b = t x`` is a bounding cochain.
    """
    R = t_adic(trunc)
    t = R.ne(1)
    degs = {"1": 0, "x": 1, "y": 2}
    prods = {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1},
             ("1", "y"): {"y": 1}, ("y", "1"): {"y": 1}}
    return AinfCategory.from_algebra(R, degs, prods, {"x": {"y": 1}}, curvature={"y": t}, name="curved toy")


def obstructed_toy(trunc: int = 6) -> AinfCategory:
    """Over ``Z[t]``: ``1, y`` with ``|y| = 2`` and curvature ``t y``, which is not exact."""
    R = t_adic(trunc)
    degs = {"1": 0, "y": 2}
    prods = {("1", "1"): {"1": 1}, ("1", "y"): {"y": 1}, ("y", "1"): {"y": 1}}
    return AinfCategory.from_algebra(R, degs, prods, curvature={"y": R.ne(1)}, name="obstructed toy")


def single_sign_corruptions(cat: AinfCategory):
    """Every category obtained by negating one structure constant of ``mu``."""
    for key in sorted(cat.mu.table, key=repr):
        for out in sorted(cat.mu.table[key], key=repr):
            mu = {k: dict(v) for k, v in cat.mu.table.items()}
            mu[key][out] = -mu[key][out]
            yield (key, out), cat.with_mu(mu, name=f"{cat.name} with {key[1]}->{out} negated")


def acceptance_corpus(trunc: int = 6) -> list:
    return [point(), dual_numbers(), dg_dual_numbers(), curved_toy(trunc)]


def extended_corpus(trunc: int = 6) -> list:
    return acceptance_corpus(trunc) + [massey(), two_objects(), a2_quiver()]
