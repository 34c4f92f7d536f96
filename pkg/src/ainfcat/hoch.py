"""Hochschild chains with bimodule coefficients, ``b``, ``b^{1|1}``, cap product, functoriality and HH ranks.

A chain term ``m[c_1|...|c_s]`` is stored as the key ``(m, (c_1, ..., c_s))``
with ``m`` a basis key of the coefficient bimodule, ``m in M(C_s, C_0)`` and
``c_i in C(C_{i-1}, C_i)``.  Chains of the category itself use the shifted
diagonal; the one-step shift of those chains is left implicit, so degrees
below add one by hand.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Mapping, Sequence

from .ainfty import (
    AinfCategory,
    CategoryError,
    Cochain,
    Functor,
    apply_multilinear,
    hochschild_differential,
)
from .bimod import Bimodule, BimoduleHom, _odd_sign, diagonal
from .coeff import RingElement
from .graded import GradingDatum, Move, SignLedger, TorsorSymbol, TorsorWord, evaluate_ledger
from .linalg import rank_q

__all__ = [
    "HochschildChain",
    "b",
    "b11",
    "cap",
    "cap_sign",
    "rho_pushforward",
    "functor_pushforward",
    "hh_compute",
    "HHResult",
    "WindowError",
]


class WindowError(ValueError):
    """Raised when a requested degree cannot be computed exactly from a finite truncation."""


def _neg_odd(r: RingElement) -> RingElement:
    return _odd_sign(r, 1)


class HochschildChain:
    """A finite sum of chain terms ``{(m, cs): coeff}`` with coefficients in ``module``."""

    def __init__(self, cat: AinfCategory, module: Bimodule | None = None, terms: Mapping | None = None):
        self.cat = cat
        self.module = module if module is not None else diagonal(cat)
        self.terms = {}
        for (m, cs), r in (terms or {}).items():
            cs = tuple(cs)
            self._check(m, cs)
            if r:
                self.terms[(m, cs)] = self.terms.get((m, cs), cat.ring.zero) + r
        self.terms = {k: v for k, v in self.terms.items() if v}

    def _check(self, m, cs):
        cat, M = self.cat, self.module
        start = M.tgt(m)
        for c in cs:
            if cat.src(c) != start:
                raise CategoryError(f"chain {m}{list(cs)} is not cyclically composable")
            start = cat.tgt(c)
        if start != M.src(m):
            raise CategoryError(f"chain {m}{list(cs)} does not close up")

    def _new(self, terms) -> "HochschildChain":
        out = HochschildChain.__new__(HochschildChain)
        out.cat, out.module = self.cat, self.module
        out.terms = {k: v for k, v in terms.items() if v}
        return out

    def objects(self, m, cs) -> list:
        return [self.module.tgt(m)] + [self.cat.tgt(c) for c in cs]

    def term_parity(self, m, cs) -> int:
        return (self.module.par(m) + sum(self.cat.par(c) for c in cs)) % 2

    def term_degree(self, m, cs):
        g = self.module.degree(m)
        for c in cs:
            g = g + self.cat.shifted_degree(c)
        return g

    def __add__(self, other: "HochschildChain") -> "HochschildChain":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, self.cat.ring.zero) + v
        return self._new(t)

    def __neg__(self) -> "HochschildChain":
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r) -> "HochschildChain":
        return self._new({k: r * v for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not any(self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, HochschildChain):
            return NotImplemented
        return (self - other).is_zero()

    def max_len(self) -> int:
        return max((len(cs) for (_, cs) in self.terms), default=0)

    def below(self, trunc: int | None) -> "HochschildChain":
        if trunc is None:
            return self
        ring = self.cat.ring
        return self._new({k: RingElement(ring, {m: x for m, x in v.terms.items() if ring.weight(m) < trunc})
                          for k, v in self.terms.items()})

    def closed(self, max_len: int | None = None) -> bool:
        return b(self).is_zero()

    def describe(self) -> list:
        return [{"m": str(m), "c": [str(c) for c in cs], "coeff": str(r)}
                for (m, cs), r in sorted(self.terms.items(), key=repr)]

    def __repr__(self):
        return f"HochschildChain({len(self.terms)} terms)"


def _rot_sign(cat, M, m, cs, k) -> int:
    back = sum(cat.par(c) for c in cs[k:])
    front = M.par(m) + sum(cat.par(c) for c in cs[:k])
    return -1 if (back * front) % 2 else 1


def b(chain: HochschildChain) -> HochschildChain:
    """The Hochschild differential: ``d_R``, the wrap-around ``mu_M`` terms and the inner ``mu`` terms."""
    cat, M = chain.cat, chain.module
    out: dict = {}

    def put(key, r):
        if r:
            out[key] = out.get(key, cat.ring.zero) + r

    for (m, cs), r in chain.terms.items():
        put((m, cs), r.d())
        rr = _neg_odd(r)
        s = len(cs)
        objs = chain.objects(m, cs)
        for k in range(s + 1):
            rot = _rot_sign(cat, M, m, cs, k)
            for j in range(k + 1):
                img = M.mu.table.get((cs[k:], m, cs[:j]))
                if img:
                    for n, c in img.items():
                        put((n, cs[j:k]), rot * rr * c)
        pm = M.par(m)
        for j in range(s + 1):
            p = pm + sum(cat.par(c) for c in cs[:j])
            sgn = -1 if p % 2 else 1
            for k in range(j, s + 1):
                img = cat.mu.table.get((objs[j], cs[j:k]))
                if img:
                    for z, c in img.items():
                        put((m, cs[:j] + (z,) + cs[k:]), sgn * rr * _odd_sign(c, p))
    return chain._new(out)


def b11(phi: Cochain, chain: HochschildChain) -> HochschildChain:
    """``sum mu(c_{k+1}.., phi(..), .., c_s, c_0, c_1, .., c_j)[c_{j+1}|..|c_k]`` on diagonal chains."""
    cat = chain.cat
    M = chain.module
    ring = cat.ring
    one = ring.one
    out: dict = {}
    mu_look = lambda o, keys, ms: cat.mu.table.get((o, keys))  # noqa: E731
    slot_par = lambda key, is_mod: cat.par(key)  # noqa: E731
    maxphi = phi.max_len
    for (c0, cs), r in chain.terms.items():
        s = len(cs)
        objs = chain.objects(c0, cs)
        rr = _odd_sign(r, 1 + phi.parity)
        for k in range(s + 1):
            rot = _rot_sign(cat, M, c0, cs, k)
            front = cs[k:]
            fobjs = objs[k:] + [M.tgt(c0)]
            for a in range(len(front) + 1):
                pre_par = sum(cat.par(c) for c in front[:a]) % 2
                psign = -1 if (phi.parity * pre_par) % 2 else 1
                for bb in range(a, min(len(front), a + maxphi) + 1):
                    val = phi.table.get((fobjs[a], front[a:bb]))
                    if not val:
                        continue
                    for j in range(k + 1):
                        slots = [{c: one} for c in front[:a]] + [val] + [{c: one} for c in front[bb:]] + \
                                [{c0: one}] + [{c: one} for c in cs[:j]]
                        v = apply_multilinear(mu_look, 1, objs[k], slots, None, slot_par, ring)
                        for z, c in v.items():
                            key = (z, cs[j:k])
                            out[key] = out.get(key, ring.zero) + rot * psign * rr * c
    return chain._new(out)


@lru_cache(maxsize=None)
def cap_sign() -> int:
    """Sign of identifying ``sigma(mu) sigma_1^v`` with the empty word via ``sigma(mu) = sigma_1``."""
    one = GradingDatum.standard().integer(1)
    word = TorsorWord((TorsorSymbol("s1", one), TorsorSymbol("s1", one, True)))
    return evaluate_ledger(word, SignLedger((Move("swap", 0), Move("contract", 0))))[1]


def cap(alpha: Cochain, chain: HochschildChain) -> HochschildChain:
    """``alpha cap a``: ``b^{1|1}`` with the trivialization sign of :func:`cap_sign`."""
    out = b11(alpha, chain)
    return out if cap_sign() > 0 else -out


def rho_pushforward(rho: BimoduleHom, chain: HochschildChain) -> HochschildChain:
    """``sum rho^{s-k|1|j}(c_{k+1}, .., c_s, m, c_1, .., c_j)[c_{j+1}|..|c_k]``."""
    cat, M = chain.cat, chain.module
    out: dict = {}
    for (m, cs), r in chain.terms.items():
        rr = _odd_sign(r, rho.parity)
        s = len(cs)
        for k in range(s + 1):
            rot = _rot_sign(cat, M, m, cs, k)
            for j in range(k + 1):
                img = rho.table.get((cs[k:], m, cs[:j]))
                if img:
                    for n, c in img.items():
                        key = (n, cs[j:k])
                        out[key] = out.get(key, cat.ring.zero) + rot * rr * c
    res = HochschildChain.__new__(HochschildChain)
    res.cat, res.module = cat, rho.target
    res.terms = {k: v for k, v in out.items() if v}
    return res


def _expand_blocks(F: Functor, objs: Sequence, cs: Sequence, max_zero: int):
    """All ways of cutting ``cs`` into ``F`` blocks, with at most ``max_zero`` empty blocks.

    Yields lists of output vectors, one per block.
    """
    n = len(cs)

    def rec(p, zeros, acc):
        if p == n:
            yield list(acc)
        if F.has_zero_length(objs[p]) and zeros < max_zero:
            v = F.value(objs[p], ())
            if v:
                acc.append(v)
                yield from rec(p, zeros + 1, acc)
                acc.pop()
        for q in range(p + 1, min(n, p + F.max_len) + 1):
            v = F.value(objs[p], tuple(cs[p:q]))
            if v:
                acc.append(v)
                yield from rec(q, zeros, acc)
                acc.pop()

    yield from rec(0, 0, [])


def _tensor_terms(vectors: Sequence[Mapping], par, ring):
    """Expand a tensor of vectors, pulling coefficients to the front past earlier keys."""
    items = [list(v.items()) for v in vectors]
    for combo in product(*items):
        coeff = ring.one
        running = 0
        for key, c in combo:
            coeff = coeff * _odd_sign(c, running)
            if not coeff:
                break
            running += par(key)
        if coeff:
            yield tuple(k for k, _ in combo), coeff


def functor_pushforward(F: Functor, chain: HochschildChain, max_zero: int | None = None) -> HochschildChain:
    """``F_*`` on diagonal chains: ``F^{s+1+t}`` on the wrapped piece, then ``F`` blocks on the rest.

    Empty blocks use ``F^0``; each lies in positive filtration, so their
    total number is capped by the truncation order of the ring.
    """
    cat, D = F.source, F.target
    ring = D.ring
    if max_zero is None:
        max_zero = (ring.trunc - 1) if ring.trunc else 0
    if F.identity:
        return HochschildChain(D, diagonal(D), dict(chain.terms))
    out: dict = {}
    for (c0, cs), r in chain.terms.items():
        s = len(cs)
        objs = chain.objects(c0, cs)
        for k in range(s + 1):
            rot = _rot_sign(cat, chain.module, c0, cs, k)
            for j in range(k + 1):
                wrap = cs[k:] + (c0,) + cs[:j]
                head = F.value(objs[k], wrap)
                if not head:
                    continue
                mid = cs[j:k]
                for blocks in _expand_blocks(F, objs[j:k + 1], mid, max_zero):
                    for keys, coeff in _tensor_terms([head] + blocks, D.par, ring):
                        key = (keys[0], keys[1:])
                        out[key] = out.get(key, ring.zero) + rot * r * coeff
    res = HochschildChain.__new__(HochschildChain)
    res.cat, res.module = D, diagonal(D)
    res.terms = {k: v for k, v in out.items() if v}
    return res


# ---------------------------------------------------------------------------
# Hochschild invariants over a field


class HHResult:
    def __init__(self, kind: str, ranks: dict, window: dict):
        self.kind = kind
        self.ranks = ranks
        self.window = window

    def as_dict(self) -> dict:
        return {"kind": self.kind, "ranks": {str(k): v for k, v in sorted(self.ranks.items())},
                "window": self.window}

    def __repr__(self):
        return f"HHResult({self.kind}, {self.ranks})"


def _int_degree(g) -> int:
    v = g.as_int()
    if v is None:
        raise WindowError("Hochschild ranks need an integer grading")
    return v


def _field_ok(cat: AinfCategory):
    ring = cat.ring
    if not ring.trivially_filtered or ring.bulk.names:
        raise WindowError("specialize the coefficients to weight zero before computing ranks")
    if cat.is_curved():
        raise WindowError("curved categories have no Hochschild ranks over the residue field")


def _length_bound(cat: AinfCategory):
    """Largest shifted degree among morphisms; lengths are bounded in each degree only if it is negative."""
    top = max(_int_degree(cat.shifted_degree(k)) for k in cat.morphisms)
    low = min(_int_degree(cat.shifted_degree(k)) for k in cat.morphisms)
    if top >= 0:
        raise WindowError("some morphism has shifted degree >= 0, so each Hochschild degree involves "
                          "infinitely many lengths; no finite window is exact")
    return top, low


def _needed_cochain_length(cat, k: int) -> int:
    top, low = _length_bound(cat)
    # degree = |z| - sum|w| + 1 with each |w| <= top <= -1, so length <= (k - 1 - |z|) / (-top)
    return max(0, (k - 1 - low) // (-top))


def _needed_chain_length(cat, k: int) -> int:
    top, low = _length_bound(cat)
    # degree = 1 + |m| + sum|c| <= 1 + top * (1 + length)
    return max(0, (1 + top - k) // (-top))


def hh_compute(cat: AinfCategory, degrees: Sequence[int], kind: str = "cohomology",
               max_len: int | None = None) -> HHResult:
    """Ranks over the rationals of Hochschild cohomology or homology in the given degrees.

    Both complexes are graded cohomologically (``b`` raises degree by one), so
    classical ``HH_k`` of an ungraded algebra sits in degree ``-k``.

    Each degree needs the complex in degrees ``k-1, k, k+1``; when every
    morphism has negative shifted degree those involve finitely many lengths,
    computed here.  A ``max_len`` below that bound is refused.
    """
    _field_ok(cat)
    degrees = list(degrees)
    if kind == "cohomology":
        need = max(_needed_cochain_length(cat, k) for k in degrees)
    elif kind == "homology":
        need = max(_needed_chain_length(cat, k - 1) for k in degrees)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if max_len is not None and max_len < need:
        raise WindowError(f"length window {max_len} is too small: degrees {degrees} need length {need}")
    L = need if max_len is None else max_len
    ranks = {}
    basis = _cochain_basis(cat, L) if kind == "cohomology" else _chain_basis(cat, L)
    bydeg: dict = {}
    for item, g in basis:
        bydeg.setdefault(g, []).append(item)
    diff = _cochain_diff if kind == "cohomology" else _chain_diff
    rank_cache: dict = {}

    def rank_from(g):
        if g not in rank_cache:
            rows = [diff(cat, item, L) for item in bydeg.get(g, [])]
            rank_cache[g] = rank_q(rows)
        return rank_cache[g]

    for k in degrees:
        ranks[k] = len(bydeg.get(k, [])) - rank_from(k) - rank_from(k - 1)
    return HHResult(kind, ranks, {"length": L, "degrees": degrees})


def _cochain_basis(cat, L):
    for obj, word in cat.all_words(L):
        wdeg = sum(_int_degree(cat.shifted_degree(w)) for w in word)
        a, bb = cat.endpoints(obj, word)
        for z in cat.hom_keys(a, bb):
            yield (obj, word, z), _int_degree(cat.shifted_degree(z)) - wdeg + 1


def _cochain_diff(cat, item, L) -> dict:
    obj, word, z = item
    alpha = Cochain(cat, cat.value_space, (cat.par(z) + sum(cat.par(w) for w in word)) % 2,
                    {(obj, word): {z: cat.ring.one}})
    d = hochschild_differential(alpha, cat, max_len=len(word) + cat.max_arity)
    row = {}
    for cell, vec in d.table.items():
        for k, c in vec.items():
            x = c.constant_term()
            if x:
                row[(cell, k)] = x
    return row


def _chain_basis(cat, L):
    for m in cat.morphisms:
        start = cat.tgt(m)
        for s in range(L + 1):
            for cs in cat.words(start, s):
                end = cat.tgt(cs[-1]) if cs else start
                if end != cat.src(m):
                    continue
                deg = 1 + _int_degree(cat.shifted_degree(m)) + sum(_int_degree(cat.shifted_degree(c)) for c in cs)
                yield (m, tuple(cs)), deg


def _chain_diff(cat, item, L) -> dict:
    ch = HochschildChain(cat, None, {item: cat.ring.one})
    out = b(ch)
    return {k: v.constant_term() for k, v in out.terms.items() if v.constant_term()}
