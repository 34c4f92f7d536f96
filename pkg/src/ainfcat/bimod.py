"""Bimodules over A-infinity categories, their morphism complexes, and the inverse dualizing bimodule.

A bimodule cell is a flat composable path ``left + (m,) + right``: ``left`` is a
word in the left category ending at ``src(m)``, ``right`` a word in the right
category starting at ``tgt(m)``.  Structure maps and morphisms are tables keyed
by ``(left, m, right)``.  All signs come from the brace engine in
:mod:`ainfcat.ainfty`; the module element behaves like any other input.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .ainfty import (
    AinfCategory,
    CategoryError,
    Cochain,
    Functor,
    Insert,
    _fmt_vec,
    brace_value,
    cochain_insert,
    functor_segment,
    identity_segment,
    unary_sign,
)
from .coeff import RingElement
from .complexes import vec_add, vec_is_zero, vec_scale
from .graded import Degree
from .linalg import SparseSystem
from .report import Report

__all__ = [
    "Bimodule",
    "BimoduleHom",
    "diagonal",
    "shift_bimodule",
    "bimod_brace",
    "bimod_differential",
    "compose",
    "check_bimodule",
    "pullback_bimodule",
    "pullback_hom",
    "left_action",
    "right_action",
    "solve_exact",
    "cshriek",
    "mu_bar",
    "generation_hypothesis",
]


def _odd_sign(c: RingElement, parity: int) -> RingElement:
    """``(-1)^{|c| * parity} c`` on the homogeneous parts of ``c``."""
    if not parity % 2:
        return c
    ev, od = c.parity_parts()
    return ev - od if od else c


class Bimodule:
    """A bimodule over ``(left, right)`` with basis ``keys[k] = (src, tgt, degree)``.

    ``mu`` maps ``(left_word, m, right_word)`` to ``{m': coeff}``.
    """

    def __init__(self, left: AinfCategory, right: AinfCategory, keys: Mapping, mu: Mapping | None = None,
                 name: str = "", window: dict | None = None):
        self.left = left
        self.right = right
        self.ring = left.ring
        self.keys = {}
        for k, (a, b, g) in keys.items():
            if not isinstance(g, Degree):
                g = self.ring.datum.integer(g)
            self.keys[k] = (a, b, g)
        self.name = name
        self.window = dict(window or {})
        self._par = {k: g.parity for k, (_, _, g) in self.keys.items()}
        self.mu = BimoduleHom(self, self, 1, mu or {}, name=f"mu[{name}]")

    def src(self, k):
        return self.keys[k][0]

    def tgt(self, k):
        return self.keys[k][1]

    def degree(self, k) -> Degree:
        return self.keys[k][2]

    def par(self, k) -> int:
        return self._par[k]

    def keys_between(self, a, b) -> list:
        return [k for k, (x, y, _) in self.keys.items() if x == a and y == b]

    def with_mu(self, mu: Mapping, name: str = "") -> "Bimodule":
        return Bimodule(self.left, self.right, self.keys, mu, name or self.name, self.window)

    def cells(self, max_len: int, min_len: int = 1):
        """All ``(start, left, m, right)`` with ``len(left) + 1 + len(right)`` in ``[min_len, max_len]``."""
        for m in sorted(self.keys, key=repr):
            for s in range(0, max_len):
                for start, lw in self.left.words_ending(self.src(m), s):
                    for t in range(0, max_len - s):
                        if s + 1 + t < min_len:
                            continue
                        for rw in sorted(self.right.words(self.tgt(m), t), key=repr):
                            yield start, lw, m, rw

    def __repr__(self):
        return f"Bimodule({self.name or '?'}, {len(self.keys)} keys)"


class BimoduleHom:
    """A morphism of bimodules: ``table[(left, m, right)] = {n: coeff}`` with the given map parity."""

    def __init__(self, source: Bimodule, target: Bimodule, parity: int, table: Mapping | None = None,
                 name: str = ""):
        self.source = source
        self.target = target
        self.parity = parity % 2
        self.table = {}
        for (lw, m, rw), vec in (table or {}).items():
            v = {k: c for k, c in vec.items() if c}
            if v:
                self.table[(tuple(lw), m, tuple(rw))] = v
        self.name = name

    @classmethod
    def identity(cls, M: Bimodule, N: Bimodule | None = None) -> "BimoduleHom":
        one = M.ring.one
        return cls(M, N or M, 0, {((), m, ()): {m: one} for m in M.keys}, name="id")

    @property
    def ring(self):
        return self.source.ring

    @property
    def max_total(self) -> int:
        return max((len(l) + 1 + len(r) for (l, _, r) in self.table), default=0)

    def value(self, left, m, right):
        return self.table.get((tuple(left), m, tuple(right)))

    def _with(self, table, parity=None) -> "BimoduleHom":
        return BimoduleHom(self.source, self.target, self.parity if parity is None else parity, table, self.name)

    def __add__(self, other: "BimoduleHom") -> "BimoduleHom":
        if self.table and other.table and self.parity != other.parity:
            raise CategoryError("adding bimodule maps of different parity")
        t = dict(self.table)
        for k, v in other.table.items():
            t[k] = vec_add(t.get(k, {}), v)
        return self._with(t, self.parity if self.table else other.parity)

    def __neg__(self) -> "BimoduleHom":
        return self._with({k: vec_scale(-1, v) for k, v in self.table.items()})

    def __sub__(self, other: "BimoduleHom") -> "BimoduleHom":
        return self + (-other)

    def scale(self, r) -> "BimoduleHom":
        return self._with({k: vec_scale(r, v) for k, v in self.table.items()})

    def truncate(self, max_total: int) -> "BimoduleHom":
        return self._with({k: v for k, v in self.table.items() if len(k[0]) + 1 + len(k[2]) <= max_total})

    def below(self, trunc: int | None) -> "BimoduleHom":
        if trunc is None:
            return self
        ring = self.ring
        t = {}
        for k, v in self.table.items():
            vv = {}
            for n, c in v.items():
                c2 = RingElement(ring, {m: x for m, x in c.terms.items() if ring.weight(m) < trunc})
                if c2:
                    vv[n] = c2
            t[k] = vv
        return self._with(t)

    def is_zero(self) -> bool:
        return all(vec_is_zero(v) for v in self.table.values())

    def __eq__(self, other):
        if not isinstance(other, BimoduleHom):
            return NotImplemented
        return (self - other).is_zero()

    def d(self) -> "BimoduleHom":
        """``d_R`` on the output coefficients."""
        t = {}
        for k, v in self.table.items():
            w = {n: c.d() for n, c in v.items()}
            t[k] = {n: c for n, c in w.items() if c}
        return self._with(t, self.parity + 1)

    def describe(self) -> list:
        return [{"left": [str(x) for x in l], "m": str(m), "right": [str(x) for x in r],
                 "value": {str(k): str(c) for k, c in v.items()}}
                for (l, m, r), v in sorted(self.table.items(), key=repr)]

    def __repr__(self):
        return f"BimoduleHom({self.name or '?'}, parity={self.parity}, {len(self.table)} entries)"


# ---------------------------------------------------------------------------
# the brace with a module slot


def _hom_insert(rho: BimoduleHom) -> Insert:
    def look(o, w, mp):
        if mp is None:
            return None
        return rho.table.get((w[:mp], w[mp], w[mp + 1:]))

    return Insert(look, rho.parity, rho.max_total, takes_module=True, makes_module=True)


def _hom_outer(psi: BimoduleHom):
    def look(start, keys, mslot):
        if mslot is None:
            return None
        return psi.table.get((keys[:mslot], keys[mslot], keys[mslot + 1:]))

    return look


def bimod_brace(psi: BimoduleHom, left_args: Sequence[Cochain], rho: BimoduleHom,
                right_args: Sequence[Cochain] = (), functors: Sequence[Functor] | None = None,
                max_len: int = 3, source: Bimodule | None = None, target: Bimodule | None = None,
                out_key=None, name: str = "") -> BimoduleHom:
    """``psi{phi_1, ..., phi_{j-1}; rho; phi_{j+1}, ..., phi_k}`` tabulated on cells of length ``<= max_len``.

    ``functors`` are the blocks ``F_0, ..., F_k`` between inserts (identities by
    default).  ``out_key(n, start_obj, end_obj)`` renames output keys, which is
    how pullbacks relabel their basis.
    """
    M = source or rho.source
    N = psi.source
    k = len(left_args) + 1 + len(right_args)
    ring = M.ring
    if functors is None:
        segs = [identity_segment(ring) for _ in range(k + 1)]
    else:
        if len(functors) != k + 1:
            raise CategoryError("need one functor per gap between inserts")
        segs = [functor_segment(F) for F in functors]
    ins = [cochain_insert(a) for a in left_args] + [_hom_insert(rho)] + [cochain_insert(a) for a in right_args]
    parity = (psi.parity + rho.parity + sum(a.parity for a in left_args) + sum(a.parity for a in right_args)) % 2
    lpar = {**N.right._par, **N.left._par}

    def slot_par(key, is_mod):
        return N.par(key) if is_mod else lpar[key]

    outer = _hom_outer(psi)
    arity = psi.max_total
    table = {}
    for start, lw, m, rw in M.cells(max_len):
        word = lw + (m,) + rw
        mpos = len(lw)
        objs = [start]
        for i, w in enumerate(word):
            objs.append(M.tgt(w) if i == mpos else (M.left.tgt(w) if i < mpos else M.right.tgt(w)))
        in_par = [M.par(w) if i == mpos else (M.left.par(w) if i < mpos else M.right.par(w))
                  for i, w in enumerate(word)]
        v = brace_value(outer, psi.parity, arity, word, objs, ins, segs, in_par, slot_par, ring, mpos=mpos)
        if v:
            if out_key is not None:
                v = {out_key(n, objs[0], objs[-1]): c for n, c in v.items()}
            table[(lw, m, rw)] = v
    return BimoduleHom(M, target or psi.target, parity, table, name)


def compose(psi: BimoduleHom, rho: BimoduleHom, max_len: int = 3) -> BimoduleHom:
    """``psi o rho = psi{; rho;}``."""
    return bimod_brace(psi, [], rho, [], max_len=max_len, name=f"{psi.name}o{rho.name}")


def bimod_differential(rho: BimoduleHom, max_len: int = 3) -> BimoduleHom:
    """``d(rho) + mu_N{; rho;} - (-1)^|rho| (rho{mu; id;} + rho{; mu_M;} + rho{; id; mu})``."""
    M, N = rho.source, rho.target
    idM = BimoduleHom.identity(M)
    out = rho.d().truncate(max_len)
    out = out + bimod_brace(N.mu, [], rho, [], max_len=max_len)
    back = bimod_brace(rho, [M.left.mu], idM, [], max_len=max_len, target=N)
    back = back + bimod_brace(rho, [], M.mu, [], max_len=max_len, target=N)
    back = back + bimod_brace(rho, [], idM, [M.right.mu], max_len=max_len, target=N)
    out = out - back if not rho.parity else out + back
    out.parity = (rho.parity + 1) % 2
    out.name = f"del({rho.name})"
    return out


def check_bimodule(M: Bimodule, max_len: int = 3, trunc: int | None = None) -> Report:
    """Residual of ``d(mu) + mu{mu; id;} + mu{; mu;} + mu{; id; mu}`` on cells of length ``<= max_len``."""
    rep = Report("bimodule", window={"length": max_len, "trunc": trunc, **M.window})
    idM = BimoduleHom.identity(M)
    res = M.mu.d().truncate(max_len)
    res = res + bimod_brace(M.mu, [M.left.mu], idM, [], max_len=max_len)
    res = res + bimod_brace(M.mu, [], M.mu, [], max_len=max_len)
    res = res + bimod_brace(M.mu, [], idM, [M.right.mu], max_len=max_len)
    res = res.below(trunc)
    for start, lw, m, rw in M.cells(max_len):
        rep.checked += 1
        v = res.table.get((lw, m, rw))
        if v and not vec_is_zero(v):
            rep.add(left=[str(x) for x in lw], m=str(m), right=[str(x) for x in rw], residual=_fmt_vec(v))
    return rep


# ---------------------------------------------------------------------------
# standard bimodules


def diagonal(cat: AinfCategory) -> Bimodule:
    """The shifted diagonal bimodule: ``M(C0, C1) = C(C0, C1)`` and ``mu^{s|1|t} = mu^{s+1+t}``."""
    keys = {k: (cat.src(k), cat.tgt(k), cat.shifted_degree(k)) for k in cat.morphisms}
    mu = {}
    for (obj, word), vec in cat.mu.table.items():
        for p in range(len(word)):
            mu[(word[:p], word[p], word[p + 1:])] = vec
    return Bimodule(cat, cat, keys, mu, name=f"diag({cat.name})")


def shift_bimodule(g, M: Bimodule) -> Bimodule:
    """``sigma(g) M``: degrees move by ``g``; ``mu^{s|1|t}`` picks up ``(-1)^{g (1 + |left|)}``."""
    if not isinstance(g, Degree):
        g = M.ring.datum.integer(g)
    keys = {k: (a, b, d + g) for k, (a, b, d) in M.keys.items()}
    mu = {}
    for (lw, m, rw), vec in M.mu.table.items():
        lp = sum(M.left.par(x) for x in lw)
        mu[(lw, m, rw)] = vec_scale(-1, vec) if (g.parity * (1 + lp)) % 2 else vec
    return Bimodule(M.left, M.right, keys, mu, name=f"s({g}){M.name}", window=M.window)


def pullback_bimodule(M: Bimodule, F0: Functor, F1: Functor, max_len: int = 3) -> Bimodule:
    """``(F0 (x) F1)^* M`` with basis ``(n, C, D)`` for ``n in M(F0 C, F1 D)``."""
    C0, C1 = F0.source, F1.source
    keys = {}
    for a in C0.objects:
        for b in C1.objects:
            for n in M.keys_between(F0(a), F1(b)):
                keys[(n, a, b)] = (a, b, M.degree(n))
    shell = Bimodule(C0, C1, keys, None, name=f"pullback({M.name})", window={"length": max_len})
    rel = lambda n, a, b: (n, a, b)  # noqa: E731
    pulled = _pullback_table(M.mu, shell, shell, F0, F1, max_len, rel)
    return shell.with_mu(pulled)


def _pullback_table(rho: BimoduleHom, source: Bimodule, target: Bimodule, F0: Functor, F1: Functor,
                    max_len: int, out_key) -> dict:
    # the identity insert reads the underlying key of a relabelled basis element
    one = source.ring.one
    idins = Insert(lambda o, w, mp: {w[mp][0]: one} if mp is not None and len(w) == 1 else None, 0, 1,
                   takes_module=True, makes_module=True)
    segs = [functor_segment(F0), functor_segment(F1)]
    N = rho.source
    lpar = {**N.right._par, **N.left._par}
    slot_par = lambda key, is_mod: N.par(key) if is_mod else lpar[key]  # noqa: E731
    outer = _hom_outer(rho)
    table = {}
    for start, lw, m, rw in source.cells(max_len):
        word = lw + (m,) + rw
        mpos = len(lw)
        objs = [start]
        for i, w in enumerate(word):
            objs.append(source.tgt(w) if i == mpos else (source.left.tgt(w) if i < mpos else source.right.tgt(w)))
        in_par = [source.par(w) if i == mpos else (source.left.par(w) if i < mpos else source.right.par(w))
                  for i, w in enumerate(word)]
        v = brace_value(outer, rho.parity, rho.max_total, word, objs, [idins], segs, in_par, slot_par,
                        source.ring, mpos=mpos, out_start=lambda o: F0(o))
        if v:
            table[(lw, m, rw)] = {out_key(n, objs[0], objs[-1]): c for n, c in v.items()}
    return table


def pullback_hom(rho: BimoduleHom, F0: Functor, F1: Functor, source: Bimodule, target: Bimodule,
                 max_len: int = 3) -> BimoduleHom:
    """``rho_{F0}{; id;}_{F1}`` between pulled-back bimodules."""
    table = _pullback_table(rho, source, target, F0, F1, max_len, lambda n, a, b: (n, a, b))
    return BimoduleHom(source, target, rho.parity, table, name=f"pullback({rho.name})")


# ---------------------------------------------------------------------------
# the left and right actions of Hochschild cochains


def left_action(phi: Cochain, M: Bimodule | None = None, max_len: int = 3) -> BimoduleHom:
    """``L^1(phi) = -mu{phi; id;}`` on the diagonal bimodule."""
    M = M or diagonal(phi.source)
    out = bimod_brace(M.mu, [phi], BimoduleHom.identity(M), [], max_len=max_len, name=f"L({phi.name})")
    return out.scale(unary_sign())


def right_action(phi: Cochain, M: Bimodule | None = None, max_len: int = 3) -> BimoduleHom:
    """``R^1(phi) = -mu{; id; phi}`` on the diagonal bimodule."""
    M = M or diagonal(phi.source)
    out = bimod_brace(M.mu, [], BimoduleHom.identity(M), [phi], max_len=max_len, name=f"R({phi.name})")
    return out.scale(unary_sign())


def _hom_degree_ok(M: Bimodule, N: Bimodule, lw, m, rw, n, mono, want) -> bool:
    g = N.degree(n) + M.ring.key_degree(mono) - M.degree(m)
    for x in lw:
        g = g - M.left.shifted_degree(x)
    for x in rw:
        g = g - M.right.shifted_degree(x)
    return g == want


def solve_exact(target: BimoduleHom, M: Bimodule | None = None, N: Bimodule | None = None, max_len: int = 3,
                degree: Degree | None = None, unknown_len: int | None = None):
    """Whether ``target = del h`` for some ``h`` of total length ``<= unknown_len`` on cells ``<= max_len``.

    Unknowns are rational multiples of ``monomial * (cell -> n)``.  Returns
    ``(solvable, info)``; ``info`` holds the unknown and equation counts and, on
    success, the solution as a :class:`BimoduleHom`.
    """
    M = M or target.source
    N = N or target.target
    ring = M.ring
    target = target.truncate(max_len)
    info = {"cells": max_len}
    if target.is_zero():
        info["unknowns"] = 0
        return True, {**info, "solution": BimoduleHom(M, N, target.parity + 1, {})}
    if unknown_len is None:
        unknown_len = max_len + (1 if (M.left.is_curved() or M.right.is_curved()) else 0)
    monos = ring.monomials() if ring.trunc is not None else [ring.one_key]
    if degree is None:
        degree = _guess_degree(target, M, N)
        if degree is not None:
            degree = degree - 1
    unknowns = []
    for start, lw, m, rw in M.cells(unknown_len):
        end = M.right.objects_along(M.tgt(m), rw)[-1]
        for n in N.keys_between(start, end):
            for mono in monos:
                if degree is not None and not _hom_degree_ok(M, N, lw, m, rw, n, mono, degree):
                    continue
                unknowns.append((lw, m, rw, n, mono))
    info["unknowns"] = len(unknowns)
    cols = {}
    for u in unknowns:
        lw, m, rw, n, mono = u
        h = BimoduleHom(M, N, target.parity + 1, {(lw, m, rw): {n: RingElement(ring, {mono: 1})}})
        dh = bimod_differential(h, max_len)
        for cell, vec in dh.table.items():
            for nk, c in vec.items():
                for mk, x in c.terms.items():
                    cols.setdefault((cell, nk, mk), {})[u] = x
    sysm = SparseSystem()
    rows = set(cols)
    for cell, vec in target.table.items():
        for nk, c in vec.items():
            for mk in c.terms:
                rows.add((cell, nk, mk))
    for r in sorted(rows, key=repr):
        cell, nk, mk = r
        rhs = target.table.get(cell, {}).get(nk)
        rhs = rhs.terms.get(mk, 0) if rhs is not None else 0
        sysm.add(cols.get(r, {}), rhs, tag=r)
    info["equations"] = len(rows)
    if not sysm.consistent:
        bad = sysm.inconsistent[0]
        info["first obstruction"] = {"left": [str(x) for x in bad[0][0]], "m": str(bad[0][1]),
                                     "right": [str(x) for x in bad[0][2]], "output": str(bad[1])}
        return False, info
    sol = sysm.solution()
    table = {}
    for u, x in sol.items():
        lw, m, rw, n, mono = u
        c = RingElement(ring, {mono: x})
        table[(lw, m, rw)] = vec_add(table.get((lw, m, rw), {}), {n: c})
    info["solution"] = BimoduleHom(M, N, target.parity + 1, table, name="h")
    return True, info


def _guess_degree(rho: BimoduleHom, M: Bimodule, N: Bimodule):
    for (lw, m, rw), vec in rho.table.items():
        for n, c in vec.items():
            for mono in c.terms:
                g = N.degree(n) + M.ring.key_degree(mono) - M.degree(m)
                for x in lw:
                    g = g - M.left.shifted_degree(x)
                for x in rw:
                    g = g - M.right.shifted_degree(x)
                return g
    return None


# ---------------------------------------------------------------------------
# the inverse dualizing bimodule


def cshriek(cat: AinfCategory, max_word: int = 2) -> Bimodule:
    """Length-truncated inverse dualizing bimodule.

    A basis key ``(D0, w, x, y)`` is the functional sending the word ``w``
    (starting at ``D0``) to ``x (x) y`` with ``x in C(D0, C1)`` and
    ``y in C(C0, D_end)``, and every other word to zero; it lies in
    ``C^!(C0, C1)``.  Its degree is ``2 + |x| + |y| - |w|`` in shifted degrees.
    Structure maps only lengthen ``w`` when the category is uncurved, so
    dropping words longer than ``max_word`` is exact there.
    """
    keys = {}
    by_x: dict = {}
    by_y: dict = {}
    by_letter: dict = {}
    for D0 in cat.objects:
        for r in range(max_word + 1):
            for w in sorted(cat.words(D0, r), key=repr):
                Dr = cat.tgt(w[-1]) if w else D0
                wdeg = sum((cat.shifted_degree(a) for a in w), cat.ring.datum.zero)
                for x in sorted(cat._out[D0], key=repr):
                    for y in sorted((k for k in cat.morphisms if cat.tgt(k) == Dr), key=repr):
                        key = (D0, w, x, y)
                        keys[key] = (cat.src(y), cat.tgt(x),
                                     cat.shifted_degree(x) + cat.shifted_degree(y) - wdeg + 2)
                        by_x.setdefault(x, []).append(key)
                        by_y.setdefault(y, []).append(key)
                        for j, a in enumerate(w):
                            by_letter.setdefault(a, []).append((key, j))
    par = {k: g.parity for k, (_, _, g) in keys.items()}
    wpar = lambda w: sum(cat.par(a) for a in w) % 2  # noqa: E731
    table: dict = {}

    def put(cell, key, c):
        if key in keys and c:
            table.setdefault(cell, {})
            table[cell] = vec_add(table[cell], {key: c})

    for (o, v), vec in cat.mu.table.items():
        for pos, letter in enumerate(v):
            # left piece: x (x) mu(c_1..c_s, y, d')
            cs, dprime = v[:pos], v[pos + 1:]
            for key in by_y.get(letter, []):
                D0, w, x, y = key
                if len(w) + len(dprime) > max_word:
                    continue
                sgn = -1 if ((1 + wpar(cs)) * cat.par(x)) % 2 else 1
                for z, c in vec.items():
                    put((cs, key, ()), (D0, w + dprime, x, z), sgn * _odd_sign(c, cat.par(x)))
            # right piece: mu(d'', x, e_1..e_t) (x) y
            dpp, es = v[:pos], v[pos + 1:]
            for key in by_x.get(letter, []):
                D0, w, x, y = key
                if len(w) + len(dpp) > max_word:
                    continue
                e = wpar(dpp) * (par[key] + wpar(es)) + wpar(es) * wpar(w) + cat.par(y) * wpar(es)
                sgn = -1 if e % 2 else 1
                for z, c in vec.items():
                    put(((), key, es), (o, dpp + w, z, y), sgn * c)
        # centre piece: phi(d_1..d_j, mu(v), ...)
        for z, c in vec.items():
            for key, j in by_letter.get(z, []):
                D0, w, x, y = key
                nw = w[:j] + v + w[j + 1:]
                if len(nw) > max_word:
                    continue
                # Hom-complex sign -(-1)^{|phi|} times the prefix sign
                p = par[key] + wpar(w[:j])
                nD0 = o if j == 0 else D0
                put(((), key, ()), (nD0, nw, x, y), (1 if p % 2 else -1) * _odd_sign(c, p))
    return Bimodule(cat, cat, keys, table, name=f"shriek({cat.name})", window={"word length": max_word})


def mu_bar(chain, cat: AinfCategory, max_len: int = 3) -> Cochain:
    """``mu(d.., x, c_1..c_s, y, d..)`` for each chain term ``(D0, w, x, y)[c_1|..|c_s]`` and split ``d = d' w d''``."""
    wpar = lambda w: sum(cat.par(a) for a in w) % 2  # noqa: E731
    M = chain.module
    table: dict = {}
    parity = None
    for (key, cs), r in chain.terms.items():
        D0, w, x, y = key
        s = len(cs)
        pc = wpar(cs)
        p = (1 + M.par(key) + pc) % 2
        parity = p if parity is None else parity
        for (o, v), vec in cat.mu.table.items():
            n = len(v)
            for pos in range(n - s - 1):
                if v[pos] != x or v[pos + s + 1] != y or v[pos + 1:pos + 1 + s] != cs:
                    continue
                pre, post = v[:pos], v[pos + s + 2:]
                word = pre + w + post
                if len(word) > max_len:
                    continue
                e = wpar(pre) * (M.par(key) + pc) + pc * wpar(w) + cat.par(y) * pc
                sgn = -1 if e % 2 else 1
                coeff = sgn * _odd_sign(r, 1)
                cell = (o, word)
                for z, c in vec.items():
                    table[cell] = vec_add(table.get(cell, {}), {z: coeff * c})
    return Cochain(cat, cat.value_space, parity if parity is not None else 0,
                   {k: v for k, v in table.items() if v}, name="mu_bar")


def generation_hypothesis(cat: AinfCategory, sub_objects: Sequence, unit: Cochain, max_word: int = 2,
                          max_len: int = 2, chain_len: int = 0) -> Report:
    """Whether the HH-unit lies in the image of ``mu_bar o iota`` within the window.

    Only the computable hypothesis is checked.  Unknowns are rational
    combinations of degree-zero chains ``phi[c_1|..|c_s]`` (``s <= chain_len``)
    supported on ``sub_objects`` and of degree ``-1`` Hochschild cochains of
    length ``<= max_len``.  The equations ask the chain to be closed on the
    word window and ``mu_bar`` of it to equal ``unit`` plus a coboundary on
    cells of length ``<= max_len``.
    """
    from .ainfty import hochschild_differential
    from .hoch import HochschildChain, b

    rep = Report("generation hypothesis",
                 window={"word length": max_word, "length": max_len, "chain length": chain_len})
    B = cshriek(cat, max_word)
    zero = cat.ring.datum.zero
    one = cat.ring.one
    subs = set(sub_objects)
    rows: dict = {}

    def add_entries(tag, coch, col):
        for cell, vec in coch.table.items():
            if len(cell[1]) > max_len:
                continue
            for z, c in vec.items():
                for mk, x in c.terms.items():
                    rows.setdefault(("value", cell, z, mk), {})[col] = x

    ncand = 0
    for key in sorted(B.keys, key=repr):
        if B.src(key) not in subs:
            continue
        for s in range(chain_len + 1):
            for cs in sorted(cat.words(B.tgt(key), s), key=repr):
                objs = [B.tgt(key)] + [cat.tgt(c) for c in cs]
                if objs[-1] != B.src(key) or not set(objs) <= subs:
                    continue
                ch = HochschildChain(cat, B, {(key, cs): one})
                if ch.term_degree(key, cs) != zero:
                    continue
                col = ("chain", key, cs)
                ncand += 1
                for (n, ds), r in b(ch).terms.items():
                    for mk, x in r.terms.items():
                        rows.setdefault(("closed", n, ds, mk), {})[col] = x
                add_entries(col, mu_bar(ch, cat, max_len), col)
    for obj, word in cat.all_words(max_len):
        a, bb = cat.endpoints(obj, word)
        for z in cat.hom_keys(a, bb):
            g = cat.shifted_degree(z) - sum((cat.shifted_degree(w) for w in word), zero)
            if g != cat.ring.datum.integer(-2):
                continue
            par = (cat.par(z) + sum(cat.par(w) for w in word)) % 2
            g0 = Cochain(cat, cat.value_space, par, {(obj, word): {z: one}})
            col = ("bound", obj, word, z)
            add_entries(col, hochschild_differential(g0, cat, max_len), col)
    rhs: dict = {}
    for cell, vec in unit.table.items():
        if len(cell[1]) <= max_len:
            for z, c in vec.items():
                for mk, x in c.terms.items():
                    rhs[("value", cell, z, mk)] = x
    sysm = SparseSystem()
    for r in sorted(set(rows) | set(rhs), key=repr):
        sysm.add(rows.get(r, {}), rhs.get(r, 0), tag=r)
    rep.checked = len(set(rows) | set(rhs))
    rep.info["candidates"] = ncand
    if not sysm.consistent:
        rep.add(kind="unit not in image", row=str(sysm.inconsistent[0]))
    else:
        sol = sysm.solution()
        rep.info["chain"] = {str(k[1:]): str(v) for k, v in sorted(sol.items(), key=repr) if k[0] == "chain" and v}
    return rep
