"""Pre-bounding and bounding cochains, the Maurer-Cartan solver, and transfer along ``C^bc -> C``.

An object of ``C^{pre-bc}`` is a label ``P`` with data ``(C, b_P)``, where
``b_P`` is an element of ``hom(C, C)`` of shifted degree 0 in positive
filtration.  Morphism keys are ``(k, P, Q)`` for ``k in C(C_P, C_Q)``, which
is also the basis of ``(F (x) F)^* C_Delta`` so the two diagonals coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .ainfty import (
    AinfCategory,
    Cochain,
    Functor,
    _fmt_vec,
    brace_value,
    functor_segment,
    hh_unit_check,
)
from .bimod import (
    Bimodule,
    BimoduleHom,
    _odd_sign,
    cshriek,
    diagonal,
    mu_bar,
    pullback_bimodule,
    pullback_hom,
)
from .coeff import RingElement
from .complexes import vec_add
from .hoch import HochschildChain, functor_pushforward, rho_pushforward
from .linalg import SparseSystem, nullspace_q, smith_normal_form
from .report import Report

__all__ = [
    "BoundingError",
    "curvature",
    "MCResult",
    "solve_mc",
    "pre_bc_category",
    "bc_category",
    "bc_functor",
    "alpha_bc",
    "shriek_bc",
    "rho_pre_bc",
    "cy_bc_square",
    "cy_bc_top_square",
    "restrict_category",
    "unit_transfer",
]


class BoundingError(ValueError):
    """Raised for elements outside positive filtration or for non-bounding objects where bounding is required."""


def _as_vec(cat: AinfCategory, b) -> dict:
    out = {}
    for k, c in dict(b or {}).items():
        c = c if isinstance(c, RingElement) else cat.ring.scalar(c)
        if c:
            out[k] = c
    return out


def _check_pre_bc(cat: AinfCategory, obj, b: Mapping) -> None:
    zero = cat.ring.datum.zero
    for k, c in b.items():
        if cat.src(k) != obj or cat.tgt(k) != obj:
            raise BoundingError(f"{k!r} is not an endomorphism of {obj!r}")
        if c.filtration_level() < 1:
            raise BoundingError(f"coefficient of {k!r} is not in positive filtration")
        for t in c.terms:
            if cat.ring.key_degree(t) + cat.shifted_degree(k) != zero:
                raise BoundingError(f"{c}*{k} does not have shifted degree 0")


def curvature(cat: AinfCategory, obj, b: Mapping | None = None) -> dict:
    """``d(b) + sum_k mu^k(b, ..., b)`` (``k >= 0``), truncated by the coefficient ring."""
    b = _as_vec(cat, b)
    _check_pre_bc(cat, obj, b)
    out: dict = {}
    for k, c in b.items():
        if c.d():
            out = vec_add(out, {k: c.d()})
    F = Functor(_point_source(cat), cat, {"*": obj}, {("*", ()): b} if b else {})
    v = brace_value(lambda o, keys, m: cat.mu.table.get((o, keys)), 1, cat.max_arity, (), ["*"], [],
                    [functor_segment(F)], [], lambda key, is_mod: cat.par(key), cat.ring)
    return {k: c for k, c in vec_add(out, v).items() if c}


def _point_source(cat: AinfCategory) -> AinfCategory:
    return AinfCategory(cat.ring, ["*"], {}, None, name="R")


# ---------------------------------------------------------------------------
# the Maurer-Cartan solver


@dataclass
class MCOrder:
    weight: int
    unknowns: list
    equations: int
    integral: bool
    rational: bool
    kernel: list = field(default_factory=list)
    obstruction: dict | None = None

    def as_dict(self) -> dict:
        return {
            "weight": self.weight,
            "unknowns": [f"{m}*{k}" for m, k in self.unknowns],
            "equations": self.equations,
            "integral": self.integral,
            "rational": self.rational,
            "kernel dimension": len(self.kernel),
            "obstruction": _fmt_vec(self.obstruction) if self.obstruction else None,
        }


@dataclass
class MCResult:
    obj: object
    order: int
    over: str
    solution: dict | None
    orders: list

    @property
    def solved(self) -> bool:
        return self.solution is not None

    @property
    def obstruction(self):
        for o in self.orders:
            if o.obstruction:
                return o.weight, o.obstruction
        return None

    def as_dict(self) -> dict:
        return {
            "object": str(self.obj),
            "order": self.order,
            "over": self.over,
            "solved": self.solved,
            "solution": _fmt_vec(self.solution) if self.solution is not None else None,
            "orders": [o.as_dict() for o in self.orders],
        }


def _weight_part(cat, vec: Mapping, w: int) -> dict:
    out = {}
    for k, c in vec.items():
        p = c.weight_part(w)
        if p:
            out[k] = p
    return out


def _coords(vec: Mapping) -> dict:
    return {(k, mono): x for k, c in vec.items() for mono, x in c.terms.items()}


def solve_mc(cat: AinfCategory, obj, order: int | None = None, over: str = "Z") -> MCResult:
    """Solve ``curvature(b) = 0`` modulo weight ``order`` one weight at a time.

    At weight ``w`` the unknown ``b_w`` enters linearly through
    ``d + mu^1`` (all other terms have weight above ``w``).  Each order picks
    the particular solution with free parameters set to zero; the kernel
    (the affine family at that order) is reported, not enumerated.  Over
    ``Z`` solvability is decided with the Smith form and rational
    solvability is reported alongside.
    """
    if over not in ("Z", "Q"):
        raise ValueError("over must be 'Z' or 'Q'")
    ring = cat.ring
    N = order if order is not None else ring.trunc
    if N is None:
        raise BoundingError("an order is needed when the coefficient ring is not truncated")
    zero = ring.datum.zero
    keys = [k for k in cat.hom_keys(obj, obj)]
    b: dict = {}
    orders = []
    for w in range(1, N):
        base = _weight_part(cat, curvature(cat, obj, b), w)
        unknowns = []
        for mono in ring.monomials(w + 1):
            if ring.weight(mono) != w:
                continue
            for k in keys:
                if ring.key_degree(mono) + cat.shifted_degree(k) == zero:
                    unknowns.append((mono, k))
        cols = []
        for mono, k in unknowns:
            trial = dict(b)
            trial[k] = trial.get(k, ring.zero) + RingElement(ring, {mono: 1})
            diff = _coords(_weight_part(cat, curvature(cat, obj, trial), w))
            for key, x in _coords(base).items():
                diff[key] = diff.get(key, 0) - x
            cols.append({r: x for r, x in diff.items() if x})
        rhs = {r: -x for r, x in _coords(base).items()}
        rows = sorted(set(rhs) | {r for c in cols for r in c}, key=repr)
        A = [[c.get(r, 0) for c in cols] for r in rows]
        y = [rhs.get(r, 0) for r in rows]
        rat_sol, kernel = _solve_rational(A, y, len(unknowns))
        int_sol = _solve_integral(A, y, len(unknowns)) if rat_sol is not None else None
        chosen = int_sol if over == "Z" else rat_sol
        rec = MCOrder(w, unknowns, len(rows), int_sol is not None, rat_sol is not None, kernel)
        orders.append(rec)
        if chosen is None:
            rec.obstruction = base
            return MCResult(obj, N, over, None, orders)
        for (mono, k), x in zip(unknowns, chosen):
            if x:
                b[k] = b.get(k, ring.zero) + RingElement(ring, {mono: x})
        b = {k: c for k, c in b.items() if c}
    return MCResult(obj, N, over, b, orders)


def _solve_rational(A, y, n):
    sysm = SparseSystem()
    for row, r in zip(A, y):
        sysm.add({j: x for j, x in enumerate(row) if x}, r)
    if not sysm.consistent:
        return None, []
    sol = sysm.solution()
    kernel = nullspace_q([{j: x for j, x in enumerate(row) if x} for row in A], list(range(n)))
    return [sol.get(j, Fraction(0)) for j in range(n)], kernel


def _solve_integral(A, y, n):
    if n == 0:
        return [] if not any(y) else None
    if not A:
        return [0] * n
    if any(isinstance(x, Fraction) and x.denominator != 1 for row in A for x in row) or \
            any(isinstance(x, Fraction) and x.denominator != 1 for x in y):
        return None
    snf = smith_normal_form(A, n)
    ly = [sum(int(l) * int(v) for l, v in zip(row, y)) for row in snf.left]
    z = [0] * n
    for i, v in enumerate(ly):
        d = snf.diag[i][i] if i < n else 0
        if d == 0:
            if v:
                return None
        else:
            if v % d:
                return None
            z[i] = v // d
    return [sum(snf.right[i][j] * z[j] for j in range(n)) for i in range(n)]


# ---------------------------------------------------------------------------
# the categories of (pre-)bounding cochains


def pre_bc_category(cat: AinfCategory, objects: Mapping, name: str = "") -> AinfCategory:
    """``C^{pre-bc}`` on the labels of ``objects`` (``label -> (object, b)``).

    ``mu^s(c_1..c_s) = sum mu(b_0..b_0, c_1, b_1.., c_s, b_s..b_s)`` and
    ``mu^0 = d(b) + sum mu(b..b)``.  The result carries ``base`` and
    ``bc_data`` attributes used by :func:`bc_functor`.
    """
    data = {}
    for P, (obj, b) in objects.items():
        b = _as_vec(cat, b)
        _check_pre_bc(cat, obj, b)
        data[P] = (obj, b)
    morph = {}
    for P, (a, _) in data.items():
        for Q, (c, _) in data.items():
            for k in cat.hom_keys(a, c):
                morph[(k, P, Q)] = (P, Q, cat.degree(k))
    shell = AinfCategory(cat.ring, list(data), morph, None, name=name or f"{cat.name}^pre-bc")
    shell.base, shell.bc_data = cat, data
    F = _functor(shell, cat, data)
    seg = functor_segment(F)
    look = lambda o, keys, m: cat.mu.table.get((o, keys))  # noqa: E731
    slot_par = lambda key, is_mod: cat.par(key)  # noqa: E731
    table = {}
    for P, w in shell.all_words(cat.max_arity):
        objs = shell.objects_along(P, w)
        v = brace_value(look, 1, cat.max_arity, w, objs, [], [seg],
                        [cat.par(k) for (k, _, _) in w], slot_par, cat.ring)
        if not w:
            v = vec_add(v, {k: c.d() for k, c in data[P][1].items() if c.d()})
        v = {(k, objs[0], objs[-1]): c for k, c in v.items() if c}
        if v:
            table[(P, w)] = v
    out = AinfCategory(cat.ring, list(data), morph, table, name=shell.name)
    out.base, out.bc_data = cat, data
    return out


def bc_category(cat: AinfCategory, objects: Mapping, name: str = "") -> AinfCategory:
    """The full subcategory of bounding cochains; every object must have zero curvature."""
    for P, (obj, b) in objects.items():
        curv = curvature(cat, obj, b)
        if curv:
            raise BoundingError(f"{P!r} is not a bounding cochain: curvature {_fmt_vec(curv)}")
    out = pre_bc_category(cat, objects, name=name or f"{cat.name}^bc")
    if out.is_curved():
        raise BoundingError("bounding cochains produced curvature")
    out.flat = True
    return out


def _functor(pre: AinfCategory, cat: AinfCategory, data: Mapping) -> Functor:
    one = cat.ring.one
    table = {}
    for P, (obj, b) in data.items():
        if b:
            table[(P, ())] = dict(b)
    for key in pre.morphisms:
        k, P, _ = key
        table[(P, (key,))] = {k: one}
    return Functor(pre, cat, {P: obj for P, (obj, _) in data.items()}, table, name="F")


def bc_functor(pre: AinfCategory) -> Functor:
    """``F(C, b) = C``, ``F^0 = b``, ``F^1 = id`` and nothing longer."""
    return _functor(pre, pre.base, pre.bc_data)


def _relabel(vec: Mapping, P, Q) -> dict:
    return {(k, P, Q): c for k, c in vec.items()}


def alpha_bc(alpha: Cochain, pre: AinfCategory, max_len: int = 3) -> Cochain:
    """``alpha^bc(c_1..c_s) = sum alpha(b_0..b_0, c_1, b_1, .., c_s, b_s..b_s)``."""
    cat = pre.base
    seg = functor_segment(bc_functor(pre))
    look = lambda o, keys, m: alpha.table.get((o, keys))  # noqa: E731
    slot_par = lambda key, is_mod: cat.par(key)  # noqa: E731
    table = {}
    for P, w in pre.all_words(max_len):
        objs = pre.objects_along(P, w)
        v = brace_value(look, alpha.parity, alpha.max_len, w, objs, [], [seg],
                        [cat.par(k) for (k, _, _) in w], slot_par, cat.ring)
        if v:
            table[(P, w)] = _relabel(v, objs[0], objs[-1])
    return Cochain(pre, pre.value_space, alpha.parity, table, name=f"{alpha.name}^bc")


# ---------------------------------------------------------------------------
# the inverse dualizing bimodule and rho^bc


def _expansions(pre: AinfCategory, D0, wp: Sequence, max_extra: int) -> dict:
    """Base words obtained from ``wp`` by inserting ``b`` letters, with coefficients pulled to the front."""
    cat = pre.base
    objs = pre.objects_along(D0, wp)
    out: dict = {}

    def rec(p, extra, letters):
        if p == len(wp):
            items = [list(v.items()) for v in letters]
            for combo in product(*items):
                c = cat.ring.one
                running = 0
                for key, x in combo:
                    c = c * _odd_sign(x, running)
                    running += cat.par(key)
                if c:
                    word = tuple(k for k, _ in combo)
                    out[word] = out.get(word, cat.ring.zero) + c
        b = pre.bc_data[objs[p]][1]
        if b and extra < max_extra:
            letters.append(b)
            rec(p, extra + 1, letters)
            letters.pop()
        if p < len(wp):
            letters.append({wp[p][0]: cat.ring.one})
            rec(p + 1, extra, letters)
            letters.pop()

    rec(0, 0, [])
    return {w: c for w, c in out.items() if c}


def shriek_bc(pre: AinfCategory, source: Bimodule, target: Bimodule) -> dict:
    """``phi -> phi^bc`` on basis keys, from ``(F (x) F)^* C^!`` to ``C^{pre-bc,!}``.

    ``((D0, w, x, y), P, Q)`` goes to the sum over pre-bc words ``w'`` whose
    ``b``-expansions contain ``w`` of ``(D0', w', (x, D0', Q), (y, P, D'))``.
    """
    cat = pre.base
    extra = (cat.ring.trunc - 1) if cat.ring.trunc else 0
    index: dict = {}
    for key in target.keys:
        D0p, wp, xp, yp = key
        x, _, Q = xp
        y, P, _ = yp
        for w, c in _expansions(pre, D0p, wp, extra).items():
            index.setdefault(((pre.bc_data[D0p][0], w, x, y), P, Q), []).append((key, c))
    out = {}
    for skey in source.keys:
        v = {}
        par = source.par(skey)
        for tkey, c in index.get(skey, []):
            v = vec_add(v, {tkey: _odd_sign(c, par)})
        if v:
            out[skey] = v
    return out


def rho_pre_bc(rho: BimoduleHom, pre: AinfCategory, max_len: int = 3, max_word: int = 2) -> BimoduleHom:
    """``(phi -> phi^bc) o F^* rho`` from the diagonal of ``pre`` to its inverse dualizing bimodule.

    ``rho`` goes from the diagonal of the base category (possibly shifted) to
    its inverse dualizing bimodule built with a word length that covers
    ``max_word`` plus the possible ``b`` insertions.
    """
    F = bc_functor(pre)
    src = diagonal(pre)
    mid = pullback_bimodule(rho.target, F, F, max_len=0)
    pulled = pullback_hom(rho, F, F, src, mid, max_len)
    tgt = cshriek(pre, max_word)
    conv = shriek_bc(pre, mid, tgt)
    table = {}
    for cell, vec in pulled.table.items():
        out: dict = {}
        for n, c in vec.items():
            for t, x in conv.get(n, {}).items():
                out = vec_add(out, {t: c * x})
        if out:
            table[cell] = out
    return BimoduleHom(src, tgt, rho.parity, table, name=f"{rho.name}^pre-bc")


def cy_bc_square(rho: BimoduleHom, pre: AinfCategory, chains: Sequence[HochschildChain], max_len: int = 2,
                 max_word: int = 2) -> Report:
    """Chain-level bottom square: ``mu_bar(rho^{pre-bc}_* g) = (mu_bar(rho_* F_* g))^bc`` on words ``<= max_len``."""
    cat = pre.base
    F = bc_functor(pre)
    extra = (cat.ring.trunc - 1) if cat.ring.trunc else 0
    rep = Report("cy_bc square", window={"length": max_len, "word length": max_word, "trunc": cat.ring.trunc})
    rpre = rho_pre_bc(rho, pre, max_len=max(len(cs) for (_, cs) in _all_terms(chains)) + 1 if chains else 1,
                      max_word=max_word)
    for g in chains:
        left = mu_bar(rho_pushforward(rpre, g), pre, max_len)
        down = functor_pushforward(F, g)
        right = alpha_bc(mu_bar(rho_pushforward(rho, down), cat, max_len + extra), pre, max_len)
        diff = (left - right).truncate(max_len)
        rep.checked += 1
        if not diff.is_zero():
            rep.add(chain=str(g.describe()[:2]), residual=str(diff.describe()[:3]))
    return rep


def _all_terms(chains):
    for g in chains:
        yield from g.terms


# ---------------------------------------------------------------------------
# unit transfer


def unit_transfer(e: Cochain, pre: AinfCategory, max_len: int = 3) -> Report:
    """HH-unit check for ``e^bc`` on the bounding-cochain category ``pre``."""
    ebc = alpha_bc(e, pre, max_len=0)
    ebc.parity = e.parity
    rep = hh_unit_check(ebc, pre, max_len=max_len)
    rep.name = "hh-unit transfer"
    return rep


def restrict_category(pre: AinfCategory, labels: Sequence) -> AinfCategory:
    """The full subcategory of ``pre`` on ``labels``, with the same keys."""
    return pre_bc_category(pre.base, {P: pre.bc_data[P] for P in labels}, name=f"{pre.name}|{','.join(map(str, labels))}")


def cy_bc_top_square(rho: BimoduleHom, pre: AinfCategory, labels: Sequence, chains: Sequence[HochschildChain],
                     max_len: int = 2, max_word: int = 2) -> Report:
    """Chain-level top square: ``mu_bar_bc(rho^bc_* g) = i^* mu_bar_{pre-bc}(rho^{pre-bc}_* i_* g)``.

    ``chains`` live on the full subcategory on ``labels``; ``i`` keeps keys.
    """
    sub = restrict_category(pre, labels)
    rep = Report("cy_bc top square", window={"length": max_len, "word length": max_word})
    cell_len = max((len(cs) for g in chains for (_, cs) in g.terms), default=0) + 1
    rbc = rho_pre_bc(rho, sub, max_len=cell_len, max_word=max_word)
    rpre = rho_pre_bc(rho, pre, max_len=cell_len, max_word=max_word)
    keep = set(labels)
    for g in chains:
        top = mu_bar(rho_pushforward(rbc, g), sub, max_len)
        up = HochschildChain(pre, None, dict(g.terms))
        full = mu_bar(rho_pushforward(rpre, up), pre, max_len)
        restricted = {cell: v for cell, v in full.table.items()
                      if set(pre.objects_along(*cell)) <= keep}
        diff: dict = {}
        for cell in set(restricted) | set(top.table):
            v = vec_add(top.table.get(cell, {}), {k: -c for k, c in restricted.get(cell, {}).items()})
            if v:
                diff[cell] = v
        rep.checked += 1
        if diff:
            rep.add(chain=str(g.describe()[:2]), residual=str(sorted(diff.items(), key=repr)[:2]))
    return rep
