"""Identity templates for operation bundles, and the JSON input document.

A bundle collects the data a closed-open package would supply: a dg module
``QC`` with a product, the maps ``CO``, ``OC`` and ``CY`` on basis elements,
and the homotopies.  Each template evaluates the residual of one identity on
every basis input inside the truncation window.

>>> from ainfcat.verify import idempotent_bundle, verify_co_algebra
>>> verify_co_algebra(idempotent_bundle()).passed
True
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterator, Mapping

from .ainfty import AinfCategory, CategoryError, Cochain, cup, hochschild_differential
from .bimod import BimoduleHom, _odd_sign, bimod_differential, cshriek, diagonal, mu_bar
from .coeff import CoefficientRing, MonoidSpec, RingElement, RingError
from .complexes import DgModule, vec_add, vec_is_zero, vec_scale
from .graded import GradingDatum, GradingError
from .hoch import HochschildChain, b, cap, rho_pushforward
from .report import Report

__all__ = [
    "DocumentError",
    "OperationBundle",
    "Document",
    "star_product",
    "verify_leibniz_star",
    "verify_co_algebra",
    "verify_oc_module",
    "verify_cardy",
    "cardy_sign",
    "bundle_corruptions",
    "TEMPLATE_FIELDS",
    "deformation_class",
    "basis_chains",
    "point_bundle",
    "idempotent_bundle",
    "load_document",
    "parse_document",
]


class DocumentError(ValueError):
    def __init__(self, message: str, path: str = "", line: int | None = None, column: int | None = None):
        where = f"line {line} column {column}: " if line is not None else (f"{path}: " if path else "")
        super().__init__(where + message)
        self.path, self.line, self.column = path, line, column


# ---------------------------------------------------------------------------
# bundles


@dataclass
class OperationBundle:
    """Operation data on a category.

    ``co[p]`` and ``h_co[(p, q)]`` are cochains; ``oc[(m, cs)]`` and
    ``h_oc[(p, (m, cs))]`` are vectors in ``QC``; ``cy`` is a bimodule
    morphism from the diagonal to the inverse dualizing bimodule and
    ``h_cy[(m, cs)]`` a cochain.  Missing homotopy entries are zero.
    """

    cat: AinfCategory
    qc: DgModule
    star: dict = field(default_factory=dict)
    co: dict = field(default_factory=dict)
    h_co: dict = field(default_factory=dict)
    oc: dict = field(default_factory=dict)
    h_oc: dict = field(default_factory=dict)
    cy: BimoduleHom | None = None
    h_cy: dict = field(default_factory=dict)
    unit: str | None = None
    n: int = 0
    max_len: int = 3
    chain_len: int = 1
    trunc: int | None = None


def _qc_par(qc: DgModule, p) -> int:
    return qc.degrees[p].parity


def star_product(qc: DgModule, star: Mapping, u: Mapping, v: Mapping) -> dict:
    """Bilinear extension of ``star`` to vectors; odd coefficients pass basis elements with the Koszul sign."""
    out: dict = {}
    for a, ca in u.items():
        for bb, cb in v.items():
            img = star.get((a, bb))
            if img:
                out = vec_add(out, vec_scale(ca * _odd_sign(cb, _qc_par(qc, a)), img))
    return out


def _apply_table(table: Mapping, vec: Mapping, lookup) -> dict:
    """``sum_k c_k table[k]`` for a map given on basis elements, as a dict of cochain entries."""
    out: dict = {}
    for k, c in vec.items():
        img = lookup(table, k)
        if img is None:
            continue
        for cell, v in img.items():
            out[cell] = vec_add(out.get(cell, {}), vec_scale(c, v))
    return {k: v for k, v in out.items() if not vec_is_zero(v)}


def _cochain_of(table: Mapping, k):
    ch = table.get(k)
    return ch.table if ch is not None else None


def _combine(*terms) -> dict:
    """Signed sum of cochain tables ``(sign, table)``, ignoring parity bookkeeping."""
    out: dict = {}
    for sign, tab in terms:
        for cell, v in tab.items():
            out[cell] = vec_add(out.get(cell, {}), vec_scale(sign, v))
    return {k: v for k, v in out.items() if not vec_is_zero(v)}


def _window(tab: Mapping, max_len: int, ring: CoefficientRing, trunc: int | None) -> dict:
    out = {}
    for (obj, word), vec in tab.items():
        if len(word) > max_len:
            continue
        if trunc is not None:
            vec = {k: RingElement(ring, {m: x for m, x in c.terms.items() if ring.weight(m) < trunc})
                   for k, c in vec.items()}
        vec = {k: c for k, c in vec.items() if c}
        if vec:
            out[(obj, word)] = vec
    return out


def _fmt(tab: Mapping) -> list:
    return [{"object": str(o), "word": [str(x) for x in w], "value": {str(k): str(c) for k, c in v.items()}}
            for (o, w), v in sorted(tab.items(), key=repr)]


def _co_of(bundle: OperationBundle, vec: Mapping) -> dict:
    return _apply_table(bundle.co, vec, _cochain_of)


def _basis_vec(bundle: OperationBundle, p) -> dict:
    return {p: bundle.cat.ring.one}


def verify_leibniz_star(qc: DgModule, star: Mapping) -> Report:
    """``d(p * q) - d(p) * q - (-1)^|p| p * d(q)`` on every basis pair."""
    rep = Report("leibniz", info={"basis": len(qc.basis)})
    bad = qc.square_residual()
    if bad:
        rep.add(kind="d^2 != 0", inputs=sorted(map(str, bad)))
        return rep
    one = qc.ring.one
    for p in qc.basis:
        for q in qc.basis:
            rep.checked += 1
            u, v = {p: one}, {q: one}
            lhs = qc.apply_d(star_product(qc, star, u, v))
            t1 = star_product(qc, star, qc.apply_d(u), v)
            t2 = star_product(qc, star, u, qc.apply_d(v))
            sign = -1 if _qc_par(qc, p) else 1
            res = vec_add(lhs, vec_add(vec_scale(-1, t1), vec_scale(-sign, t2)))
            if not vec_is_zero(res):
                rep.add(p=str(p), q=str(q), residual={str(k): str(c) for k, c in res.items()})
    return rep


def _check_co_closed(bundle: OperationBundle, rep: Report) -> None:
    cat, qc = bundle.cat, bundle.qc
    for p in qc.basis:
        ch = bundle.co.get(p)
        dco = hochschild_differential(ch, cat, bundle.max_len).table if ch is not None else {}
        res = _combine((1, dco), (-1, _co_of(bundle, qc.apply_d(_basis_vec(bundle, p)))))
        res = _window(res, bundle.max_len, cat.ring, bundle.trunc)
        rep.checked += 1
        if res:
            rep.add(kind="CO is not a chain map", p=str(p), residual=_fmt(res)[:3])


def _hom_boundary_co(bundle: OperationBundle, p, q) -> dict:
    """``del(H)(p, q) = delta(H(p, q)) + H(dp, q) + (-1)^|p| H(p, dq)``."""
    cat, qc = bundle.cat, bundle.qc
    terms = []
    h = bundle.h_co.get((p, q))
    if h is not None:
        terms.append((1, hochschild_differential(h, cat, bundle.max_len).table))
    sign = -1 if _qc_par(qc, p) else 1
    for a, c in qc.apply_d(_basis_vec(bundle, p)).items():
        if (a, q) in bundle.h_co:
            terms.append((1, {k: vec_scale(c, v) for k, v in bundle.h_co[(a, q)].table.items()}))
    for a, c in qc.apply_d(_basis_vec(bundle, q)).items():
        if (p, a) in bundle.h_co:
            terms.append((sign, {k: vec_scale(c, v) for k, v in bundle.h_co[(p, a)].table.items()}))
    return _combine(*terms)


def verify_co_algebra(bundle: OperationBundle) -> Report:
    """``CO(p * q) - CO(p) u CO(q) - del(H_CO)(p, q)`` on every basis pair."""
    cat, qc = bundle.cat, bundle.qc
    rep = Report("co-algebra", window={"length": bundle.max_len, "trunc": bundle.trunc})
    missing = [p for p in qc.basis if p not in bundle.co]
    if missing:
        rep.add(kind="missing CO component", inputs=[str(p) for p in missing])
        return rep
    _check_co_closed(bundle, rep)
    for p in qc.basis:
        for q in qc.basis:
            rep.checked += 1
            lhs = _co_of(bundle, star_product(qc, bundle.star, _basis_vec(bundle, p), _basis_vec(bundle, q)))
            prod = cup(bundle.co[p], bundle.co[q], cat, bundle.max_len).table
            res = _combine((1, lhs), (-1, prod), (-1, _hom_boundary_co(bundle, p, q)))
            res = _window(res, bundle.max_len, cat.ring, bundle.trunc)
            if res:
                rep.add(p=str(p), q=str(q), residual=_fmt(res)[:3])
    return rep


def basis_chains(cat: AinfCategory, max_len: int) -> list[tuple]:
    """Basis chain terms ``(m, cs)`` of the diagonal Hochschild complex with ``len(cs) <= max_len``."""
    out = []
    for m in sorted(cat.morphisms, key=repr):
        for s in range(max_len + 1):
            for cs in sorted(cat.words(cat.tgt(m), s), key=repr):
                end = cat.tgt(cs[-1]) if cs else cat.tgt(m)
                if end == cat.src(m):
                    out.append((m, tuple(cs)))
    return out


def _oc_of(bundle: OperationBundle, chain: HochschildChain) -> dict:
    out: dict = {}
    for key, c in chain.terms.items():
        img = bundle.oc.get(key)
        if img:
            out = vec_add(out, vec_scale(c, img))
    return out


def _h_oc_of(bundle: OperationBundle, p_vec: Mapping, chain: HochschildChain) -> dict:
    out: dict = {}
    for p, cp in p_vec.items():
        for key, c in chain.terms.items():
            img = bundle.h_oc.get((p, key))
            if img:
                out = vec_add(out, vec_scale(cp * c, img))
    return out


def verify_oc_module(bundle: OperationBundle, cap_fn=cap) -> Report:
    """``OC(CO(p) cap a) - p * OC(a) - del(H_OC)(p, a)`` on basis ``p`` and basis chains ``a``.

    ``del(H)(p, a) = d(H(p, a)) + H(dp, a) + (-1)^|p| H(p, b a)``.  The chain
    map property ``OC(b a) = d OC(a)`` is checked first.
    """
    cat, qc = bundle.cat, bundle.qc
    rep = Report("oc-module", window={"chain length": bundle.chain_len, "trunc": bundle.trunc})
    one = cat.ring.one
    chains = [HochschildChain(cat, None, {k: one}) for k in basis_chains(cat, bundle.chain_len + 1)]
    for ch in chains:
        rep.checked += 1
        res = vec_add(_oc_of(bundle, b(ch)), vec_scale(-1, qc.apply_d(_oc_of(bundle, ch))))
        if not vec_is_zero(res):
            rep.add(kind="OC is not a chain map", chain=ch.describe(), residual={str(k): str(c) for k, c in res.items()})
    for p in qc.basis:
        if p not in bundle.co:
            rep.add(kind="missing CO component", input=str(p))
            continue
        pv = _basis_vec(bundle, p)
        sign = -1 if _qc_par(qc, p) else 1
        for ch in chains:
            if ch.max_len() > bundle.chain_len:
                continue
            rep.checked += 1
            lhs = _oc_of(bundle, cap_fn(bundle.co[p], ch))
            rhs = star_product(qc, bundle.star, pv, _oc_of(bundle, ch))
            dh = qc.apply_d(_h_oc_of(bundle, pv, ch))
            dh = vec_add(dh, _h_oc_of(bundle, qc.apply_d(pv), ch))
            dh = vec_add(dh, vec_scale(sign, _h_oc_of(bundle, pv, b(ch))))
            res = vec_add(lhs, vec_scale(-1, vec_add(rhs, dh)))
            if not vec_is_zero(res):
                rep.add(p=str(p), chain=ch.describe(), residual={str(k): str(c) for k, c in res.items()})
    return rep


def cardy_sign(n: int) -> int:
    """``(-1)^{n(n+1)/2}``."""
    return -1 if (n * (n + 1) // 2) % 2 else 1


def verify_cardy(bundle: OperationBundle, n: int | None = None) -> Report:
    """``CO(OC(a)) - (-1)^{n(n+1)/2} mu_bar(CY_*(a)) - del(H_CY)(a)`` on basis chains.

    ``del(H)(a) = delta(H(a)) + H(b a)``.  ``CY`` is first checked to be a
    bimodule morphism.
    """
    cat = bundle.cat
    n = bundle.n if n is None else n
    sign = cardy_sign(n)
    rep = Report("cardy", window={"n": n, "chain length": bundle.chain_len, "length": bundle.max_len},
                 info={"sign": sign})
    if bundle.cy is None:
        rep.add(kind="missing CY")
        return rep
    dcy = bimod_differential(bundle.cy, bundle.max_len)
    rep.checked += 1
    if not dcy.is_zero():
        rep.add(kind="CY is not a bimodule morphism", residual=str(dcy.describe()[:3]))
    one = cat.ring.one
    for key in basis_chains(cat, bundle.chain_len):
        ch = HochschildChain(cat, None, {key: one})
        rep.checked += 1
        lhs = _co_of(bundle, _oc_of(bundle, ch))
        pushed = rho_pushforward(bundle.cy, ch)
        rhs = mu_bar(pushed, cat, bundle.max_len).table if pushed.terms else {}
        terms = [(1, lhs), (-sign, rhs)]
        h = bundle.h_cy.get(key)
        if h is not None:
            terms.append((-1, hochschild_differential(h, cat, bundle.max_len).table))
        for k2, c in b(ch).terms.items():
            if k2 in bundle.h_cy:
                terms.append((-1, {cell: vec_scale(c, v) for cell, v in bundle.h_cy[k2].table.items()}))
        res = _window(_combine(*terms), bundle.max_len, cat.ring, bundle.trunc)
        if res:
            rep.add(chain={"m": str(key[0]), "c": [str(x) for x in key[1]]}, residual=_fmt(res)[:3])
    return rep


# ---------------------------------------------------------------------------
# corruptions and deformation classes


def _flip_vec(vec: Mapping, k) -> dict:
    out = dict(vec)
    out[k] = -out[k]
    return out


def _flip_cochain(ch: Cochain, cell, k) -> Cochain:
    t = dict(ch.table)
    t[cell] = _flip_vec(t[cell], k)
    return Cochain(ch.source, ch.target, ch.parity, t, ch.degree, ch.name)


TEMPLATE_FIELDS = {
    "leibniz": ("star",),
    "co-algebra": ("star", "co", "h_co"),
    "oc-module": ("star", "co", "oc", "h_oc"),
    "cardy": ("co", "oc", "cy", "h_cy"),
}


def bundle_corruptions(bundle: OperationBundle, fields=None) -> Iterator[tuple[str, OperationBundle]]:
    """Every bundle obtained by negating one structure constant among ``fields`` (default: all)."""
    fields = set(fields or ("star", "co", "h_co", "oc", "h_oc", "cy", "h_cy"))
    for key, vec in sorted(bundle.star.items() if "star" in fields else (), key=repr):
        for k in sorted(vec, key=repr):
            yield f"star{key}->{k}", replace(bundle, star={**bundle.star, key: _flip_vec(vec, k)})
    for name in ("co", "h_co", "h_cy"):
        if name not in fields:
            continue
        table = getattr(bundle, name)
        for key, ch in sorted(table.items(), key=repr):
            for cell, vec in sorted(ch.table.items(), key=repr):
                for k in sorted(vec, key=repr):
                    yield (f"{name}[{key}]{cell}->{k}",
                           replace(bundle, **{name: {**table, key: _flip_cochain(ch, cell, k)}}))
    for name in ("oc", "h_oc"):
        if name not in fields:
            continue
        table = getattr(bundle, name)
        for key, vec in sorted(table.items(), key=repr):
            for k in sorted(vec, key=repr):
                yield f"{name}[{key}]->{k}", replace(bundle, **{name: {**table, key: _flip_vec(vec, k)}})
    if bundle.cy is not None and "cy" in fields:
        for key, vec in sorted(bundle.cy.table.items(), key=repr):
            for k in sorted(vec, key=repr):
                t = {**bundle.cy.table, key: _flip_vec(vec, k)}
                cy = BimoduleHom(bundle.cy.source, bundle.cy.target, bundle.cy.parity, t, bundle.cy.name)
                yield f"cy[{key}]->{k}", replace(bundle, cy=cy)


def deformation_class(family: AinfCategory, base: AinfCategory, bulk_index: int = 1) -> Cochain:
    """First-order bulk derivative of ``mu``: the coefficient of ``x_i`` (no other variables) in each entry.

    ``base`` carries the same morphisms over the coefficients the derivative lands in.
    """
    ring = family.ring
    nb = len(ring.bulk.names)
    if not 1 <= bulk_index <= nb:
        raise CategoryError(f"no bulk variable {bulk_index}")
    target = ((0,) * ring.monoid.rank, tuple(int(i == bulk_index - 1) for i in range(nb)))
    table = {}
    for cell, vec in family.mu.table.items():
        v = {}
        for k, c in vec.items():
            x = c.terms.get(target)
            if x:
                v[k] = base.ring.scalar(x)
        if v:
            table[cell] = v
    parity = (1 + ring.bulk.degrees[bulk_index - 1].parity) % 2
    return Cochain(base, base.value_space, parity, table, name=f"d mu / d {ring.bulk.names[bulk_index - 1]}")


# ---------------------------------------------------------------------------
# hand-built bundles


def _qc(ring: CoefficientRing, degrees: Mapping, d: Mapping | None = None) -> DgModule:
    G = ring.datum
    return DgModule.from_basis(ring, {k: G.integer(g) for k, g in degrees.items()}, d)


def _c0(cat: AinfCategory, vec: Mapping) -> Cochain:
    obj = cat.objects[0]
    return Cochain(cat, cat.value_space, 1, {(obj, ()): {k: cat.ring.scalar(c) for k, c in vec.items()}})


def point_bundle(ring: CoefficientRing | None = None) -> OperationBundle:
    """The point: ``QC = Z``, ``CO(1) = e``, ``OC(e) = 1`` and ``CY(e) = -e (x) e``."""
    from .corpus import point

    cat = point(ring)
    R = cat.ring
    qc = _qc(R, {"1": 0})
    B = cshriek(cat, 2)
    M = diagonal(cat)
    key = ("*", (), "e", "e")
    cy = BimoduleHom(M, B, (B.par(key) + M.par("e")) % 2, {((), "e", ()): {key: -R.one}}, name="CY")
    return OperationBundle(cat, qc, star={("1", "1"): {"1": R.one}}, co={"1": _c0(cat, {"e": 1})},
                           oc={("e", ()): {"1": R.one}}, cy=cy, unit="1", max_len=2, chain_len=1)


def idempotent_algebra(ring: CoefficientRing | None = None) -> AinfCategory:
    """``Z[x]/(x^2 - x)`` in degree 0."""
    R = ring or CoefficientRing.integers()
    prods = {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1}, ("x", "x"): {"x": 1}}
    return AinfCategory.from_algebra(R, {"1": 0, "x": 0}, prods, name="idempotent")


def idempotent_bundle(ring: CoefficientRing | None = None) -> OperationBundle:
    """``QC = Z[x]/(x^2 - x)`` mapped identically to the length-0 part of the algebra itself.

    ``CY`` sends ``a`` to ``-sum_i a e_i (x) e_i`` over the idempotents ``e_1 = x``, ``e_2 = 1 - x``.
    """
    cat = idempotent_algebra(ring)
    R = cat.ring
    qc = _qc(R, {"1": 0, "x": 0})
    star = {k: {c: R.scalar(v) for c, v in img.items()} for k, img in
            {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1}, ("x", "x"): {"x": 1}}.items()}
    B = cshriek(cat, 2)
    M = diagonal(cat)
    K = lambda a, c: ("*", (), a, c)  # noqa: E731
    raw = {"1": {K("1", "1"): -1, K("1", "x"): 1, K("x", "1"): 1, K("x", "x"): -2}, "x": {K("x", "x"): -1}}
    par = (B.par(K("1", "1")) + M.par("1")) % 2
    cy = BimoduleHom(M, B, par, {((), m, ()): {k: R.scalar(c) for k, c in v.items()} for m, v in raw.items()},
                     name="CY")
    return OperationBundle(cat, qc, star=star, co={a: _c0(cat, {a: 1}) for a in ("1", "x")},
                           oc={(a, ()): {a: R.one} for a in ("1", "x")}, cy=cy, unit="1", max_len=2,
                           chain_len=1)


# ---------------------------------------------------------------------------
# the input document


@dataclass
class Document:
    ring: CoefficientRing
    category: AinfCategory | None = None
    cochains: dict = field(default_factory=dict)
    bimodules: dict = field(default_factory=dict)
    bundle: OperationBundle | None = None
    source: str = ""


def _need(cond, msg, path):
    if not cond:
        raise DocumentError(msg, path)


def _grading(spec, path="grading") -> GradingDatum:
    if spec in (None, "Z"):
        return GradingDatum.standard()
    if isinstance(spec, str) and spec.startswith("Z/"):
        try:
            return GradingDatum.cyclic(int(spec[2:]))
        except (ValueError, GradingError) as exc:
            raise DocumentError(str(exc), path) from exc
    _need(isinstance(spec, dict), "expected \"Z\", \"Z/d\" or an object", path)
    try:
        return GradingDatum(spec.get("free_rank", 1), tuple(spec.get("torsion", ())), tuple(spec["i"]),
                            tuple(spec["sigma"]))
    except KeyError as exc:
        raise DocumentError(f"missing field {exc.args[0]!r}", path) from exc
    except GradingError as exc:
        raise DocumentError(str(exc), path) from exc


def _ring(spec, datum: GradingDatum, path="ring") -> CoefficientRing:
    spec = spec or {"kind": "integers"}
    _need(isinstance(spec, dict), "expected an object", path)
    kind = spec.get("kind", "integers")
    try:
        if kind == "integers":
            return CoefficientRing.integers(datum)
        if kind == "polynomial":
            return CoefficientRing.polynomial(spec.get("ngens", 1), spec.get("trunc", 6), datum)
        if kind == "t-adic":
            return CoefficientRing(datum, MonoidSpec(1, ((1,),), tuple((0,) for _ in range(datum.ncoords))),
                                   trunc=spec.get("trunc", 6), name="Z[t]")
        if kind == "bulk":
            return CoefficientRing.bulk_polynomial(spec["names"], spec.get("degrees"), spec.get("differential", ()),
                                                   spec.get("trunc", 6), datum)
    except KeyError as exc:
        raise DocumentError(f"missing field {exc.args[0]!r}", path) from exc
    except RingError as exc:
        raise DocumentError(str(exc), path) from exc
    raise DocumentError(f"unknown ring kind {kind!r}", f"{path}.kind")


def _elt(ring: CoefficientRing, text, path) -> RingElement:
    if isinstance(text, int):
        return ring.scalar(text)
    _need(isinstance(text, str), "ring elements are integers or strings", path)
    try:
        return ring.parse(text)
    except (RingError, ValueError) as exc:
        raise DocumentError(str(exc), path) from exc


def _vector(ring, spec, keys, path) -> dict:
    _need(isinstance(spec, dict), "expected an object of coefficients", path)
    out = {}
    for k, v in spec.items():
        _need(k in keys, f"unknown basis element {k!r}", f"{path}.{k}")
        c = _elt(ring, v, f"{path}.{k}")
        if c:
            out[k] = c
    return out


def _category(spec, ring, path="category") -> AinfCategory:
    _need(isinstance(spec, dict), "expected an object", path)
    objs = spec.get("objects", ["*"])
    morph_spec = spec.get("morphisms")
    _need(isinstance(morph_spec, dict) and morph_spec, "needs a nonempty \"morphisms\" object", f"{path}.morphisms")
    morphisms = {}
    for k, v in morph_spec.items():
        p = f"{path}.morphisms.{k}"
        if isinstance(v, int) and len(objs) == 1:
            v = [objs[0], objs[0], v]
        _need(isinstance(v, list) and len(v) == 3, "expected [source, target, degree]", p)
        _need(v[0] in objs and v[1] in objs, "unknown object", p)
        morphisms[k] = (v[0], v[1], v[2])
    name = spec.get("name", "")
    try:
        if "mu" in spec:
            AinfCategory(ring, objs, morphisms, None, name)
            mu = {}
            for i, e in enumerate(spec["mu"]):
                p = f"{path}.mu[{i}]"
                word = tuple(e.get("word", []))
                for j, w in enumerate(word):
                    _need(w in morphisms, f"unknown morphism {w!r}", f"{p}.word[{j}]")
                obj = e.get("object", morphisms[word[0]][0] if word else objs[0])
                _need(obj in objs, f"unknown object {obj!r}", f"{p}.object")
                mu[(obj, word)] = _vector(ring, e.get("value", {}), morphisms, f"{p}.value")
            return AinfCategory(ring, objs, morphisms, mu, name)
        products = {}
        for i, e in enumerate(spec.get("products", [])):
            p = f"{path}.products[{i}]"
            pair = tuple(e.get("inputs", []))
            _need(len(pair) == 2 and all(w in morphisms for w in pair), "inputs must be two morphisms", p)
            products[pair] = _vector(ring, e.get("value", {}), morphisms, f"{p}.value")
        diff = {k: _vector(ring, v, morphisms, f"{path}.differential.{k}")
                for k, v in spec.get("differential", {}).items()}
        for k in diff:
            _need(k in morphisms, f"unknown morphism {k!r}", f"{path}.differential")
        curv = {o: _vector(ring, v, morphisms, f"{path}.curvature.{o}") for o, v in spec.get("curvature", {}).items()}
        return AinfCategory.from_dg(ring, objs, morphisms, products, diff, curv, name)
    except CategoryError as exc:
        raise DocumentError(str(exc), path) from exc


def _cochain(spec, cat: AinfCategory, path) -> Cochain:
    _need(isinstance(spec, dict), "expected an object", path)
    entries = spec.get("entries", [])
    table = {}
    parity = spec.get("parity")
    for i, e in enumerate(entries):
        p = f"{path}.entries[{i}]"
        word = tuple(e.get("word", []))
        for j, w in enumerate(word):
            _need(w in cat.morphisms, f"unknown morphism {w!r}", f"{p}.word[{j}]")
        obj = e.get("object", cat.src(word[0]) if word else cat.objects[0])
        _need(obj in cat.objects, f"unknown object {obj!r}", f"{p}.object")
        vec = _vector(cat.ring, e.get("value", {}), cat.morphisms, f"{p}.value")
        a, z = cat.endpoints(obj, word)
        for k in vec:
            _need(cat.src(k) == a and cat.tgt(k) == z, f"output {k!r} is in the wrong hom space", f"{p}.value")
        if parity is None and vec:
            k = next(iter(vec))
            parity = (cat.par(k) + sum(cat.par(w) for w in word)) % 2
        table[(obj, word)] = vec
    return Cochain(cat, cat.value_space, parity or 0, table, name=path)


def _chain_key(e, cat, path):
    m = e.get("m")
    _need(m in cat.morphisms, f"unknown morphism {m!r}", f"{path}.m")
    cs = tuple(e.get("c", []))
    for j, w in enumerate(cs):
        _need(w in cat.morphisms, f"unknown morphism {w!r}", f"{path}.c[{j}]")
    try:
        HochschildChain(cat, None, {(m, cs): cat.ring.one})
    except CategoryError as exc:
        raise DocumentError(str(exc), path) from exc
    return (m, cs)


def _bundle(spec, cat: AinfCategory, cochains: dict, path="bundle") -> OperationBundle:
    _need(isinstance(spec, dict), "expected an object", path)
    R = cat.ring
    qspec = spec.get("qc", {})
    basis = qspec.get("basis")
    _need(isinstance(basis, dict) and basis, "needs a nonempty \"basis\" object", f"{path}.qc.basis")
    d = {k: _vector(R, v, basis, f"{path}.qc.d.{k}") for k, v in qspec.get("d", {}).items()}
    try:
        qc = _qc(R, basis, d)
    except Exception as exc:  # module validation
        raise DocumentError(str(exc), f"{path}.qc") from exc

    def cochain_ref(x, p):
        if isinstance(x, str):
            _need(x in cochains, f"unknown cochain {x!r}", p)
            return cochains[x]
        return _cochain(x, cat, p)

    star = {}
    for i, e in enumerate(spec.get("star", [])):
        p = f"{path}.star[{i}]"
        pair = (e.get("p"), e.get("q"))
        _need(all(x in basis for x in pair), "p and q must be QC basis elements", p)
        star[pair] = _vector(R, e.get("value", {}), basis, f"{p}.value")
    co = {}
    for k, v in spec.get("co", {}).items():
        _need(k in basis, f"unknown QC basis element {k!r}", f"{path}.co")
        co[k] = cochain_ref(v, f"{path}.co.{k}")
    h_co = {}
    for i, e in enumerate(spec.get("h_co", [])):
        p = f"{path}.h_co[{i}]"
        _need(e.get("p") in basis and e.get("q") in basis, "p and q must be QC basis elements", p)
        h_co[(e["p"], e["q"])] = cochain_ref(e.get("cochain", {}), f"{p}.cochain")
    oc = {}
    for i, e in enumerate(spec.get("oc", [])):
        p = f"{path}.oc[{i}]"
        oc[_chain_key(e, cat, p)] = _vector(R, e.get("value", {}), basis, f"{p}.value")
    h_oc = {}
    for i, e in enumerate(spec.get("h_oc", [])):
        p = f"{path}.h_oc[{i}]"
        _need(e.get("p") in basis, "p must be a QC basis element", p)
        h_oc[(e["p"], _chain_key(e, cat, p))] = _vector(R, e.get("value", {}), basis, f"{p}.value")
    h_cy = {}
    for i, e in enumerate(spec.get("h_cy", [])):
        p = f"{path}.h_cy[{i}]"
        h_cy[_chain_key(e, cat, p)] = cochain_ref(e.get("cochain", {}), f"{p}.cochain")
    cy = None
    if "cy" in spec:
        p = f"{path}.cy"
        cspec = spec["cy"]
        B = cshriek(cat, cspec.get("max_word", 2))
        M = diagonal(cat)
        table = {}
        parity = None
        for i, e in enumerate(cspec.get("entries", [])):
            q = f"{p}.entries[{i}]"
            lw, m, rw = tuple(e.get("left", [])), e.get("m"), tuple(e.get("right", []))
            _need(m in cat.morphisms, f"unknown morphism {m!r}", f"{q}.m")
            vec = {}
            for j, t in enumerate(e.get("value", [])):
                kk = t.get("key", {})
                key = (kk.get("start", cat.objects[0]), tuple(kk.get("word", [])), kk.get("x"), kk.get("y"))
                _need(key in B.keys, "not a basis element of the inverse dualizing bimodule", f"{q}.value[{j}]")
                vec[key] = _elt(R, t.get("coeff", 1), f"{q}.value[{j}].coeff")
                if parity is None:
                    parity = (B.par(key) + M.par(m) + sum(cat.par(x) for x in lw + rw)) % 2
            table[(lw, m, rw)] = vec
        cy = BimoduleHom(M, B, cspec.get("parity", parity or 0), table, name="CY")
    unit = spec.get("unit")
    _need(unit is None or unit in basis, f"unknown unit {unit!r}", f"{path}.unit")
    return OperationBundle(cat, qc, star, co, h_co, oc, h_oc, cy, h_cy, unit, spec.get("n", 0),
                           spec.get("max_len", 3), spec.get("chain_len", 1), spec.get("trunc"))


def parse_document(text: str, source: str = "") -> Document:
    """Parse a JSON input document; errors carry a line/column or a path into the document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    _need(isinstance(data, dict), "the document must be a JSON object", "$")
    known = {"grading", "ring", "category", "bimodules", "cochains", "bundle", "name", "description"}
    for k in data:
        _need(k in known, f"unknown section {k!r}", k)
    datum = _grading(data.get("grading"))
    ring = _ring(data.get("ring"), datum)
    doc = Document(ring, source=source)
    if "category" in data:
        doc.category = _category(data["category"], ring)
    if "cochains" in data:
        _need(doc.category is not None, "cochains need a category", "cochains")
        doc.cochains = {k: _cochain(v, doc.category, f"cochains.{k}") for k, v in data["cochains"].items()}
    for k, v in data.get("bimodules", {}).items():
        _need(doc.category is not None, "bimodules need a category", "bimodules")
        kind = v.get("kind") if isinstance(v, dict) else v
        if kind == "diagonal":
            doc.bimodules[k] = diagonal(doc.category)
        elif kind == "cshriek":
            doc.bimodules[k] = cshriek(doc.category, v.get("max_word", 2) if isinstance(v, dict) else 2)
        else:
            raise DocumentError(f"unknown bimodule kind {kind!r}", f"bimodules.{k}")
    if "bundle" in data:
        _need(doc.category is not None, "a bundle needs a category", "bundle")
        doc.bundle = _bundle(data["bundle"], doc.category, doc.cochains)
    return doc


def load_document(path: str | Path) -> Document:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {p}: {exc.strerror}") from exc
    return parse_document(text, str(p))
