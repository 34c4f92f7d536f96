"""Curved filtered A-infinity categories given by finitely many structure constants.

Conventions used throughout:

* A morphism basis element ``c`` of ``hom(C0, C1)`` has a classical degree
  ``|c|``; the shifted space ``C(C0, C1)`` has the same basis in degree
  ``|c| - 1``, so its Koszul parity is ``|c| + 1``.
* ``mu^s`` is a map of degree 1 on shifted words.  A cochain stores its
  degree as a map; its Hochschild degree is one more.
* Basis elements are closed for the internal differential; everything
  non-trivial lives in ``mu^1`` and in the coefficient ring.
* In a brace ``psi{phi_1, ..., phi_k}`` each ``phi_i`` moves right past the
  raw inputs in front of its block, costing ``(-1)^{|phi_i| * (those parities)}``.
* Evaluating a map of parity ``p`` on ``r_1 k_1, ..., r_n k_n`` pulls each
  coefficient ``r_i`` to the front past the map and ``k_1 .. k_{i-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Mapping, Sequence

from .coeff import CoefficientRing, RingElement
from .complexes import DgModule, cohomology_basis, vec_add, vec_is_zero, vec_scale
from .graded import Degree, TorsorSymbol, TorsorWord, evaluate_ledger, reorder_moves
from .report import Report

__all__ = [
    "CategoryError",
    "AinfCategory",
    "Cochain",
    "Functor",
    "Segment",
    "Insert",
    "brace",
    "brace_value",
    "apply_multilinear",
    "check_ainfty",
    "hochschild_differential",
    "cup",
    "cohomology_category",
    "CohomologyCategory",
    "verify_functor",
    "nu_fun_mu",
    "hh_unit_check",
    "assoc_sign",
    "unary_sign",
    "d_cochain",
]


class CategoryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# trivialization signs, computed once by replaying ledgers


def _sym(label: str, parity: int, dual: bool = False) -> TorsorSymbol:
    from .graded import GradingDatum

    return TorsorSymbol(label, GradingDatum.standard().integer(parity), dual)


@lru_cache(maxsize=None)
def assoc_sign(pa: int) -> int:
    """``a o b = assoc_sign(|a|) * y`` whenever ``mu^2(sa, sb) = s y``.

    Comes from ``sigma(o) = sigma(mu) s0 s1^v s2^v``: ``s0`` moves to the front
    and ``s2^v`` moves past ``a``.
    """
    word = TorsorWord((_sym("mu", 1), _sym("s0", 1), _sym("s1", 1, True), _sym("s2", 1, True),
                       _sym("a", pa % 2), _sym("b", 0)))
    led = reorder_moves(word, ["s0", "mu", "s1", "a", "s2", "b"])
    return evaluate_ledger(word, led)[1]


@lru_cache(maxsize=None)
def unary_sign() -> int:
    """Sign of ``sigma(mu) s0 s1^v -> s0 sigma(mu) s1^v``, used for one-input maps."""
    word = TorsorWord((_sym("mu", 1), _sym("s0", 1), _sym("s1", 1, True)))
    return evaluate_ledger(word, reorder_moves(word, ["s0", "mu", "s1"]))[1]


# ---------------------------------------------------------------------------
# categories


class AinfCategory:
    """Objects, graded morphism bases and the structure constants of ``mu``.

    ``morphisms`` maps a (globally unique, hashable) key to ``(source, target,
    degree)`` where ``degree`` is the unshifted degree.  ``mu`` maps
    ``(object, word)`` to an output vector ``{key: RingElement}``; ``object`` is
    the source of the word and matters only for the curvature entries.
    """

    def __init__(self, ring: CoefficientRing, objects: Sequence, morphisms: Mapping, mu: Mapping | None = None,
                 name: str = ""):
        self.ring = ring
        self.objects = list(objects)
        self.morphisms = {}
        for k, (a, b, g) in morphisms.items():
            if a not in self.objects or b not in self.objects:
                raise CategoryError(f"morphism {k!r} has unknown endpoints")
            if not isinstance(g, Degree):
                g = ring.datum.integer(g)
            self.morphisms[k] = (a, b, g)
        self.name = name
        self._out: dict = {o: [] for o in self.objects}
        for k, (a, b, _) in self.morphisms.items():
            self._out[a].append(k)
        self._par = {k: (g.parity + 1) % 2 for k, (_, _, g) in self.morphisms.items()}
        self.mu = Cochain(self, self.value_space, 1, {})
        if mu:
            self.mu = Cochain(self, self.value_space, 1, self._normalize_table(mu))
            self._check_mu()

    # -- key data
    def src(self, k):
        return self.morphisms[k][0]

    def tgt(self, k):
        return self.morphisms[k][1]

    def degree(self, k) -> Degree:
        return self.morphisms[k][2]

    def shifted_degree(self, k) -> Degree:
        return self.morphisms[k][2] - 1

    def par(self, k) -> int:
        return self._par[k]

    def hom_keys(self, a, b) -> list:
        return [k for k in self._out[a] if self.tgt(k) == b]

    @property
    def value_space(self) -> "ShiftedDiagonal":
        return ShiftedDiagonal(self)

    def words(self, start, length: int):
        """All composable basis words of the given length starting at ``start``."""
        if length == 0:
            yield ()
            return
        stack = [((), start)]
        while stack:
            w, o = stack.pop()
            for k in self._out[o]:
                nw = w + (k,)
                if len(nw) == length:
                    yield nw
                else:
                    stack.append((nw, self.tgt(k)))

    def words_ending(self, end, length: int) -> list:
        """All composable basis words of the given length ending at ``end`` (as ``(start, word)``)."""
        cache = self.__dict__.setdefault("_ending", {})
        if (end, length) not in cache:
            cache[(end, length)] = [(o, w) for o in self.objects for w in sorted(self.words(o, length), key=repr)
                                    if (w and self.tgt(w[-1]) == end) or (not w and o == end)]
        return cache[(end, length)]

    def all_words(self, max_len: int, min_len: int = 0):
        for o in self.objects:
            for s in range(min_len, max_len + 1):
                for w in sorted(self.words(o, s), key=repr):
                    yield o, w

    def endpoints(self, obj, word) -> tuple:
        if not word:
            return obj, obj
        return self.src(word[0]), self.tgt(word[-1])

    def objects_along(self, obj, word) -> list:
        return [obj] + [self.tgt(k) for k in word]

    # -- construction helpers
    def _normalize_table(self, table: Mapping) -> dict:
        out = {}
        for key, vec in table.items():
            obj, word = key
            word = tuple(word)
            for a, b in zip(word, word[1:]):
                if self.tgt(a) != self.src(b):
                    raise CategoryError(f"word {word!r} is not composable")
            if word and self.src(word[0]) != obj:
                raise CategoryError(f"word {word!r} does not start at {obj!r}")
            v = {k: (c if isinstance(c, RingElement) else self.ring.scalar(c)) for k, c in vec.items()}
            v = {k: c for k, c in v.items() if c}
            if v:
                out[(obj, word)] = v
        return out

    def _check_mu(self):
        for (obj, word), vec in self.mu.table.items():
            a, b = self.endpoints(obj, word)
            for k, c in vec.items():
                if self.src(k) != a or self.tgt(k) != b:
                    raise CategoryError(f"mu{word!r} has output {k!r} in the wrong hom space")
                for t in c.terms:
                    g = self.ring.key_degree(t) + self.shifted_degree(k) - sum(
                        (self.shifted_degree(w) for w in word), self.ring.datum.zero)
                    if g != self.ring.datum.integer(1):
                        raise CategoryError(f"mu{word!r} -> {k!r} has degree {g}, expected 1")
            if not word:
                for c in vec.values():
                    if c.filtration_level() < 1:
                        raise CategoryError(f"curvature at {obj!r} is not in positive filtration")

    def with_mu(self, mu: Mapping, name: str = "") -> "AinfCategory":
        return AinfCategory(self.ring, self.objects, self.morphisms, mu, name or self.name)

    @property
    def max_arity(self) -> int:
        return self.mu.max_len

    def is_curved(self) -> bool:
        return any(not w for (_, w) in self.mu.table)

    # -- standard constructors
    @classmethod
    def from_dg(cls, ring: CoefficientRing, objects: Sequence, morphisms: Mapping, products: Mapping,
                differential: Mapping | None = None, curvature: Mapping | None = None,
                name: str = "") -> "AinfCategory":
        """Category from a (curved) dg category: ``mu^1(sa) = -s(da)``, ``mu^2(sa, sb) = +-s(ab)``.

        ``products`` maps ``(a, b)`` (``a`` then ``b`` along the path) to
        ``{c: coeff}``; ``differential`` maps ``a`` to ``{b: coeff}``;
        ``curvature`` maps an object to a vector, used as ``mu^0``.
        Signs come from :func:`assoc_sign` and :func:`unary_sign`.
        """
        cat = cls(ring, objects, morphisms, None, name)
        mu = {}
        for o, vec in (curvature or {}).items():
            mu[(o, ())] = {k: _as_ring(ring, c) for k, c in vec.items()}
        for a, img in (differential or {}).items():
            if img:
                mu[(cat.src(a), (a,))] = {b: unary_sign() * _as_ring(ring, c) for b, c in img.items()}
        for (a, b), img in products.items():
            sgn = assoc_sign(cat.degree(a).parity)
            mu[(cat.src(a), (a, b))] = {c: sgn * _as_ring(ring, v) for c, v in img.items()}
        return cls(ring, objects, morphisms, mu, name)

    @classmethod
    def from_algebra(cls, ring: CoefficientRing, degrees: Mapping, products: Mapping,
                     differential: Mapping | None = None, obj="*", name: str = "",
                     curvature: Mapping | None = None) -> "AinfCategory":
        """One-object version of :meth:`from_dg`; ``curvature`` is a vector."""
        morph = {k: (obj, obj, g) for k, g in degrees.items()}
        return cls.from_dg(ring, [obj], morph, products, differential,
                           {obj: curvature} if curvature else None, name)


def _as_ring(ring: CoefficientRing, c) -> RingElement:
    return c if isinstance(c, RingElement) else ring.scalar(c) if not isinstance(c, str) else ring.parse(c)


class ShiftedDiagonal:
    """The shifted diagonal bimodule: values are shifted morphisms, structure maps are ``mu``."""

    def __init__(self, cat: AinfCategory):
        self.cat = cat

    def par(self, k) -> int:
        return self.cat.par(k)

    def src(self, k):
        return self.cat.src(k)

    def tgt(self, k):
        return self.cat.tgt(k)

    def __eq__(self, other):
        return isinstance(other, ShiftedDiagonal) and other.cat is self.cat

    def __hash__(self):
        return id(self.cat)


# ---------------------------------------------------------------------------
# cochains and functors


class Cochain:
    """Multilinear maps on composable words, stored on basis words.

    ``table[(obj, word)]`` is the output vector; ``parity`` is the parity of the
    cochain as a map (its Hochschild degree is one more).
    """

    def __init__(self, source: AinfCategory, target, parity: int, table: Mapping | None = None,
                 degree: Degree | None = None, name: str = ""):
        self.source = source
        self.target = target
        self.parity = parity % 2
        self.table = {k: v for k, v in (table or {}).items() if v}
        self.degree = degree
        self.name = name

    @property
    def ring(self) -> CoefficientRing:
        return self.source.ring

    @property
    def max_len(self) -> int:
        return max((len(w) for (_, w) in self.table), default=0)

    def value(self, obj, word) -> dict | None:
        return self.table.get((obj, tuple(word)))

    def lengths(self) -> set:
        return {len(w) for (_, w) in self.table}

    def component(self, s: int) -> "Cochain":
        return self._with({k: v for k, v in self.table.items() if len(k[1]) == s})

    def truncate(self, max_len: int) -> "Cochain":
        return self._with({k: v for k, v in self.table.items() if len(k[1]) <= max_len})

    def _with(self, table) -> "Cochain":
        return Cochain(self.source, self.target, self.parity, table, self.degree, self.name)

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.parity != self.parity and self.table and other.table:
            raise CategoryError("adding cochains of different parity")
        t = dict(self.table)
        for k, v in other.table.items():
            t[k] = vec_add(t.get(k, {}), v)
        out = self._with({k: v for k, v in t.items() if v})
        if not self.table:
            out.parity = other.parity
        return out

    def __neg__(self) -> "Cochain":
        return self._with({k: vec_scale(-1, v) for k, v in self.table.items()})

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def scale(self, r) -> "Cochain":
        return self._with({k: vec_scale(r, v) for k, v in self.table.items()})

    def is_zero(self) -> bool:
        return all(vec_is_zero(v) for v in self.table.values())

    def below(self, trunc: int | None) -> "Cochain":
        """Drop coefficient terms of filtration weight ``>= trunc``."""
        if trunc is None:
            return self
        ring = self.ring
        t = {}
        for k, v in self.table.items():
            vv = {}
            for key, c in v.items():
                c2 = RingElement(ring, {m: x for m, x in c.terms.items() if ring.weight(m) < trunc})
                if c2:
                    vv[key] = c2
            if vv:
                t[k] = vv
        return self._with(t)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        return f"Cochain({self.name or '?'}, parity={self.parity}, {len(self.table)} entries)"

    def describe(self) -> list:
        rows = []
        for (obj, word), vec in sorted(self.table.items(), key=repr):
            rows.append({"object": obj, "word": list(word), "value": {str(k): str(c) for k, c in vec.items()}})
        return rows


class Functor:
    """A (pre-)functor given by ``obj_map`` and components ``table[(obj, word)]``.

    ``identity=True`` means ``F^1 = id`` and nothing else, without a table.
    """

    def __init__(self, source: AinfCategory, target: AinfCategory, obj_map: Mapping | None = None,
                 table: Mapping | None = None, identity: bool = False, name: str = ""):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map or {o: o for o in source.objects})
        self.table = {k: v for k, v in (table or {}).items() if v}
        self.identity = identity
        self.name = name
        if not identity:
            for (obj, word), vec in self.table.items():
                if not word:
                    for c in vec.values():
                        if c.filtration_level() < 1:
                            raise CategoryError(f"F^0 at {obj!r} is not in positive filtration")

    @classmethod
    def identity_of(cls, cat: AinfCategory) -> "Functor":
        return cls(cat, cat, identity=True, name="id")

    @property
    def max_len(self) -> int:
        if self.identity:
            return 1
        return max((len(w) for (_, w) in self.table), default=0)

    def __call__(self, obj):
        return self.obj_map[obj]

    def value(self, obj, word) -> dict | None:
        if self.identity:
            if len(word) == 1:
                return {word[0]: self.target.ring.one}
            return None
        return self.table.get((obj, tuple(word)))

    def has_zero_length(self, obj) -> bool:
        return not self.identity and (obj, ()) in self.table

    def as_cochain(self) -> Cochain:
        if self.identity:
            t = {(self.source.src(k), (k,)): {k: self.source.ring.one} for k in self.source.morphisms}
        else:
            t = dict(self.table)
        return Cochain(self.source, self.target.value_space, 0, t, name=self.name or "F")


# ---------------------------------------------------------------------------
# the brace engine


@dataclass
class Insert:
    """An inserted multilinear map for the engine.

    ``lookup(obj, subword, mpos)`` returns an output vector or ``None``; ``mpos``
    is the index of the module input inside ``subword`` (or ``None``).
    """

    lookup: Callable
    parity: int
    max_len: int
    takes_module: bool = False
    makes_module: bool = False


@dataclass
class Segment:
    """Functor blocks placed between inserts; ``lookup(obj, subword)``."""

    lookup: Callable
    max_len: int
    has_zero: Callable
    obj: Callable


def cochain_insert(phi: Cochain) -> Insert:
    return Insert(lambda o, w, m: phi.table.get((o, w)), phi.parity, phi.max_len)


def functor_segment(F: Functor) -> Segment:
    if F.identity:
        one = F.target.ring.one
        return Segment(lambda o, w: {w[0]: one} if len(w) == 1 else None, 1, lambda o: False, lambda o: o)
    return Segment(lambda o, w: F.table.get((o, w)), F.max_len, F.has_zero_length, F.__call__)


def identity_segment(ring: CoefficientRing) -> Segment:
    one = ring.one
    return Segment(lambda o, w: {w[0]: one} if len(w) == 1 else None, 1, lambda o: False, lambda o: o)


def apply_multilinear(lookup: Callable, parity: int, start, slots: Sequence[Mapping], mslot, slot_par: Callable,
                      ring: CoefficientRing) -> dict:
    """Evaluate a multilinear map on vectors, pulling coefficients to the front."""
    prepared = []
    for i, vec in enumerate(slots):
        items = []
        for k, c in vec.items():
            ev, od = c.parity_parts()
            items.append((k, ev, od, slot_par(k, i == mslot)))
        if not items:
            return {}
        prepared.append(items)
    out: dict = {}
    for combo in product(*prepared):
        keys = tuple(k for k, _, _, _ in combo)
        img = lookup(start, keys, mslot)
        if not img:
            continue
        coeff = ring.one
        running = parity
        for k, ev, od, kp in combo:
            if od:
                c = ev - od if running % 2 else ev + od
            else:
                c = ev
            coeff = coeff * c
            if not coeff:
                break
            running += kp
        if not coeff:
            continue
        for ok, oc in img.items():
            term = coeff * oc
            if term:
                out = vec_add(out, {ok: term})
    return out


def brace_value(outer_lookup: Callable, outer_parity: int, outer_arity: int, word: Sequence, objs: Sequence,
                inserts: Sequence[Insert], segments: Sequence[Segment], in_par: Sequence[int],
                slot_par: Callable, ring: CoefficientRing, mpos: int | None = None,
                out_start: Callable | None = None) -> dict:
    """Sum over all ways of cutting ``word`` into functor blocks and the inserts, in order.

    ``objs[p]`` is the object in front of ``word[p]`` (``len(word) + 1`` entries);
    ``in_par[p]`` is the Koszul parity of ``word[p]``.
    """
    n = len(word)
    k = len(inserts)
    prefix = [0]
    for p in in_par:
        prefix.append((prefix[-1] + p) % 2)
    total: dict = {}
    slots: list = []
    start = out_start(objs[0]) if out_start else segments[0].obj(objs[0])

    def finish(sign, mslot):
        nonlocal total
        v = apply_multilinear(outer_lookup, outer_parity, start, slots, mslot, slot_par, ring)
        if v:
            total = vec_add(total, vec_scale(sign, v) if sign < 0 else v)

    def rec(p, j, sign, mslot):
        if p == n and j == k:
            finish(sign, mslot)
        free = outer_arity - len(slots) - (k - j)
        if free < 0:
            return
        if j < k:
            ins = inserts[j]
            for ln in range(0, min(ins.max_len, n - p) + 1):
                covers = mpos is not None and p <= mpos < p + ln
                if ins.takes_module:
                    if mpos is None or p > mpos:
                        break
                    if not covers:
                        continue
                elif covers:
                    break
                v = ins.lookup(objs[p], tuple(word[p:p + ln]), (mpos - p) if covers else None)
                if not v:
                    continue
                s = -sign if (ins.parity and prefix[p]) else sign
                slots.append(v)
                rec(p + ln, j + 1, s, len(slots) - 1 if ins.makes_module else mslot)
                slots.pop()
        if free < 1:
            return
        seg = segments[j]
        for ln in range(0, min(seg.max_len, n - p) + 1):
            if mpos is not None and p <= mpos < p + ln:
                break
            if ln == 0:
                if not seg.has_zero(objs[p]):
                    continue
            v = seg.lookup(objs[p], tuple(word[p:p + ln]))
            if not v:
                continue
            slots.append(v)
            rec(p + ln, j, sign, mslot)
            slots.pop()

    rec(0, 0, 1, None)
    return total


def _cochain_outer(psi) -> tuple:
    if isinstance(psi, Functor):
        return (lambda o, keys, m: psi.value(o, keys)), 0, psi.max_len
    return (lambda o, keys, m: psi.table.get((o, keys))), psi.parity, psi.max_len


def brace(psi, args: Sequence[Cochain] = (), functors: Sequence[Functor] | None = None, max_len: int = 4,
          source: AinfCategory | None = None, target=None, name: str = "") -> Cochain:
    """``psi{phi_1, ..., phi_k}`` with functor blocks ``F_0, ..., F_k`` (identities by default).

    ``psi`` is a :class:`Cochain` on the target category (or a :class:`Functor`,
    treated as a parity-zero map).  The result is tabulated on words of length
    ``<= max_len`` in the source category.
    """
    src = source or (args[0].source if args else (functors[0].source if functors else psi.source))
    fun = list(functors) if functors else [Functor.identity_of(src) for _ in range(len(args) + 1)]
    if len(fun) != len(args) + 1:
        raise CategoryError("need one functor per gap between inserts")
    tgt_cat = fun[0].target
    segs = [functor_segment(F) for F in fun]
    ins = [cochain_insert(a) for a in args]
    lookup, par, arity = _cochain_outer(psi)
    ring = src.ring
    parity = (par + sum(a.parity for a in args)) % 2
    slot_par = lambda key, is_mod: tgt_cat.par(key)  # noqa: E731
    table = {}
    for obj, word in src.all_words(max_len):
        objs = src.objects_along(obj, word)
        v = brace_value(lookup, par, arity, word, objs, ins, segs, [src.par(w) for w in word], slot_par, ring)
        if v:
            table[(obj, word)] = v
    tspace = target if target is not None else (psi.target if isinstance(psi, Cochain) else tgt_cat.value_space)
    return Cochain(src, tspace, parity, table, name=name)


def d_cochain(phi: Cochain) -> Cochain:
    """``d_R`` applied to every output coefficient (basis inputs are closed)."""
    t = {}
    for k, v in phi.table.items():
        w = {key: c.d() for key, c in v.items()}
        w = {key: c for key, c in w.items() if c}
        if w:
            t[k] = w
    return Cochain(phi.source, phi.target, phi.parity + 1, t, name=f"d({phi.name})")


# ---------------------------------------------------------------------------
# relations


def _fmt_vec(v: Mapping) -> str:
    return " + ".join(f"({c})*{k}" for k, c in sorted(v.items(), key=repr)) or "0"


def check_ainfty(cat: AinfCategory, trunc: int | None = None, max_len: int = 6) -> Report:
    """Residual of ``d(mu) + mu{mu}`` on every composable word of length ``<= max_len``."""
    rep = Report("ainfty", window={"length": max_len, "trunc": trunc if trunc is not None else cat.ring.trunc})
    mm = brace(cat.mu, [cat.mu], max_len=max_len)
    res = (d_cochain(cat.mu).truncate(max_len) + mm).below(trunc)
    for obj, word in cat.all_words(max_len):
        rep.checked += 1
        v = res.table.get((obj, word))
        if v:
            rep.add(length=len(word), objects=[str(o) for o in cat.objects_along(obj, word)],
                    word=[str(w) for w in word], residual=_fmt_vec(v))
    return rep


def hochschild_differential(alpha: Cochain, cat: AinfCategory | None = None, max_len: int = 4) -> Cochain:
    """``d(alpha) + mu{alpha} - (-1)^|alpha| alpha{mu}`` for ``alpha`` valued in the shifted diagonal."""
    cat = cat or alpha.source
    a = brace(cat.mu, [alpha], max_len=max_len)
    b = brace(alpha, [cat.mu], max_len=max_len)
    out = d_cochain(alpha).truncate(max_len) + a + (b if alpha.parity else -b)
    out.parity = (alpha.parity + 1) % 2
    out.name = f"del({alpha.name})"
    return out


def cup(psi: Cochain, phi: Cochain, cat: AinfCategory | None = None, max_len: int = 4) -> Cochain:
    """``psi u phi = mu{psi, phi}`` with the sign of ``sigma(u) = sigma(mu) s0 s1^v s2^v``."""
    cat = cat or psi.source
    m = brace(cat.mu, [psi, phi], max_len=max_len)
    return m.scale(assoc_sign((psi.parity + 1) % 2))


# ---------------------------------------------------------------------------
# cohomology category


@dataclass
class CohomologyCategory:
    """Bases of ``H(hom(C0, C1))`` (as cycle vectors) and structure constants of composition."""

    cat: AinfCategory
    bases: dict
    degrees: dict
    compose: dict

    def table_rows(self) -> list:
        rows = []
        for (a, b, c), tab in sorted(self.compose.items(), key=repr):
            for (i, j), coords in sorted(tab.items()):
                rows.append({"objects": [str(a), str(b), str(c)], "left": i, "right": j,
                             "result": [str(x) for x in coords]})
        return rows

    def is_associative(self) -> bool:
        objs = self.cat.objects
        for a in objs:
            for b in objs:
                for c in objs:
                    for d in objs:
                        for i in range(len(self.bases[(a, b)])):
                            for j in range(len(self.bases[(b, c)])):
                                for k in range(len(self.bases[(c, d)])):
                                    left = self._mul_vec(a, c, d, self.compose[(a, b, c)][(i, j)], k, True)
                                    jk = self.compose[(b, c, d)][(j, k)]
                                    right = self._mul_vec(a, b, d, jk, i, False)
                                    if left != right:
                                        return False
        return True

    def _mul_vec(self, a, b, c, coords, other, coords_left):
        out = [Fraction(0)] * len(self.bases[(a, c)])
        for idx, x in enumerate(coords):
            if not x:
                continue
            key = (idx, other) if coords_left else (other, idx)
            for t, y in enumerate(self.compose[(a, b, c)][key]):
                out[t] += x * y
        return out

    def unit_candidates(self, obj) -> list:
        """Coordinates of two-sided units in ``H(hom(obj, obj))`` if one exists (single-object check)."""
        n = len(self.bases[(obj, obj)])
        from .linalg import SparseSystem

        sysm = SparseSystem()
        tab = self.compose[(obj, obj, obj)]
        for j in range(n):
            for t in range(n):
                row_l = {i: tab[(i, j)][t] for i in range(n) if tab[(i, j)][t]}
                row_r = {i: tab[(j, i)][t] for i in range(n) if tab[(j, i)][t]}
                sysm.add(row_l, int(j == t))
                sysm.add(row_r, int(j == t))
        if not sysm.consistent:
            return []
        sol = sysm.solution()
        return [sol.get(i, Fraction(0)) for i in range(n)]


def _scalar_value(c: RingElement):
    if not c.is_scalar():
        raise CategoryError("cohomology category needs scalar structure constants")
    return c.constant_term()


def cohomology_category(cat: AinfCategory) -> CohomologyCategory:
    """Cohomology with respect to ``mu^1`` and the induced composition."""
    if cat.is_curved():
        raise CategoryError("cohomology category needs vanishing curvature")
    if cat.ring.monoid.generators or cat.ring.bulk.names:
        raise CategoryError("cohomology category needs a trivially filtered ring; specialize first")
    ring = cat.ring
    u = unary_sign()
    bases, degrees, coords_of = {}, {}, {}
    for a in cat.objects:
        for b in cat.objects:
            keys = cat.hom_keys(a, b)
            degs = {k: cat.degree(k) for k in keys}
            d = {}
            for k in keys:
                img = cat.mu.value(a, (k,))
                if img:
                    d[k] = {kk: u * c for kk, c in img.items()}
            M = DgModule.from_basis(ring, degs, d)
            reps, degs_out, coord_fns = [], [], {}
            for g in sorted(set(degs.values()), key=lambda x: x.coords):
                r, fn = cohomology_basis(M, g)
                coord_fns[g] = (len(reps), len(r), fn)
                reps.extend(r)
                degs_out.extend([g] * len(r))
            bases[(a, b)] = reps
            degrees[(a, b)] = degs_out
            coords_of[(a, b)] = (coord_fns, len(reps))
    compose = {}
    for a in cat.objects:
        for b in cat.objects:
            for c in cat.objects:
                tab = {}
                fns, total = coords_of[(a, c)]
                for i, x in enumerate(bases[(a, b)]):
                    gx = degrees[(a, b)][i]
                    for j, y in enumerate(bases[(b, c)]):
                        gy = degrees[(b, c)][j]
                        prod_vec: dict = {}
                        for kx, cx in x.items():
                            for ky, cy in y.items():
                                img = cat.mu.value(a, (kx, ky))
                                if not img:
                                    continue
                                s = assoc_sign(cat.degree(kx).parity)
                                for kz, cz in img.items():
                                    prod_vec[kz] = prod_vec.get(kz, 0) + s * cx * cy * _scalar_value(cz)
                        prod_vec = {k: v for k, v in prod_vec.items() if v}
                        coords = [Fraction(0)] * total
                        if prod_vec:
                            g = gx + gy
                            off, n, fn = fns[g]
                            for t, val in enumerate(fn(prod_vec)):
                                coords[off + t] = val
                        tab[(i, j)] = coords
                compose[(a, b, c)] = tab
    return CohomologyCategory(cat, bases, degrees, compose)


# ---------------------------------------------------------------------------
# functors and natural transformations


def verify_functor(F: Functor, max_len: int = 4, trunc: int | None = None) -> Report:
    """Residual of ``d(F) + mu_D{}_F - F{mu_C}`` on words of length ``<= max_len``."""
    rep = Report("functor", window={"length": max_len, "trunc": trunc})
    C, D = F.source, F.target
    lhs = brace(D.mu, [], [F], max_len=max_len, source=C)
    rhs = brace(F, [C.mu], [Functor.identity_of(C), Functor.identity_of(C)], max_len=max_len,
                source=C, target=D.value_space)
    dF = d_cochain(F.as_cochain()).truncate(max_len)
    res = (dF + lhs - rhs).below(trunc)
    for obj, word in C.all_words(max_len):
        rep.checked += 1
        v = res.table.get((obj, word))
        if v:
            rep.add(length=len(word), word=[str(w) for w in word], residual=_fmt_vec(v))
    return rep


def nu_fun_mu(alphas: Sequence[Cochain], functors: Sequence[Functor], max_len: int = 4,
              sign: int = -1) -> Cochain:
    """Structure maps of the category of functors ``C -> D``.

    For one argument this is ``mu_D{alpha} + sign * (-1)^|alpha| alpha{mu_C}``;
    ``sign = -1`` makes it square to zero (see the tests), ``sign = +1`` is the
    other reading of the formula.
    """
    C = functors[0].source
    D = functors[0].target
    if not alphas:
        return Cochain(C, D.value_space, 1, {})
    out = brace(D.mu, list(alphas), list(functors), max_len=max_len, source=C)
    if len(alphas) == 1:
        a = alphas[0]
        ids = [Functor.identity_of(C), Functor.identity_of(C)]
        b = brace(a, [C.mu], ids, max_len=max_len, source=C, target=a.target)
        s = sign * (-1 if a.parity else 1)
        out = out + (b if s > 0 else -b)
        out.parity = (a.parity + 1) % 2
    return out


def hh_unit_check(e: Cochain, cat: AinfCategory | None = None, max_len: int = 3, left_right: bool = True) -> Report:
    """Whether ``L^1(e)`` is cohomologous to the identity of the diagonal bimodule.

    ``L^1(phi) = -mu{phi; id;}`` and ``R^1(phi) = -mu{; id; phi}``; the sign is the
    unary trivialization sign.  Solvability of ``del h = L^1(e) - id`` is tested
    in bimodule homs of total length ``<= max_len``; also ``L^1(e) + R^1(e)``.
    """
    from .bimod import BimoduleHom, diagonal, left_action, right_action, solve_exact

    cat = cat or e.source
    rep = Report("hh-unit", window={"bimodule length": max_len})
    de = hochschild_differential(e, cat, max_len=max_len + 1)
    if not de.is_zero():
        rep.add(kind="not closed", residual=str(de.describe()[:3]))
        return rep
    M = diagonal(cat)
    L = left_action(e, M, max_len)
    ident = BimoduleHom.identity(M, M)
    ok, info = solve_exact(L - ident, M, M, max_len)
    rep.checked += 1
    rep.info["L1(e) - id exact"] = ok
    if not ok:
        rep.add(kind="L1(e) - id not exact", detail=info)
    if left_right:
        R = right_action(e, M, max_len)
        ok2, info2 = solve_exact(L + R, M, M, max_len)
        rep.checked += 1
        rep.info["L1(e) + R1(e) exact"] = ok2
        if not ok2:
            rep.add(kind="L1(e) + R1(e) not exact", detail=info2)
    return rep
