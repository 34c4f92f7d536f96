"""Coefficient rings: truncated monoid rings with divided-power bulk variables.

An element is a finite sum of monomials ``c * r^u * x_1^[k_1] ... x_n^[k_n]``
where ``u`` lies in the monoid spanned by the declared generators and
``x_i^[k] = x_i^k / k!``.  The filtration weight of a monomial is the length
of ``u`` (number of generators needed) plus ``k_1 + ... + k_n``; everything of
weight ``>= trunc`` is dropped.

>>> R = CoefficientRing.bulk_polynomial(["x"], trunc=8)
>>> x2 = R.parse("x1^[2]")
>>> x2 * R.parse("x1^[3]")
10*x1^[5]
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .graded import Degree, GradingDatum, GradingMorphism

__all__ = [
    "RingError",
    "MonoidSpec",
    "BulkSpec",
    "CoefficientRing",
    "RingElement",
    "NovikovElement",
    "novikov_specialize",
    "AssociatedGraded",
    "associated_graded",
    "CoeffRingMorphism",
    "Number",
]

Number = int | Fraction
INF = math.inf


class RingError(ValueError):
    pass


def _num(c) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


@dataclass(frozen=True)
class MonoidSpec:
    """Generators ``u_1..u_k`` of a monoid in ``Z^m`` and its grading matrix.

    ``grading`` has one row per coordinate of the grading datum and ``m`` columns.
    """

    rank: int
    generators: tuple[tuple[int, ...], ...]
    grading: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gens = tuple(tuple(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "grading", tuple(tuple(r) for r in self.grading))
        for g in gens:
            if len(g) != self.rank:
                raise RingError("generator has the wrong length")
            if not any(g):
                raise RingError("monoid generators must be nonzero")

    def degree_coords(self, u: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(r[k] * u[k] for k in range(self.rank)) for r in self.grading)


@dataclass(frozen=True)
class BulkSpec:
    """Bulk variables with degrees and the linear differential ``d(x_i) = sum_j D[j][i] x_j``."""

    names: tuple[str, ...]
    degrees: tuple[Degree, ...]
    differential: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        n = len(self.names)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "degrees", tuple(self.degrees))
        d = tuple(tuple(r) for r in self.differential) or tuple((0,) * n for _ in range(n))
        object.__setattr__(self, "differential", d)
        if len(self.degrees) != n or len(d) != n or any(len(r) != n for r in d):
            raise RingError("bulk data has inconsistent sizes")
        sq = [[sum(d[i][k] * d[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        if any(any(r) for r in sq):
            raise RingError("bulk differential does not square to zero")
        for i in range(n):
            for j in range(n):
                if d[j][i] and self.degrees[j] != self.degrees[i] + 1:
                    raise RingError(f"d({self.names[i]}) has a term {self.names[j]} of the wrong degree")


class CoefficientRing:
    """A graded supercommutative ring with filtration (by truncation) and differential."""

    def __init__(
        self,
        datum: GradingDatum | None = None,
        monoid: MonoidSpec | None = None,
        bulk: BulkSpec | None = None,
        trunc: int | None = None,
        name: str = "",
    ):
        self.datum = datum or GradingDatum.standard()
        self.monoid = monoid or MonoidSpec(0, (), tuple(() for _ in range(self.datum.ncoords)))
        self.bulk = bulk or BulkSpec((), ())
        self.trunc = trunc
        self.name = name
        for g in self.monoid.generators:
            if self.datum.parity_of(self.monoid.degree_coords(g)):
                raise RingError("monoid generators must have even degree")
        for g in self.bulk.degrees:
            if g.datum != self.datum:
                raise RingError("bulk degree in a different grading datum")
        self._nbulk = len(self.bulk.names)
        self._bulk_par = tuple(g.parity for g in self.bulk.degrees)
        self._indep = self._generators_independent()
        self._weight_cache: dict[tuple[int, ...], int | None] = {(0,) * self.monoid.rank: 0}
        self.one_key = ((0,) * self.monoid.rank, (0,) * self._nbulk)

    # -- constructors -----------------------------------------------------
    @classmethod
    def integers(cls, datum: GradingDatum | None = None) -> "CoefficientRing":
        return cls(datum, name="Z")

    @classmethod
    def polynomial(cls, ngens: int = 1, trunc: int = 6, datum: GradingDatum | None = None) -> "CoefficientRing":
        """``Z[r_1..r_k]`` in degree 0, truncated at total degree ``trunc``."""
        datum = datum or GradingDatum.standard()
        gens = tuple(tuple(int(i == j) for j in range(ngens)) for i in range(ngens))
        grading = tuple((0,) * ngens for _ in range(datum.ncoords))
        return cls(datum, MonoidSpec(ngens, gens, grading), trunc=trunc, name=f"Z[r1..r{ngens}]")

    @classmethod
    def bulk_polynomial(
        cls,
        names: Sequence[str],
        degrees: Sequence[int] | None = None,
        differential: Sequence[Sequence[int]] = (),
        trunc: int = 6,
        datum: GradingDatum | None = None,
        monoid: MonoidSpec | None = None,
    ) -> "CoefficientRing":
        datum = datum or GradingDatum.standard()
        degs = tuple(datum.integer(d) for d in (degrees or [0] * len(names)))
        return cls(datum, monoid, BulkSpec(tuple(names), degs, tuple(tuple(r) for r in differential)), trunc)

    # -- structure ----------------------------------------------------------
    def _generators_independent(self) -> bool:
        gens = self.monoid.generators
        if not gens:
            return True
        from .linalg import invariant_factors

        return len(invariant_factors([list(g) for g in gens], self.monoid.rank)) == len(gens)

    def ne_weight(self, u: tuple[int, ...]) -> int | None:
        """Largest number of generators summing to ``u`` (``None`` if not in the monoid)."""
        if u in self._weight_cache:
            return self._weight_cache[u]
        best = None
        for g in self.monoid.generators:
            v = tuple(a - b for a, b in zip(u, g))
            if any(x < 0 for x in v) and all(x >= 0 for x in g):
                continue
            if sum(abs(x) for x in v) > sum(abs(x) for x in u) + 64:
                continue
            w = self.ne_weight(v) if self._plausible(v) else None
            if w is not None and (best is None or w + 1 > best):
                best = w + 1
        self._weight_cache[u] = best
        return best

    def _plausible(self, v):
        # every generator has nonnegative entries in the common cases; otherwise bound the search
        return all(x >= 0 for x in v) or len(self._weight_cache) < 10000

    def weight(self, key) -> int:
        u, k = key
        w = self.ne_weight(u)
        if w is None:
            raise RingError(f"r^{u} is not in the monoid")
        return w + sum(k)

    def key_parity(self, key) -> int:
        return sum(a * p for a, p in zip(key[1], self._bulk_par)) & 1

    def key_degree(self, key) -> Degree:
        u, k = key
        g = Degree(self.datum, self.datum._reduce(self.monoid.degree_coords(u))) if self.monoid.rank else self.datum.zero
        for a, d in zip(k, self.bulk.degrees):
            if a:
                g = g + d * a
        return g

    def keeps(self, key) -> bool:
        return self.trunc is None or self.weight(key) < self.trunc

    @property
    def trivially_filtered(self) -> bool:
        return not self.monoid.generators and not self._nbulk

    def monomials(self, max_weight: int | None = None) -> list:
        """Monomial keys of weight ``< max_weight`` (default: the truncation order)."""
        top = max_weight if max_weight is not None else self.trunc
        if top is None:
            raise RingError("monomial enumeration needs a weight bound")
        nes = {(0,) * self.monoid.rank}
        frontier = set(nes)
        for _ in range(top - 1):
            frontier = {tuple(a + b for a, b in zip(u, g)) for u in frontier for g in self.monoid.generators}
            nes |= frontier
        out = []
        for u in sorted(nes):
            for dp in _compositions_below(top, self._nbulk):
                if any(a > 1 and p for a, p in zip(dp, self._bulk_par)):
                    continue
                key = (u, dp)
                if self.weight(key) < top:
                    out.append(key)
        return sorted(set(out), key=lambda k: (self.weight(k), k))

    # -- elements -------------------------------------------------------------
    def element(self, terms: Mapping | None = None) -> "RingElement":
        return RingElement(self, dict(terms or {}))

    def scalar(self, c: Number) -> "RingElement":
        c = _num(c)
        return RingElement(self, {self.one_key: c} if c else {})

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, {})

    @property
    def one(self) -> "RingElement":
        return self.scalar(1)

    def ne(self, j: int, power: int = 1) -> "RingElement":
        """``r^{u_j}`` raised to ``power`` (``j`` counts from 1)."""
        u = tuple(power * a for a in self.monoid.generators[j - 1])
        return self.element({(u, (0,) * self._nbulk): 1}).truncated()

    def monomial(self, u: Sequence[int] | None = None, dp: Sequence[int] | None = None, coeff: Number = 1):
        u = tuple(u or (0,) * self.monoid.rank)
        dp = tuple(dp or (0,) * self._nbulk)
        if any(a > 1 and p for a, p in zip(dp, self._bulk_par)):
            return self.zero
        return self.element({(u, dp): coeff}).truncated()

    def bulk_var(self, i: int, power: int = 1) -> "RingElement":
        """``x_i^[power]`` (``i`` counts from 1)."""
        dp = [0] * self._nbulk
        dp[i - 1] = power
        return self.monomial(None, dp)

    def parse(self, text: str) -> "RingElement":
        return parse_ring_literal(self, text)

    def mul_keys(self, a, b) -> tuple[tuple, Number] | None:
        """Product of two monomials: the resulting key and integer factor, or ``None``."""
        (u1, k1), (u2, k2) = a, b
        factor = 1
        par = self._bulk_par
        sign = 0
        # bring x-part of b past the later x-variables of a
        later = 0
        for i in range(self._nbulk - 1, -1, -1):
            if k2[i] and par[i]:
                sign ^= later
            if k1[i] and par[i]:
                later ^= 1
        kk = []
        for i in range(self._nbulk):
            s = k1[i] + k2[i]
            if par[i] and s > 1:
                return None
            if k1[i] and k2[i]:
                factor *= math.comb(s, k1[i])
            kk.append(s)
        u = tuple(x + y for x, y in zip(u1, u2))
        return (u, tuple(kk)), (-factor if sign else factor)

    def __repr__(self):
        return f"CoefficientRing({self.name or 'R'}, trunc={self.trunc})"

    def same_as(self, other: "CoefficientRing") -> bool:
        return self is other or (
            self.datum == other.datum
            and self.monoid == other.monoid
            and self.bulk == other.bulk
            and self.trunc == other.trunc
        )

    # -- differential ----------------------------------------------------------
    def d_key(self, key) -> "RingElement":
        u, k = key
        out = self.zero
        d = self.bulk.differential
        passed = 0
        for i in range(self._nbulk):
            if k[i]:
                pre = list(k[:i]) + [0] * (self._nbulk - i)
                post = [0] * self._nbulk
                post[i] = k[i] - 1
                for j in range(i + 1, self._nbulk):
                    post[j] = k[j]
                dx = self.element({((0,) * self.monoid.rank, tuple(int(t == j) for t in range(self._nbulk))): d[j][i]
                                   for j in range(self._nbulk) if d[j][i]})
                if dx:
                    term = self.element({(u, tuple(pre)): 1}) * dx * self.element({((0,) * self.monoid.rank, tuple(post)): 1})
                    out = out + (term if not passed else -term)
            if k[i] * self._bulk_par[i] % 2:
                passed ^= 1
        return out


class RingElement:
    """Finitely supported map from monomial keys to integer or rational coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoefficientRing, terms: dict):
        self.ring = ring
        self.terms = {k: _num(v) for k, v in terms.items() if v}

    # -- basic protocol
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring is not self.ring and not self.ring.same_as(other.ring):
                raise RingError("ring elements from different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        raise TypeError(f"cannot combine ring element with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            nv = t.get(k, 0) + v
            if nv:
                t[k] = nv
            else:
                t.pop(k, None)
        return RingElement(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RingElement(self.ring, {k: v * other for k, v in self.terms.items()}) if other else self.ring.zero
        other = self._coerce(other)
        ring = self.ring
        if not self.terms or not other.terms:
            return ring.zero
        t: dict = {}
        one = ring.one_key
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                if k1 == one:
                    key, f = k2, 1
                elif k2 == one:
                    key, f = k1, 1
                else:
                    r = ring.mul_keys(k1, k2)
                    if r is None:
                        continue
                    key, f = r
                    if not ring.keeps(key):
                        continue
                nv = t.get(key, 0) + f * v1 * v2
                if nv:
                    t[key] = nv
                else:
                    t.pop(key, None)
        return RingElement(ring, t)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return self._coerce(other) * self

    def __pow__(self, n: int):
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    # -- structure
    def truncated(self) -> "RingElement":
        return RingElement(self.ring, {k: v for k, v in self.terms.items() if self.ring.keeps(k)})

    def filtration_level(self) -> float | int:
        if not self.terms:
            return INF
        return min(self.ring.weight(k) for k in self.terms)

    def parity_parts(self) -> tuple["RingElement", "RingElement"]:
        ev, od = {}, {}
        for k, v in self.terms.items():
            (od if self.ring.key_parity(k) else ev)[k] = v
        return RingElement(self.ring, ev), RingElement(self.ring, od)

    @property
    def is_even(self) -> bool:
        return all(not self.ring.key_parity(k) for k in self.terms)

    def degrees(self) -> set[Degree]:
        return {self.ring.key_degree(k) for k in self.terms}

    def homogeneous_degree(self) -> Degree | None:
        ds = self.degrees()
        if len(ds) > 1:
            raise RingError("element is not homogeneous")
        return next(iter(ds), None)

    def d(self) -> "RingElement":
        out = self.ring.zero
        for k, v in self.terms.items():
            if any(k[1]):
                out = out + self.ring.d_key(k) * v
        return out

    def constant_term(self) -> Number:
        return self.terms.get(self.ring.one_key, 0)

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self.terms.values())

    def is_scalar(self) -> bool:
        return all(k == self.ring.one_key for k in self.terms)

    def weight_part(self, w: int) -> "RingElement":
        return RingElement(self.ring, {k: v for k, v in self.terms.items() if self.ring.weight(k) == w})

    def __repr__(self):
        return format_ring_element(self)


# ---------------------------------------------------------------------------
# literals


def _format_key(ring: CoefficientRing, key) -> str:
    u, k = key
    parts = []
    if any(u):
        gens = ring.monoid.generators
        if ring._indep and gens:
            coeffs = _decompose(ring, u)
            for j, a in enumerate(coeffs, 1):
                if a:
                    parts.append(f"r{j}" + (f"^{a}" if a > 1 else ""))
        else:
            parts.append("r" + str(list(u)))
    for i, a in enumerate(k, 1):
        if a:
            parts.append(f"x{i}" + (f"^[{a}]" if a > 1 else ""))
    return "*".join(parts)


def _decompose(ring: CoefficientRing, u) -> list[int]:
    from fractions import Fraction as F

    gens = ring.monoid.generators
    # least squares not needed: solve by elimination on the independent generators
    m = len(gens)
    a = [[F(gens[j][i]) for j in range(m)] + [F(u[i])] for i in range(ring.monoid.rank)]
    piv_rows = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_rows.append((r, c))
        r += 1
    sol = [0] * m
    for row, c in piv_rows:
        sol[c] = int(a[row][m])
    return sol


def format_ring_element(x: RingElement) -> str:
    if not x.terms:
        return "0"
    ring = x.ring
    items = sorted(x.terms.items(), key=lambda kv: (ring.weight(kv[0]), kv[0]))
    out = []
    for key, c in items:
        mono = _format_key(ring, key)
        if not mono:
            s = str(c)
        elif c == 1:
            s = mono
        elif c == -1:
            s = "-" + mono
        else:
            s = f"{c}*{mono}" if not isinstance(c, Fraction) else f"({c})*{mono}"
        out.append(s)
    text = " + ".join(out)
    return text.replace("+ -", "- ")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<r>r(?P<rj>\d+)(?:\^(?P<rp>\d+))?)"
                    r"|(?P<x>x(?P<xi>\d+)(?:\^\[(?P<xk>\d+)\])?)|(?P<op>[*+\-()]))")


def parse_ring_literal(ring: CoefficientRing, text: str) -> RingElement:
    """Parse ``2*r1*x1^[3] - x2 + 5``; raises :class:`RingError` with the column on failure."""
    pos = 0
    tokens = []
    s = text.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise RingError(f"unexpected character at column {pos + 1} in {text!r}")
        tokens.append((m, pos + 1))
        pos = m.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
    idx = 0

    def peek():
        return tokens[idx][0] if idx < len(tokens) else None

    def factor():
        nonlocal idx
        m = peek()
        if m is None:
            raise RingError(f"unexpected end of {text!r}")
        col = tokens[idx][1]
        idx += 1
        if m.group("num"):
            return ring.scalar(Fraction(m.group("num")))
        if m.group("r"):
            j = int(m.group("rj"))
            if not 1 <= j <= len(ring.monoid.generators):
                raise RingError(f"no generator r{j} (column {col})")
            return ring.ne(j, int(m.group("rp") or 1))
        if m.group("x"):
            i = int(m.group("xi"))
            if not 1 <= i <= ring._nbulk:
                raise RingError(f"no bulk variable x{i} (column {col})")
            return ring.bulk_var(i, int(m.group("xk") or 1))
        if m.group("op") == "(":
            v = expr()
            if peek() is None or peek().group("op") != ")":
                raise RingError(f"missing ')' in {text!r}")
            idx += 1
            return v
        if m.group("op") == "-":
            return -factor()
        raise RingError(f"unexpected {m.group(0).strip()!r} at column {col}")

    def term():
        nonlocal idx
        v = factor()
        while peek() is not None and peek().group("op") == "*":
            idx += 1
            v = v * factor()
        return v

    def expr():
        nonlocal idx
        v = term()
        while peek() is not None and peek().group("op") in ("+", "-"):
            op = peek().group("op")
            idx += 1
            t = term()
            v = v + t if op == "+" else v - t
        return v

    if not tokens:
        raise RingError("empty ring literal")
    val = expr()
    if idx != len(tokens):
        raise RingError(f"trailing input at column {tokens[idx][1]} in {text!r}")
    return val


# ---------------------------------------------------------------------------
# Novikov specialization


@dataclass(frozen=True)
class NovikovElement:
    """Finite sum of ``c * T^e`` with rational exponents ``e``, truncated below ``cutoff``."""

    terms: tuple[tuple[Fraction, Number], ...]
    cutoff: Fraction | None = None

    @classmethod
    def from_dict(cls, d: Mapping[Fraction, Number], cutoff=None) -> "NovikovElement":
        items = sorted((Fraction(e), _num(c)) for e, c in d.items() if c and (cutoff is None or e < cutoff))
        return cls(tuple(items), cutoff)

    def as_dict(self) -> dict[Fraction, Number]:
        return dict(self.terms)

    def __add__(self, other: "NovikovElement") -> "NovikovElement":
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return NovikovElement.from_dict(d, self.cutoff)

    def __mul__(self, other: "NovikovElement") -> "NovikovElement":
        d: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return NovikovElement.from_dict(d, self.cutoff)

    def valuation(self):
        return self.terms[0][0] if self.terms else INF

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*T^{e}" if e else f"{c}" for e, c in self.terms)


def novikov_specialize(a: RingElement, kappa: Sequence[Number], bulk_images: Sequence[Number] | None = None) -> NovikovElement:
    """``r^u -> T^{kappa(u)}``; bulk variables go to zero unless ``bulk_images`` are given.

    ``kappa`` is a rational functional on the ambient lattice; it must be
    positive on every monoid generator.  Terms are kept below exponent
    ``trunc * A`` where ``A`` is the smallest value of ``kappa`` on a generator.
    """
    ring = a.ring
    kap = [Fraction(k) for k in kappa]
    if len(kap) != ring.monoid.rank:
        raise RingError("kappa has the wrong length")
    vals = [sum(k * x for k, x in zip(kap, g)) for g in ring.monoid.generators]
    if any(v <= 0 for v in vals):
        raise RingError("kappa must be positive on every monoid generator")
    step = min(vals) if vals else Fraction(1)
    cutoff = step * ring.trunc if ring.trunc is not None else None
    imgs = list(bulk_images) if bulk_images is not None else [0] * ring._nbulk
    d: dict = {}
    for (u, k), c in a.terms.items():
        coeff = Fraction(c)
        for i, ki in enumerate(k):
            if ki:
                coeff *= Fraction(imgs[i]) ** ki / math.factorial(ki)
        if coeff:
            e = sum(x * y for x, y in zip(kap, u))
            d[e] = d.get(e, 0) + coeff
    return NovikovElement.from_dict(d, cutoff)


# ---------------------------------------------------------------------------
# associated graded


class AssociatedGraded:
    """``Gr R`` with grading ``G + Z`` (the new summand is the weight) and no filtration."""

    def __init__(self, ring: CoefficientRing):
        self.ring = ring
        self.datum = ring.datum.extend_by_z()

    def piece_basis(self, w: int) -> list[tuple]:
        """Monomial keys of weight exactly ``w``."""
        ring = self.ring
        keys = set()
        gens = ring.monoid.generators
        for a in range(w + 1):
            us = {tuple([0] * ring.monoid.rank)}
            for _ in range(a):
                us = {tuple(x + y for x, y in zip(u, g)) for u in us for g in gens}
            for u in us:
                if ring.ne_weight(u) != a:
                    continue
                for k in _compositions(w - a, ring._nbulk):
                    if any(ki > 1 and p for ki, p in zip(k, ring._bulk_par)):
                        continue
                    keys.add((u, k))
        return sorted(keys)

    def degree(self, key) -> Degree:
        g = self.ring.key_degree(key)
        f = self.ring.datum.free_rank
        coords = g.coords[:f] + (self.ring.weight(key),) + g.coords[f:]
        return Degree(self.datum, coords)

    def mul(self, a: RingElement, b: RingElement) -> RingElement:
        """Product projected to the homogeneous weight pieces."""
        ring = self.ring
        t: dict = {}
        for k1, v1 in a.terms.items():
            for k2, v2 in b.terms.items():
                r = ring.mul_keys(k1, k2)
                if r is None:
                    continue
                key, f = r
                if ring.weight(key) != ring.weight(k1) + ring.weight(k2):
                    continue
                t[key] = t.get(key, 0) + f * v1 * v2
        return RingElement(ring, t)

    def d(self, a: RingElement) -> RingElement:
        return a.d()


def associated_graded(ring: CoefficientRing) -> AssociatedGraded:
    return AssociatedGraded(ring)


def _compositions_below(top: int, parts: int):
    """All tuples of ``parts`` nonnegative integers with sum ``< top``."""
    if parts == 0:
        yield ()
        return
    for first in range(top):
        for rest in _compositions_below(top - first, parts - 1):
            yield (first,) + rest


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# morphisms


@dataclass
class CoeffRingMorphism:
    """Ring map given by images of monoid generators and bulk variables."""

    source: CoefficientRing
    target: CoefficientRing
    grading: GradingMorphism
    ne_images: tuple[RingElement, ...]
    bulk_images: tuple[RingElement, ...] = field(default=())

    def __post_init__(self):
        if len(self.ne_images) != len(self.source.monoid.generators):
            raise RingError("one image per monoid generator is required")
        if not self.bulk_images:
            self.bulk_images = tuple(self.target.zero for _ in self.source.bulk.names)
        if len(self.bulk_images) != self.source._nbulk:
            raise RingError("one image per bulk variable is required")
        if not self.source._indep:
            raise RingError("morphisms need linearly independent monoid generators")

    def __call__(self, a: RingElement) -> RingElement:
        out = self.target.zero
        for (u, k), c in a.terms.items():
            term = self.target.scalar(c)
            for j, e in enumerate(_decompose(self.source, u)):
                if e:
                    term = term * self.ne_images[j] ** e
            for i, ki in enumerate(k):
                if ki:
                    term = term * _divided_power(self.bulk_images[i], ki)
            out = out + term
        return out

    def check(self, samples: Iterable[RingElement] = ()) -> list[str]:
        """Return a list of failures (empty when the morphism is valid)."""
        errs = []
        gens = [self.source.ne(j + 1) for j in range(len(self.source.monoid.generators))]
        gens += [self.source.bulk_var(i + 1) for i in range(self.source._nbulk)]
        for g in list(gens) + list(samples):
            img = self(g)
            if img and img.filtration_level() < g.filtration_level():
                errs.append(f"not filtered on {g}")
            for deg in g.degrees():
                want = self.grading(deg)
                if img and any(x != want for x in img.degrees()):
                    errs.append(f"degree mismatch on {g}")
            if self(g.d()) != img.d():
                errs.append(f"does not commute with d on {g}")
        return errs


def _divided_power(y: RingElement, k: int) -> RingElement:
    p = y ** k
    f = math.factorial(k)
    return RingElement(y.ring, {key: Fraction(v, f) for key, v in p.terms.items()})
