"""Free finite-rank graded modules with differentials, and their homology.

Vectors are plain dicts ``{basis_label: RingElement}``.  Coefficients sit on
the left of basis elements, so ``d(r * e) = d_R(r) * e + (-1)^|r| r * d(e)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .coeff import CoefficientRing, RingElement
from .graded import Degree
from .linalg import SparseSystem, invariant_factors, rank_q

__all__ = [
    "ModuleError",
    "GradedModule",
    "DgModule",
    "ChainMap",
    "vec_add",
    "vec_scale",
    "vec_sub",
    "vec_neg",
    "vec_is_zero",
    "tensor",
    "shift",
    "direct_sum",
    "hom_complex",
    "homology",
    "Homology",
    "cohomology_basis",
]

Vector = dict


class ModuleError(ValueError):
    pass


def vec_add(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        if k in out:
            s = out[k] + v
            if s:
                out[k] = s
            else:
                del out[k]
        elif v:
            out[k] = v
    return out


def vec_neg(a: Mapping) -> dict:
    return {k: -v for k, v in a.items()}


def vec_sub(a: Mapping, b: Mapping) -> dict:
    return vec_add(a, vec_neg(b))


def vec_scale(r, a: Mapping) -> dict:
    """``r * a`` for a ring element or integer ``r`` (coefficient multiplies from the left)."""
    out = {}
    for k, v in a.items():
        w = r * v
        if w:
            out[k] = w
    return out


def vec_is_zero(a: Mapping) -> bool:
    return not any(a.values())


@dataclass
class GradedModule:
    ring: CoefficientRing
    basis: list
    degrees: dict

    def __post_init__(self):
        if set(self.basis) != set(self.degrees) or len(set(self.basis)) != len(self.basis):
            raise ModuleError("basis labels and degrees disagree")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def degree(self, label) -> Degree:
        return self.degrees[label]

    def basis_in_degree(self, g: Degree) -> list:
        return [b for b in self.basis if self.degrees[b] == g]

    def vector(self, coeffs: Mapping) -> dict:
        out = {}
        for k, v in coeffs.items():
            if k not in self.degrees:
                raise ModuleError(f"unknown basis element {k!r}")
            v = v if isinstance(v, RingElement) else self.ring.scalar(v)
            if v:
                out[k] = v
        return out

    def vector_degree(self, vec: Mapping) -> set:
        return {self.ring.key_degree(t) + self.degrees[k] for k, v in vec.items() for t in v.terms}


@dataclass
class DgModule:
    """Graded module with a differential given on basis elements."""

    module: GradedModule
    d: dict = field(default_factory=dict)

    def __post_init__(self):
        one = self.module.ring.datum.integer(1)
        for b, img in self.d.items():
            for k in img:
                if k not in self.module.degrees:
                    raise ModuleError(f"d({b!r}) has unknown term {k!r}")
            for g in self.module.vector_degree(img):
                if g != self.module.degrees[b] + one:
                    raise ModuleError(f"d({b!r}) is not of degree one")

    @classmethod
    def from_basis(cls, ring: CoefficientRing, degrees: Mapping, d: Mapping | None = None) -> "DgModule":
        mod = GradedModule(ring, list(degrees), dict(degrees))
        dd = {k: mod.vector(v) for k, v in (d or {}).items()}
        return cls(mod, dd)

    @property
    def ring(self) -> CoefficientRing:
        return self.module.ring

    @property
    def basis(self) -> list:
        return self.module.basis

    @property
    def degrees(self) -> dict:
        return self.module.degrees

    def apply_d(self, vec: Mapping) -> dict:
        out: dict = {}
        for k, r in vec.items():
            out = vec_add(out, {k: r.d()})
            img = self.d.get(k)
            if img:
                ev, od = r.parity_parts()
                out = vec_add(out, vec_scale(ev - od, img))
        return out

    def square_residual(self) -> dict:
        """``d(d(e))`` for every basis element with a nonzero result."""
        bad = {}
        for b in self.basis:
            v = self.apply_d(self.apply_d({b: self.ring.one}))
            if not vec_is_zero(v):
                bad[b] = v
        return bad

    def is_scalar(self) -> bool:
        return all(r.is_scalar() for img in self.d.values() for r in img.values())


def tensor(M: DgModule, N: DgModule) -> DgModule:
    """``M (x) N`` with ``d(m n) = dm n + (-1)^|m| m dn`` on basis elements."""
    if not M.ring.same_as(N.ring):
        raise ModuleError("tensor of modules over different rings")
    degs = {(m, n): M.degrees[m] + N.degrees[n] for m in M.basis for n in N.basis}
    d = {}
    for m in M.basis:
        for n in N.basis:
            img: dict = {}
            for mm, r in M.d.get(m, {}).items():
                img = vec_add(img, {(mm, n): r})
            sign = -1 if M.degrees[m].parity else 1
            for nn, r in N.d.get(n, {}).items():
                # r passes m
                ev, od = r.parity_parts()
                img = vec_add(img, {(m, nn): (ev + od * (-1 if M.degrees[m].parity else 1)) * sign})
            if img:
                d[(m, n)] = img
    return DgModule(GradedModule(M.ring, list(degs), degs), d)


def shift(g: Degree, M: DgModule) -> DgModule:
    """``sigma(g) M``: degrees raised by ``g``; ``d`` picks up ``(-1)^g`` from passing ``sigma(g)``."""
    degs = {b: M.degrees[b] + g for b in M.basis}
    sgn = -1 if g.parity else 1
    d = {b: vec_scale(sgn, img) for b, img in M.d.items()}
    return DgModule(GradedModule(M.ring, list(M.basis), degs), d)


def direct_sum(*mods: DgModule) -> DgModule:
    degs = {}
    d = {}
    for i, M in enumerate(mods):
        for b in M.basis:
            degs[(i, b)] = M.degrees[b]
            if b in M.d:
                d[(i, b)] = {(i, k): v for k, v in M.d[b].items()}
    return DgModule(GradedModule(mods[0].ring, list(degs), degs), d)


def hom_complex(M: DgModule, N: DgModule) -> DgModule:
    """Internal hom with basis ``(m, n)`` (the map ``m -> n``) and ``del f = d f - (-1)^|f| f d``."""
    if not M.ring.same_as(N.ring):
        raise ModuleError("hom between modules over different rings")
    degs = {(m, n): N.degrees[n] - M.degrees[m] for m in M.basis for n in N.basis}
    d = {}
    for m in M.basis:
        for n in N.basis:
            fpar = degs[(m, n)].parity
            img: dict = {}
            for nn, r in N.d.get(n, {}).items():
                img = vec_add(img, {(m, nn): r})
            for x in M.basis:
                c = M.d.get(x, {}).get(m)
                if c:
                    ev, od = c.parity_parts()
                    term = ev + od * (-1 if fpar else 1)
                    img = vec_add(img, {(x, n): term * (1 if fpar else -1)})
            if img:
                d[(m, n)] = img
    return DgModule(GradedModule(M.ring, list(degs), degs), d)


@dataclass
class ChainMap:
    """R-linear map given on basis elements; ``degree`` is the map's degree."""

    source: DgModule
    target: DgModule
    images: dict
    degree: Degree

    def __call__(self, vec: Mapping) -> dict:
        out: dict = {}
        par = self.degree.parity
        for k, r in vec.items():
            img = self.images.get(k)
            if img:
                ev, od = r.parity_parts()
                out = vec_add(out, vec_scale(ev + od * (-1 if par else 1), img))
        return out

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self o other``."""
        imgs = {b: self(other.images.get(b, {})) for b in other.source.basis}
        return ChainMap(other.source, self.target, {k: v for k, v in imgs.items() if v}, self.degree + other.degree)

    def boundary(self) -> dict:
        """``del f`` evaluated on each basis element (zero dict entries omitted)."""
        out = {}
        sgn = -1 if self.degree.parity else 1
        for b in self.source.basis:
            one = self.source.ring.one
            v = vec_sub(
                self.target.apply_d(self({b: one})),
                vec_scale(sgn, self(self.source.apply_d({b: one}))),
            )
            if not vec_is_zero(v):
                out[b] = v
        return out

    def is_closed(self) -> bool:
        return not self.boundary()


# ---------------------------------------------------------------------------
# homology


@dataclass
class Homology:
    """Per-degree free rank and torsion invariant factors."""

    ranks: dict
    torsion: dict
    field: str

    def as_rows(self) -> list:
        out = []
        for g in sorted(self.ranks, key=lambda d: d.coords):
            out.append({"degree": g.as_int() if g.as_int() is not None else list(g.coords),
                        "rank": self.ranks[g], "torsion": self.torsion.get(g, [])})
        return out


def _scalar(r: RingElement):
    if not r.is_scalar():
        raise ModuleError("homology needs constant differential entries; specialize first")
    return r.constant_term()


def homology(M: DgModule, degrees: Iterable[Degree] | None = None, field: str = "Z") -> Homology:
    """Ranks (and torsion over ``Z``) of ``H(M)`` in the requested degrees."""
    if M.square_residual():
        raise ModuleError("differential does not square to zero")
    one = M.ring.datum.integer(1)
    wanted = list(degrees) if degrees is not None else sorted(set(M.degrees.values()), key=lambda d: d.coords)
    exact = field.upper() == "Z" and all(
        isinstance(_scalar(r), int) for img in M.d.values() for r in img.values()
    )

    def matrix(g):
        src = M.module.basis_in_degree(g)
        tgt = M.module.basis_in_degree(g + one)
        idx = {t: i for i, t in enumerate(tgt)}
        rows = []
        for s in src:
            row = [0] * len(tgt)
            for k, r in M.d.get(s, {}).items():
                row[idx[k]] = _scalar(r)
            rows.append(row)
        return rows, len(tgt)

    ranks, tors = {}, {}
    for g in wanted:
        dim = len(M.module.basis_in_degree(g))
        out_rows, ncols = matrix(g)
        in_rows, _ = matrix(g - one)
        if exact:
            r_out = len(invariant_factors(out_rows, ncols))
            f_in = invariant_factors(in_rows, dim)
            r_in = len(f_in)
            tors[g] = [f for f in f_in if f > 1]
        else:
            r_out = rank_q({j: v for j, v in enumerate(row) if v} for row in out_rows)
            r_in = rank_q({j: v for j, v in enumerate(row) if v} for row in in_rows)
            tors[g] = []
        ranks[g] = dim - r_out - r_in
    return Homology(ranks, tors, "Z" if exact else "Q")


def cohomology_basis(M: DgModule, g: Degree):
    """Cycle representatives of a basis of ``H^g(M; Q)`` and a coordinate function.

    The coordinate function sends a cycle (vector of scalars) to its
    coordinates in the chosen basis, or raises if the vector is not a cycle.
    """
    one = M.ring.datum.integer(1)
    cells = M.module.basis_in_degree(g)
    prev = M.module.basis_in_degree(g - one)
    # cycles: kernel of d on degree g
    from .linalg import nullspace_q

    eqs: dict = {}
    for c in cells:
        for k, r in M.d.get(c, {}).items():
            eqs.setdefault(k, {})[c] = _scalar(r)
    cycles = nullspace_q(list(eqs.values()), cells)
    boundaries = [{k: Fraction(_scalar(r)) for k, r in M.d.get(p, {}).items()} for p in prev]
    sysm = SparseSystem()
    for b in boundaries:
        sysm.add(b, 0)
    reps = []
    for z in cycles:
        before = sysm.rank
        sysm.add(z, 0)
        if sysm.rank > before:
            reps.append(z)

    def coords(vec: Mapping) -> list:
        v = {k: Fraction(_scalar(r) if isinstance(r, RingElement) else r) for k, r in vec.items()}
        v = {k: x for k, x in v.items() if x}
        dv = {}
        for k, x in v.items():
            for kk, r in M.d.get(k, {}).items():
                dv[kk] = dv.get(kk, 0) + x * _scalar(r)
        if any(dv.values()):
            raise ModuleError("vector is not a cycle")
        # solve v = sum a_i reps_i + sum b_j boundaries_j
        s = SparseSystem()
        keys = set(v)
        for r in reps + boundaries:
            keys |= set(r)
        for k in keys:
            row = {("a", i): r.get(k, 0) for i, r in enumerate(reps)}
            row.update({("b", j): r.get(k, 0) for j, r in enumerate(boundaries)})
            s.add(row, v.get(k, 0))
        if not s.consistent:
            raise ModuleError("cycle not in span; basis computation failed")
        sol = s.solution()
        # representative coordinates are unique since reps are independent modulo boundaries
        return [sol.get(("a", i), Fraction(0)) for i in range(len(reps))]

    return reps, coords
