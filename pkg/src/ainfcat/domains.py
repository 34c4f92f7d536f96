"""Combinatorial domains: mixed-curve topological types, families and orientation torsors.

Moduli spaces are never realized as point sets.  A family records its
topological type and its dimension; one-parameter families defined as
explicit paths also record their two ends.  Codimension-one facets of disc
factors come from ribbon splittings, facets of ``[0, inf]`` intervals from
their two ends.

>>> F = build_family("mu", s=4)
>>> len(disc_facets(F))
5
>>> sigma_degree(build_family("bub", bulk=2))(3)
4
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from importlib import resources
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .graded import GradingDatum, TorsorSymbol, TorsorWord, koszul_reorder_sign, parse_ledger
from .report import Report

__all__ = [
    "DomainError",
    "Affine",
    "Point",
    "Component",
    "Link",
    "TopType",
    "DomainFamily",
    "Facet",
    "Attachment",
    "Add",
    "Bubble",
    "Remove",
    "build_family",
    "disjoint_union",
    "attach",
    "stabilize",
    "sym_action",
    "is_fsym_stable",
    "is_nearly_fsym_stable",
    "sigma_degree",
    "orientation_word",
    "disc_facets",
    "boundary_strata",
    "codim2_pairing",
    "ainfty_terms",
    "ainfty_term_bijection",
    "aut_orientation_sign",
    "lemma_signs",
    "sign_table_ledgers",
    "ledger_params",
    "SIGN_TABLE_ROWS",
]


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Affine:
    """An integer ``const + per_n * n``, used for degrees depending on the dimension ``n``."""

    const: int = 0
    per_n: int = 0

    def __add__(self, other: "Affine") -> "Affine":
        return Affine(self.const + other.const, self.per_n + other.per_n)

    def __sub__(self, other: "Affine") -> "Affine":
        return Affine(self.const - other.const, self.per_n - other.per_n)

    def __neg__(self) -> "Affine":
        return Affine(-self.const, -self.per_n)

    def __call__(self, n: int) -> int:
        return self.const + self.per_n * n

    def __str__(self):
        if not self.per_n:
            return str(self.const)
        k = {1: "", -1: "-"}.get(self.per_n, str(self.per_n))
        if not self.const:
            return f"{k}n"
        return f"{k}n{'+' if self.const > 0 else '-'}{abs(self.const)}"


# ---------------------------------------------------------------------------
# topological types

_EULER = {"disc": 1, "sphere": 2, "annulus": 0}
_CIRCLES = {"disc": 1, "sphere": 0, "annulus": 2}


@dataclass(frozen=True)
class Point:
    """A marked point or a node preimage.

    ``kind`` is ``bulk``, ``stab``, ``boundary`` or ``node``.  Boundary points,
    bulk points and boundary node ends carry a direction.
    """

    label: str
    kind: str
    direction: str | None = None
    symmetric: bool = False
    on_boundary: bool = False


@dataclass(frozen=True)
class Component:
    kind: str
    circles: tuple[tuple[str, ...], ...] = ()
    interior: tuple[str, ...] = ()

    @property
    def euler(self) -> int:
        return _EULER[self.kind]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(x for c in self.circles for x in c) + self.interior

    @property
    def specials(self) -> tuple[int, int]:
        return sum(len(c) for c in self.circles), len(self.interior)

    @property
    def stable(self) -> bool:
        k, m = self.specials
        if self.kind == "disc":
            return k + 2 * m >= 3
        if self.kind == "sphere":
            return m >= 3
        return True

    @property
    def moduli_dim(self) -> int:
        """Real dimension of the moduli of this component (0 for unstable ones)."""
        k, m = self.specials
        if not self.stable:
            return 0
        if self.kind == "disc":
            return k + 2 * m - 3
        if self.kind == "sphere":
            return 2 * m - 6
        return k + 2 * m


@dataclass(frozen=True)
class Link:
    """A boundary node, an interior node, or an interval between two bulk points."""

    a: str
    b: str
    kind: str
    length: str | None = None


_LENGTHS = ("0", "inf", "[0,inf]", "finite")


@dataclass(frozen=True)
class Surface:
    components: tuple[int, ...]
    euler: int
    circles: tuple[tuple[str, ...], ...]

    @property
    def genus(self) -> Fraction:
        return Fraction(2 - self.euler - len(self.circles), 2)

    @property
    def kind(self) -> str:
        return {0: "sphere", 1: "disc", 2: "annulus"}[len(self.circles)]


def _surgery(circles: list[list[str]], out_end: str, in_end: str) -> tuple[str, int]:
    """Smooth a boundary node in place.  Returns ("merge" | "split", index of the circle touched)."""
    ia = next(i for i, c in enumerate(circles) if out_end in c)
    ib = next(i for i, c in enumerate(circles) if in_end in c)
    if ia != ib:
        a, b = circles[ia], circles[ib]
        ja, jb = a.index(out_end), b.index(in_end)
        merged = a[ja + 1:] + a[:ja] + b[jb + 1:] + b[:jb]
        for i in sorted((ia, ib), reverse=True):
            del circles[i]
        circles.append(merged)
        return "merge", len(circles) - 1
    c = circles[ia]
    j = c.index(out_end)
    c = c[j:] + c[:j]
    k = c.index(in_end)
    plus, minus = c[1:k], c[k + 1:]
    del circles[ia]
    circles.extend([minus, plus])
    return "split", len(circles) - 2


@dataclass(frozen=True)
class TopType:
    components: tuple[Component, ...]
    points: tuple[Point, ...]
    links: tuple[Link, ...] = ()

    def __post_init__(self):
        labels = [x for comp in self.components for x in comp.labels]
        if len(set(labels)) != len(labels):
            raise DomainError("a label appears twice")
        pts = {p.label: p for p in self.points}
        if set(pts) != set(labels) or len(pts) != len(self.points):
            raise DomainError("points and component labels disagree")
        for comp in self.components:
            if comp.kind not in _EULER:
                raise DomainError(f"component kind {comp.kind!r} is not a disc, sphere or annulus")
            if len(comp.circles) != _CIRCLES[comp.kind]:
                raise DomainError(f"a {comp.kind} has {_CIRCLES[comp.kind]} boundary circles")
            for x in (y for c in comp.circles for y in c):
                if not pts[x].on_boundary or pts[x].kind not in ("boundary", "node"):
                    raise DomainError(f"{x} sits on a boundary circle but is not a boundary point")
            for x in comp.interior:
                if pts[x].on_boundary or pts[x].kind == "boundary":
                    raise DomainError(f"{x} sits in the interior but is a boundary point")
        for p in self.points:
            needs = p.kind in ("bulk", "boundary") or (p.kind == "node" and p.on_boundary)
            if needs and p.direction not in ("in", "out"):
                raise DomainError(f"{p.label} needs a direction")
            if not needs and p.direction is not None:
                raise DomainError(f"{p.label} takes no direction")
            if p.symmetric and p.kind != "stab":
                raise DomainError(f"only stabilizing points can be symmetric, not {p.label}")
        used: set[str] = set()
        for ln in self.links:
            for x in (ln.a, ln.b):
                if x not in pts:
                    raise DomainError(f"link end {x} is not a point")
                if x in used:
                    raise DomainError(f"{x} is used by two links")
                used.add(x)
            pa, pb = pts[ln.a], pts[ln.b]
            if ln.kind == "boundary":
                if not (pa.on_boundary and pb.on_boundary):
                    raise DomainError("boundary nodes join boundary points")
                if {pa.direction, pb.direction} != {"in", "out"}:
                    raise DomainError("a boundary node needs one incoming and one outgoing point")
            elif ln.kind == "interior":
                if pa.kind != "node" or pb.kind != "node" or pa.on_boundary or pb.on_boundary:
                    raise DomainError("interior nodes join interior node points")
            elif ln.kind == "interval":
                if pa.kind != "bulk" or pb.kind != "bulk":
                    raise DomainError("intervals join bulk points")
                if ln.length not in _LENGTHS:
                    raise DomainError(f"unknown length tag {ln.length!r}")
            else:
                raise DomainError(f"unknown link kind {ln.kind!r}")
        for x, p in pts.items():
            if p.kind == "node" and x not in used:
                raise DomainError(f"node point {x} is not attached")
        for s in self.smoothing()[0]:
            if s.genus != 0 or len(s.circles) > 2:
                raise DomainError("smoothing the nodes does not give discs, spheres and annuli")

    @property
    def point_map(self) -> dict[str, Point]:
        return {p.label: p for p in self.points}

    def component_of(self, label: str) -> int:
        for i, comp in enumerate(self.components):
            if label in comp.labels:
                return i
        raise DomainError(f"no point {label}")

    @property
    def linked(self) -> set[str]:
        return {x for ln in self.links for x in (ln.a, ln.b)}

    def free(self, kind: str, direction: str | None = None) -> list[str]:
        used = self.linked
        return [
            p.label for p in self.points
            if p.kind == kind and p.label not in used and (direction is None or p.direction == direction)
        ]

    def smoothing(self) -> tuple[list[Surface], list[str]]:
        """Contract intervals and smooth all nodes.

        Returns the connected surfaces and the list of surgery kinds performed at
        boundary nodes, in link order.
        """
        parent = list(range(len(self.components)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        where = {x: i for i, comp in enumerate(self.components) for x in comp.labels}
        for ln in self.links:
            parent[find(where[ln.a])] = find(where[ln.b])
        circles = [list(c) for comp in self.components for c in comp.circles]
        owner = [i for i, comp in enumerate(self.components) for _ in comp.circles]
        pts = self.point_map
        kinds = []
        for ln in self.links:
            if ln.kind != "boundary":
                continue
            o, i = (ln.a, ln.b) if pts[ln.a].direction == "out" else (ln.b, ln.a)
            kind, _ = _surgery_owned(circles, owner, o, i)
            kinds.append(kind)
        groups: dict[int, list[int]] = {}
        for i in range(len(self.components)):
            groups.setdefault(find(i), []).append(i)
        out = []
        for root, members in sorted(groups.items()):
            chi = sum(self.components[i].euler for i in members)
            for ln in self.links:
                if find(where[ln.a]) == root:
                    chi -= 1 if ln.kind == "boundary" else 2
            cs = tuple(tuple(c) for c, o in zip(circles, owner) if find(o) == root)
            out.append(Surface(tuple(members), chi, cs))
        return out, kinds


def _surgery_owned(circles, owner, o, i):
    io = next(k for k, c in enumerate(circles) if o in c)
    ii = next(k for k, c in enumerate(circles) if i in c)
    own = owner[io]
    kind, _ = _surgery(circles, o, i)
    for k in sorted({io, ii}, reverse=True):
        del owner[k]
    owner.extend([own] * (1 if kind == "merge" else 2))
    return kind, own


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class DomainFamily:
    """A family of domains: a topological type, the family's dimension and its history.

    ``ends`` is set for one-parameter families given as explicit paths: the
    facet at the parameter end whose boundary orientation agrees with the
    chosen orientation comes first.  ``end_names`` names the two ends of each
    ``[0, inf]`` interval.
    """

    name: str
    top: TopType
    dim: int
    ends: tuple = ()
    end_names: tuple = ()
    path: bool = False
    params: tuple = ()
    history: tuple[str, ...] = ()

    @property
    def kind(self) -> str:
        return self.name.split("(", 1)[0]


@dataclass(frozen=True)
class Facet:
    name: str
    sign: int
    kind: str
    family: DomainFamily | None = None
    data: tuple = ()


def _disc(circle: Sequence[str], interior: Sequence[str] = ()) -> Component:
    return Component("disc", (tuple(circle),), tuple(interior))


def _pt(label, kind, direction=None, symmetric=False, on_boundary=None):
    if on_boundary is None:
        on_boundary = kind == "boundary"
    return Point(label, kind, direction, symmetric, on_boundary)


def _interior_points(bulk_in: int, stab: int, start: int = 1) -> list[Point]:
    pts = [_pt(f"b{i}", "bulk", "in") for i in range(start, start + bulk_in)]
    pts += [_pt(f"s{i}", "stab", symmetric=True) for i in range(1, stab + 1)]
    return pts


def _need(cond: bool, msg: str):
    if not cond:
        raise DomainError(msg)


def _bub(bulk: int, stab: int, name: str) -> DomainFamily:
    _need(bulk >= 0 and stab >= 0, "negative counts")
    _need(bulk + stab >= 2, "a sphere bubble needs bulk + stab >= 2")
    pts = [_pt("b0", "bulk", "out")] + _interior_points(bulk, stab)
    comp = Component("sphere", (), tuple(p.label for p in pts))
    return DomainFamily(name, TopType((comp,), tuple(pts)), 2 * (bulk + stab - 2), params=(bulk, stab))


def _disc_family(name, circle_pts, interior_pts, params) -> DomainFamily:
    comp = _disc([p.label for p in circle_pts], [p.label for p in interior_pts])
    _need(comp.stable, f"{name} is unstable for these parameters")
    top = TopType((comp,), tuple(circle_pts) + tuple(interior_pts))
    return DomainFamily(name, top, comp.moduli_dim, params=params)


def _bd(label, direction):
    return _pt(label, "boundary", direction)


def _runs(prefix: str, count: int) -> list[Point]:
    return [_bd(f"{prefix}{i}", "in") for i in range(1, count + 1)]


def build_family(kind: str, s=0, bulk: int = 0, stab: int = 0) -> DomainFamily:
    """Build one of the named families.

    ``bub``, ``mu``, ``star``, ``CO``, ``2CO``, ``OC`` and ``CY`` take marked
    point counts (``s`` is a tuple for ``2CO`` and ``CY``).  The homotopy
    families ``H12_CO``, ``H1_CO``, ``H2_CO``, ``H_2CO``, ``H12_OC``,
    ``H1_OC``, ``H2_OC``, ``H12_CY``, ``H1_CY`` and ``H2_CY`` are built
    without extra points; use :func:`stabilize` to add them.
    """
    name = f"{kind}({s},{bulk},{stab})"
    if kind == "bub":
        return _bub(bulk, stab, f"bub({bulk},{stab})")
    if kind == "star":
        return replace(_bub(bulk + 2, stab, name), name=f"star({bulk},{stab})", params=(bulk, stab))
    if kind == "mu":
        _need(s >= 0, "negative s")
        circle = [_bd("p0", "out")] + [_bd(f"p{i}", "in") for i in range(1, s + 1)]
        return _disc_family(f"mu({s},{bulk},{stab})", circle, _interior_points(bulk, stab), (s, bulk, stab))
    if kind == "CO":
        circle = [_bd("p0", "out")] + [_bd(f"p{i}", "in") for i in range(1, s + 1)]
        return _disc_family(name, circle, _interior_points(bulk + 1, stab), (s, bulk, stab))
    if kind == "OC":
        circle = [_bd("p0", "in")] + [_bd(f"p{i}", "in") for i in range(1, s + 1)]
        inner = [_pt("b1", "bulk", "out")] + _interior_points(bulk, stab, start=2)
        return _disc_family(name, circle, inner, (s, bulk, stab))
    if kind == "2CO":
        s1, s2 = s if isinstance(s, tuple) else (s, 0)
        circle = [_bd("p0", "out")] + _runs("a", s1) + [_bd("p1", "in")] + _runs("c", s2)
        fam = _disc_family(name, circle, _interior_points(bulk + 1, stab), ((s1, s2), bulk, stab))
        # the first interior point is pinned to the geodesic from p1 to p0
        return replace(fam, dim=fam.dim - 1, path=True)
    if kind == "CY":
        s1, s2, s3 = s if isinstance(s, tuple) else (0, 0, s)
        circle = ([_bd("p1", "in")] + _runs("u", s2) + [_bd("p2", "out")] + _runs("v", s3)
                  + [_bd("p3", "out")] + _runs("w", s1))
        return _disc_family(name, circle, _interior_points(bulk, stab), ((s1, s2, s3), bulk, stab))
    if kind.startswith("H"):
        _need(s in (0, (0, 0), (0, 0, 0)) and bulk == 0 and stab == 0,
              "homotopy families are built bare; stabilize them to add points")
        return _homotopy_family(kind)
    raise DomainError(f"unknown family {kind!r}")


def disjoint_union(families: Sequence[DomainFamily], prefixes: Sequence[str], name: str | None = None) -> DomainFamily:
    """Disjoint union; labels are prefixed to keep them apart."""
    comps, pts, links = [], [], []
    for fam, pre in zip(families, prefixes, strict=True):
        ren = {p.label: f"{pre}.{p.label}" for p in fam.top.points}
        for c in fam.top.components:
            comps.append(Component(c.kind, tuple(tuple(ren[x] for x in cc) for cc in c.circles),
                                   tuple(ren[x] for x in c.interior)))
        pts += [replace(p, label=ren[p.label]) for p in fam.top.points]
        links += [replace(ln, a=ren[ln.a], b=ren[ln.b]) for ln in fam.top.links]
    nm = name or " + ".join(f.name for f in families)
    return DomainFamily(nm, TopType(tuple(comps), tuple(pts), tuple(links)), sum(f.dim for f in families),
                        history=("union",))


@dataclass(frozen=True)
class Attachment:
    """Result of :func:`attach` with the data of the attachment rule.

    ``factor`` is the degree of the extra torsor ``sigma(2k + 2n l) (x) sigma(1)^|G|``
    and ``splits`` the number of boundary attachments that split a boundary
    circle, each contributing the declared sign ``(-1)^{n(n+1)/2}``.
    """

    family: DomainFamily
    k: int
    l: int
    g: int
    merges: int
    splits: int

    @property
    def factor(self) -> Affine:
        return Affine(2 * self.k + self.g, 2 * self.l)

    def sign(self, n: int) -> int:
        return -1 if (self.splits * (n * (n + 1) // 2)) % 2 else 1


def attach(family: DomainFamily, matching: Sequence[tuple[str, str]],
           lengths: Sequence[str] | None = None, name: str | None = None,
           end_names: Sequence[tuple[str, str]] = ()) -> Attachment:
    """Attach pairs of free points.

    Boundary pairs need one incoming and one outgoing point.  Bulk pairs are
    joined by an interval whose length tag comes from ``lengths`` (one entry
    per bulk pair, default ``"0"``); an incoming point attached to an
    outgoing one counts towards ``k``, two outgoing points towards ``l``.
    """
    top = family.top
    pts = top.point_map
    free = {x for x in pts if x not in top.linked}
    lengths = list(lengths or [])
    links = list(top.links)
    new_pts = {p.label: p for p in top.points}
    k = l = g = merges = splits = 0
    bulk_pairs = 0
    new_ends = list(family.end_names)
    for a, b in matching:
        for x in (a, b):
            _need(x in pts, f"no point {x}")
            _need(x in free, f"{x} is not free")
        pa, pb = pts[a], pts[b]
        if pa.kind == "boundary" and pb.kind == "boundary":
            _need({pa.direction, pb.direction} == {"in", "out"},
                  "boundary attachment needs one incoming and one outgoing point")
            probe = TopType(top.components, tuple(new_pts.values()), tuple(links))
            circles = [list(c) for s in probe.smoothing()[0] for c in s.circles]
            same = any(a in c and b in c for c in circles)
            splits += same
            merges += not same
            for x in (a, b):
                new_pts[x] = replace(new_pts[x], kind="node")
            links.append(Link(a, b, "boundary"))
        elif pa.kind == "bulk" and pb.kind == "bulk":
            dirs = sorted((pa.direction, pb.direction))
            _need(dirs != ["in", "in"], "two incoming rays are not covered by the attachment rule")
            tag = lengths[bulk_pairs] if bulk_pairs < len(lengths) else "0"
            _need(tag in ("0", "inf", "[0,inf]"), f"length parameter {tag!r} not allowed")
            bulk_pairs += 1
            if dirs == ["in", "out"]:
                k += 1
            else:
                l += 1
            g += tag == "[0,inf]"
            links.append(Link(a, b, "interval", tag))
        else:
            raise DomainError(f"cannot attach {pa.kind} point {a} to {pb.kind} point {b}")
        free -= {a, b}
    new_ends += list(end_names)
    new_top = TopType(top.components, tuple(new_pts[p.label] for p in top.points), tuple(links))
    fam = DomainFamily(name or f"At({family.name})", new_top, family.dim + g, family.ends,
                       tuple(new_ends), family.path, family.params, family.history + ("attach",))
    return Attachment(fam, k, l, g, merges, splits)


# ---------------------------------------------------------------------------
# stabilization


@dataclass(frozen=True)
class Add:
    """Add ``count`` incoming points of ``kind`` to ``component``.

    Boundary points go on circle ``circle`` right after ``after`` (default:
    at the end of the circle).  ``direction="out"`` is accepted only so that
    the rule forbidding it can be checked.
    """

    component: int
    kind: str
    count: int = 1
    circle: int = 0
    after: str | None = None
    symmetric: bool = True
    direction: str = "in"


@dataclass(frozen=True)
class Bubble:
    """Add an unstable disc or sphere, following the five stabilization cases.

    1: at an unmarked point of the component containing ``at``;
    2: at the incoming point ``at`` (which moves onto the bubble);
    3: at the outgoing point ``at``;
    4: at the node with end ``at``;
    5: disjoint, with a single outgoing point.
    """

    case: int
    kind: str
    at: str | None = None


@dataclass(frozen=True)
class Remove:
    label: str


def stabilize(family: DomainFamily, steps: Sequence[Add | Bubble | Remove], name: str | None = None) -> DomainFamily:
    """Apply a stabilization; the result must be stable.

    When only marked points are added the torsor identification with the
    original family is recorded in ``history``.  Added components shift it;
    the shift is recorded instead.
    """
    comps = [list(map(list, c.circles)) for c in family.top.components]
    inter = [list(c.interior) for c in family.top.components]
    kinds = [c.kind for c in family.top.components]
    pts = {p.label: p for p in family.top.points}
    links = list(family.top.links)
    fresh = iter(range(10 ** 6))
    orig_stab = {p.label: p.symmetric for p in family.top.points if p.kind == "stab"}

    def new_label(prefix):
        while True:
            x = f"{prefix}{next(fresh)}"
            if x not in pts:
                return x

    def locate(label):
        for i in range(len(kinds)):
            for ci, c in enumerate(comps[i]):
                if label in c:
                    return i, ci
            if label in inter[i]:
                return i, None
        raise DomainError(f"no point {label}")

    added_components = []
    for st in steps:
        if isinstance(st, Remove):
            raise DomainError(f"stabilization only adds points and components; cannot remove {st.label}")
        if isinstance(st, Add):
            _need(0 <= st.component < len(kinds), "no such component")
            _need(st.direction == "in", "stabilization adds incoming points only")
            _need(st.kind in ("bulk", "stab", "boundary"), f"unknown point kind {st.kind!r}")
            for _ in range(st.count):
                if st.kind == "boundary":
                    _need(kinds[st.component] != "sphere", "spheres have no boundary")
                    x = new_label("q")
                    pts[x] = _pt(x, "boundary", "in")
                    circ = comps[st.component][st.circle]
                    pos = circ.index(st.after) + 1 if st.after is not None else len(circ)
                    circ.insert(pos, x)
                elif st.kind == "bulk":
                    x = new_label("b")
                    pts[x] = _pt(x, "bulk", "in")
                    inter[st.component].append(x)
                else:
                    x = new_label("s")
                    pts[x] = _pt(x, "stab", symmetric=st.symmetric)
                    inter[st.component].append(x)
            continue
        _need(st.kind in ("disc", "sphere"), "bubbles are discs or spheres")
        _need(st.case in (1, 2, 3, 4, 5), "stabilization cases are 1 to 5")
        disc = st.kind == "disc"
        idx = len(kinds)
        kinds.append(st.kind)
        comps.append([[]] if disc else [])
        inter.append([])
        added_components.append(st.kind)
        if st.case == 5:
            x = new_label("r")
            if disc:
                pts[x] = _pt(x, "boundary", "out")
                comps[idx][0].append(x)
            else:
                pts[x] = _pt(x, "bulk", "out")
                inter[idx].append(x)
            continue
        _need(st.at is not None, "this case needs a point")
        ci, circ = locate(st.at)
        p = pts[st.at]
        old_end, new_end = new_label("n"), new_label("n")
        if disc:
            _need(circ is not None, "disc bubbles attach at boundary points")
        else:
            _need(circ is None, "sphere bubbles attach at interior points")
        if st.case == 1:
            if disc:
                pts[old_end] = _pt(old_end, "node", "in", on_boundary=True)
                pts[new_end] = _pt(new_end, "node", "out", on_boundary=True)
                c = comps[ci][circ]
                c.insert(c.index(st.at) + 1, old_end)
                comps[idx][0].append(new_end)
                links.append(Link(old_end, new_end, "boundary"))
            else:
                pts[old_end], pts[new_end] = _pt(old_end, "node"), _pt(new_end, "node")
                inter[ci].append(old_end)
                inter[idx].append(new_end)
                links.append(Link(old_end, new_end, "interior"))
        elif st.case in (2, 3):
            _need(st.at not in {y for ln in links for y in (ln.a, ln.b)}, f"{st.at} is a node")
            want = "in" if st.case == 2 else "out"
            if p.kind == "stab":
                _need(not disc, "stabilizing points take sphere bubbles")
            else:
                _need(p.direction == want, f"case {st.case} needs an {want}coming point")
            if disc:
                pts[old_end] = _pt(old_end, "node", want, on_boundary=True)
                pts[new_end] = _pt(new_end, "node", "out" if want == "in" else "in", on_boundary=True)
                c = comps[ci][circ]
                c[c.index(st.at)] = old_end
                comps[idx][0].extend([new_end, st.at])
                links.append(Link(old_end, new_end, "boundary"))
            else:
                pts[old_end], pts[new_end] = _pt(old_end, "node"), _pt(new_end, "node")
                inter[ci][inter[ci].index(st.at)] = old_end
                inter[idx].extend([new_end, st.at])
                links.append(Link(old_end, new_end, "interior"))
        else:
            ln = next((ln for ln in links if st.at in (ln.a, ln.b) and ln.kind != "interval"), None)
            _need(ln is not None, f"{st.at} is not a node")
            _need((ln.kind == "boundary") == disc, "node type and bubble type disagree")
            links.remove(ln)
            if disc:
                a_dir = pts[ln.a].direction
                pts[old_end] = _pt(old_end, "node", "out" if a_dir == "in" else "in", on_boundary=True)
                pts[new_end] = _pt(new_end, "node", a_dir, on_boundary=True)
                comps[idx][0].extend([old_end, new_end])
            else:
                pts[old_end], pts[new_end] = _pt(old_end, "node"), _pt(new_end, "node")
                inter[idx].extend([old_end, new_end])
            kind = ln.kind
            links += [Link(ln.a, old_end, kind), Link(new_end, ln.b, kind)]
    components = tuple(Component(k, tuple(map(tuple, c)), tuple(i)) for k, c, i in zip(kinds, comps, inter))
    for comp in components:
        _need(comp.stable, "the stabilized type still has an unstable component")
    for lab, sym in orig_stab.items():
        _need(pts[lab].symmetric == sym, "original stabilizing points keep their symmetric flag")
    order = [p.label for p in family.top.points] + [x for x in pts if x not in family.top.point_map]
    top = TopType(components, tuple(pts[x] for x in order), tuple(links))
    dim = family.dim + sum(c.moduli_dim for c in top.components) - sum(c.moduli_dim for c in family.top.components)
    note = "pullback: same orientation torsor" if not added_components else f"bubbles added: {added_components}"
    return DomainFamily(name or f"stab({family.name})", top, dim, (), family.end_names,
                        family.path or bool(family.ends), family.params, family.history + (note,))


def sym_action(family: DomainFamily, perm: dict[str, str]) -> tuple[DomainFamily, int]:
    """Permute symmetric stabilizing points; returns the new family and the orientation sign.

    Each interior point contributes a complex line, so the sign is the Koszul
    sign of permuting degree-2 symbols.
    """
    sym = {p.label for p in family.top.points if p.kind == "stab" and p.symmetric}
    _need(set(perm) <= sym and set(perm.values()) == set(perm), "only symmetric stabilizing points are permuted")
    ren = lambda x: perm.get(x, x)
    comps = tuple(Component(c.kind, tuple(tuple(ren(x) for x in cc) for cc in c.circles),
                            tuple(ren(x) for x in c.interior)) for c in family.top.components)
    pts = tuple(replace(p, label=ren(p.label)) for p in family.top.points)
    links = tuple(replace(ln, a=ren(ln.a), b=ren(ln.b)) for ln in family.top.links)
    labels = sorted(perm)
    order = [labels.index(perm[x]) for x in labels]
    sign = koszul_reorder_sign([2] * len(labels), order) if labels else 1
    return replace(family, top=TopType(comps, pts, links)), sign


def _collapse_spheres(top: TopType, drop_symmetric: bool) -> tuple[set[int], bool]:
    """Remove symmetric (or all) stabilizing points on spheres and collapse unstable spheres.

    Returns the set of collapsed components and whether some connected piece vanished entirely.
    """
    pts = top.point_map
    count = {}
    neighbours: dict[int, list[int]] = {i: [] for i in range(len(top.components))}
    where = {x: i for i, c in enumerate(top.components) for x in c.labels}
    for ln in top.links:
        if ln.kind != "interval":
            i, j = where[ln.a], where[ln.b]
            neighbours[i].append(j)
            neighbours[j].append(i)
    for i, c in enumerate(top.components):
        if c.kind == "sphere":
            keep = [x for x in c.interior
                    if not (pts[x].kind == "stab" and (pts[x].symmetric or not drop_symmetric))]
            count[i] = len(keep)
    collapsed: set[int] = set()
    changed = True
    while changed:
        changed = False
        for i, m in count.items():
            if i not in collapsed and m < 3:
                collapsed.add(i)
                changed = True
                if m <= 1:
                    for j in neighbours[i]:
                        if j in count and j not in collapsed:
                            count[j] -= 1
    surfaces, _ = top.smoothing()
    vanished = any(set(s.components) <= collapsed for s in surfaces)
    return collapsed, vanished


def is_fsym_stable(top: TopType) -> bool:
    collapsed, _ = _collapse_spheres(top, True)
    return not collapsed


def is_nearly_fsym_stable(top: TopType) -> bool:
    _, vanished = _collapse_spheres(top, True)
    return not vanished


# ---------------------------------------------------------------------------
# orientation torsors


def _counts(family: DomainFamily) -> dict[str, int]:
    top = family.top
    surfaces, _ = top.smoothing()
    return {
        "chi_hat": sum(s.euler + len(s.circles) for s in surfaces),
        "circles": sum(len(s.circles) for s in surfaces),
        "int_in": len(top.free("bulk", "in")) + len(top.free("stab")),
        "int_out": len(top.free("bulk", "out")),
        "bd_in": len(top.free("boundary", "in")),
        "bd_out": len(top.free("boundary", "out")),
    }


def sigma_degree(family: DomainFamily) -> Affine:
    """Degree of the orientation torsor of ``family`` as a function of ``n``."""
    c = _counts(family)
    chi = Affine(2 * c["int_in"], -c["chi_hat"] + 2 * c["circles"] + 2 * c["int_out"])
    return (Affine(-family.dim) + chi + Affine(c["bd_in"]) + Affine(-c["bd_out"], c["bd_out"])
            + Affine(0, -c["circles"]))


def orientation_word(family: DomainFamily, n: int, datum: GradingDatum | None = None) -> TorsorWord:
    """The orientation torsor as a word of symbols, for a given ``n``."""
    G = datum or GradingDatum.standard()
    top = family.top
    c = _counts(family)
    syms = [TorsorSymbol("R", G.integer(family.dim), True)]
    syms.append(TorsorSymbol(
        "chi", G.integer(-n * c["chi_hat"] + 2 * n * c["circles"] + 2 * n * c["int_out"] + 2 * c["int_in"])))
    for x in top.free("boundary", "in"):
        syms.append(TorsorSymbol(x, G.integer(1)))
    for x in top.free("boundary", "out"):
        syms += [TorsorSymbol(x, G.integer(1), True), TorsorSymbol(f"L_{x}", G.integer(n))]
    syms += [TorsorSymbol(f"B{i}", G.integer(n), True) for i in range(c["circles"])]
    return TorsorWord(tuple(syms))


# ---------------------------------------------------------------------------
# facets


def _splits(comp: Component) -> Iterable[tuple[int, int, tuple[str, ...], frozenset]]:
    """Ribbon splittings of a stable disc: (gap or start, size, block, interior subset).

    The root is the first point of the circle; the bubble takes a contiguous
    block of the remaining points (possibly empty, placed in one of the gaps)
    and a subset of the interior points.
    """
    circ = comp.circles[0]
    k, m = len(circ), len(comp.interior)
    subsets = [frozenset(c) for r in range(m + 1) for c in combinations(comp.interior, r)]
    if k == 0:
        first = min(comp.interior)
        for sub in subsets:
            if first not in sub and 1 + 2 * len(sub) >= 3 and 1 + 2 * (m - len(sub)) >= 3:
                yield 0, 0, (), sub
        return
    for j in range(0, k):
        starts = range(k) if j == 0 else range(1, k - j + 1)
        for st in starts:
            block = circ[st:st + j] if j else ()
            for sub in subsets:
                if j + 1 + 2 * len(sub) >= 3 and (k - j + 1) + 2 * (m - len(sub)) >= 3:
                    yield st, j, block, sub


def _split_type(top: TopType, ci: int, st: int, j: int, block, sub, tag: str) -> TopType:
    comp = top.components[ci]
    circ = list(comp.circles[0])
    main_end, bub_end = f"{tag}i", f"{tag}o"
    if j == 0:
        new_main = circ[:st + 1] + [main_end] + circ[st + 1:] if circ else [main_end]
    else:
        new_main = circ[:st] + [main_end] + circ[st + j:]
    main = _disc(new_main, [x for x in comp.interior if x not in sub])
    bub = _disc([bub_end] + list(block), [x for x in comp.interior if x in sub])
    comps = top.components[:ci] + (main, bub) + top.components[ci + 1:]
    pts = top.points + (_pt(main_end, "node", "in", on_boundary=True), _pt(bub_end, "node", "out", on_boundary=True))
    return TopType(comps, pts, top.links + (Link(main_end, bub_end, "boundary"),))


def disc_facets(family: DomainFamily) -> list[Facet]:
    """Codimension-one facets coming from disc bubbling on each stable disc factor."""
    out = []
    used = {p.label for p in family.top.points}
    counter = 0
    for ci, comp in enumerate(family.top.components):
        if comp.kind != "disc" or not comp.stable:
            continue
        for st, j, block, sub in _splits(comp):
            while f"e{counter}i" in used or f"e{counter}o" in used:
                counter += 1
            tag = f"e{counter}"
            counter += 1
            top = _split_type(family.top, ci, st, j, block, sub, tag)
            fam = DomainFamily(f"{family.name}|{ci}:{','.join(block) or '-'}:{','.join(sorted(sub)) or '-'}",
                               top, family.dim - 1, history=family.history + ("facet",))
            out.append(Facet(fam.name, 1, "disc", fam, (ci, st, j, block, sub)))
    return out


def boundary_strata(family: DomainFamily) -> list[Facet]:
    """Codimension-one facets with their boundary signs.

    For explicit paths the end where the chosen orientation agrees with the
    inward normal carries +1 and the other end -1; likewise the 0-end of an
    interval carries +1 and the infinity-end -1.  Disc bubbling facets carry
    +1, positive scaling of the bubble being the inward normal.
    """
    if family.path and not family.ends:
        raise DomainError("facets of stabilized path families are not enumerated")
    if family.ends:
        (n0, f0), (n1, f1) = family.ends
        return [Facet(n0, 1, "end-0", f0), Facet(n1, -1, "end-inf", f1)]
    out = []
    names = dict(family.end_names)
    for i, ln in enumerate(family.top.links):
        if ln.kind == "interval" and ln.length == "[0,inf]":
            n0, n1 = names.get((ln.a, ln.b), (f"{ln.a}-{ln.b}=0", f"{ln.a}-{ln.b}=inf"))
            for tag, nm, sign in (("0", n0, 1), ("inf", n1, -1)):
                links = family.top.links[:i] + (replace(ln, length=tag),) + family.top.links[i + 1:]
                fam = DomainFamily(nm, replace(family.top, links=links), family.dim - 1,
                                   history=family.history + ("facet",))
                out.append(Facet(nm, sign, f"interval-{tag}", fam))
    return out + disc_facets(family)


def _tree_key(top: TopType):
    """Canonical form of a tree of discs joined at boundary nodes.

    Read from the component holding the smallest boundary label; each node is
    replaced by the canonical form of the subtree behind it.
    """
    pts = top.point_map
    where = {x: i for i, c in enumerate(top.components) for x in c.labels}
    partner = {}
    for ln in top.links:
        if ln.kind == "boundary":
            partner[ln.a], partner[ln.b] = ln.b, ln.a
    start = min(x for x, p in pts.items() if p.kind == "boundary")

    def read(ci: int, first: str):
        comp = top.components[ci]
        circ = list(comp.circles[0])
        j = circ.index(first)
        circ = circ[j:] + circ[:j]
        items = tuple("*" if x == first and x in partner
                      else read(where[partner[x]], partner[x]) if x in partner else x for x in circ)
        return items, tuple(sorted(comp.interior))

    return read(where[start], start)


def codim2_pairing(family: DomainFamily) -> Report:
    """Every codimension-two stratum lies on exactly two facets."""
    rep = Report(f"codim-2 pairing for {family.name}")
    _need(all(c.kind == "disc" for c in family.top.components) and len(family.top.components) == 1,
          "the pairing check takes a single disc")
    seen: dict[tuple, int] = {}
    for f in disc_facets(family):
        for ff in disc_facets(f.family):
            key = _tree_key(ff.family.top)
            seen[key] = seen.get(key, 0) + 1
    for key, cnt in seen.items():
        rep.checked += 1
        if cnt != 2:
            rep.add(stratum=key, incidences=cnt)
    rep.info["strata"] = len(seen)
    return rep


# ---------------------------------------------------------------------------
# the A-infinity relation template


def _stable_disc(inputs: int, interior: int) -> bool:
    return inputs + 1 + 2 * interior >= 3


def ainfty_terms(s: int, labels: Sequence[str]) -> list[tuple[int, int, frozenset]]:
    """Terms mu(a_1..a_i, mu(a_{i+1}..a_{i+j}; L2), ...; L1) with both operations stable."""
    labels = list(labels)
    subsets = [frozenset(c) for r in range(len(labels) + 1) for c in combinations(labels, r)]
    terms = []
    for j in range(0, s + 1):
        outer = s - j + 1
        for i in range(outer):
            for l2 in subsets:
                if _stable_disc(j, len(l2)) and _stable_disc(outer, len(labels) - len(l2)):
                    terms.append((i, j, l2))
    return terms


def ainfty_term_bijection(s: int, bulk: int = 0, stab: int = 0,
                          facets: Callable[[DomainFamily], list[Facet]] = disc_facets) -> Report:
    """Match the facets of the disc family with the terms of the A-infinity relation."""
    fam = build_family("mu", s=s, bulk=bulk, stab=stab)
    interior = fam.top.components[0].interior
    rep = Report(f"A-infinity term bijection for mu({s},{bulk},{stab})", window={"s": s, "bulk": bulk, "stab": stab})
    image: dict[tuple, int] = {}
    for f in facets(fam):
        _, st, j, block, sub = f.data
        i = st if j == 0 else st - 1
        key = (i, j, frozenset(sub))
        image[key] = image.get(key, 0) + 1
        dims = sum(c.moduli_dim for c in f.family.top.components)
        if dims != fam.dim - 1:
            rep.add(facet=f.name, problem=f"dimension {dims} != {fam.dim - 1}")
    terms = ainfty_terms(s, interior)
    for t in terms:
        rep.checked += 1
        if image.get(t, 0) != 1:
            rep.add(term=(t[0], t[1], sorted(t[2])), facets=image.get(t, 0))
    for key in set(image) - set(terms):
        rep.add(facet_without_term=(key[0], key[1], sorted(key[2])))
    rep.info.update(facets=sum(image.values()), terms=len(terms))
    return rep


# ---------------------------------------------------------------------------
# homotopy families


def _co_star(length: str, oc: bool = False) -> DomainFamily:
    star = build_family("star")
    disc = build_family("OC" if oc else "CO")
    u = disjoint_union([star, disc], ["st", "oc" if oc else "co"])
    if oc:
        pair = ("oc.b1", "st.b1")
    else:
        pair = ("st.b0", "co.b1")
    tag = "OC" if oc else "CO"
    name = {"0": f"H12_{tag}", "[0,inf]": f"H1_{tag}", "inf": f"star*{tag}"}[length]
    ends = ((pair, (f"H12_{tag}", f"star*{tag}")),) if length == "[0,inf]" else ()
    return attach(u, [pair], [length], name=name, end_names=ends).family


def _cup_co() -> DomainFamily:
    u = disjoint_union([build_family("mu", s=2), build_family("CO"), build_family("CO")], ["mu", "co1", "co2"])
    return attach(u, [("co1.p0", "mu.p1"), ("co2.p0", "mu.p2")], name="cup(CO,CO)").family


def _cap_oc() -> DomainFamily:
    u = disjoint_union([build_family("mu", s=2), build_family("CO"), build_family("OC")], ["mu", "co", "oc"])
    return attach(u, [("co.p0", "mu.p1"), ("mu.p0", "oc.p0")], name="OC(cap(CO))").family


def _co_oc(length: str) -> DomainFamily:
    u = disjoint_union([build_family("CO"), build_family("OC")], ["co", "oc"])
    name = {"0": "H12_CY", "[0,inf]": "H1_CY", "inf": "CO*OC"}[length]
    pair = ("co.b1", "oc.b1")
    ends = ((pair, ("H12_CY", "CO*OC")),) if length == "[0,inf]" else ()
    return attach(u, [pair], [length], name=name, end_names=ends).family


def _mubar_cy() -> DomainFamily:
    u = disjoint_union([build_family("CY"), build_family("mu", s=2)], ["cy", "mu"])
    for m in ([("cy.p2", "mu.p1"), ("cy.p3", "mu.p2")], [("cy.p2", "mu.p2"), ("cy.p3", "mu.p1")]):
        try:
            fam = attach(u, m, name="mubar(CY)").family
        except DomainError:
            continue
        surfaces, _ = fam.top.smoothing()
        free = set(fam.top.free("boundary"))
        if all(len([x for x in c if x in free]) == 1 for s in surfaces for c in s.circles):
            return fam
    raise DomainError("no attachment of CY to mu gives an annulus with one point per boundary")


def _homotopy_family(kind: str) -> DomainFamily:
    if kind in ("H12_CO", "H1_CO"):
        return _co_star("0" if kind == "H12_CO" else "[0,inf]")
    if kind in ("H12_OC", "H1_OC"):
        return _co_star("0" if kind == "H12_OC" else "[0,inf]", oc=True)
    if kind in ("H12_CY", "H1_CY"):
        return _co_oc("0" if kind == "H12_CY" else "[0,inf]")
    if kind == "H2_CO":
        top = TopType((_disc(["p0"], ["b1", "b2"]),),
                      (_bd("p0", "out"), _pt("b1", "bulk", "in"), _pt("b2", "bulk", "in")))
        return DomainFamily("H2_CO", top, 1, (("cup(CO,CO)", _cup_co()), ("H12_CO", _co_star("0"))))
    if kind == "H2_OC":
        top = TopType((_disc(["p0"], ["b1", "b2"]),),
                      (_bd("p0", "in"), _pt("b1", "bulk", "out"), _pt("b2", "bulk", "in")))
        return DomainFamily("H2_OC", top, 1, (("OC(cap(CO))", _cap_oc()), ("H12_OC", _co_star("0", oc=True))))
    if kind == "H_2CO":
        top = TopType((_disc(["p0", "p1"], ["b1"]),),
                      (_bd("p0", "out"), _bd("p1", "in"), _pt("b1", "bulk", "in")))
        u = disjoint_union([build_family("mu", s=2), build_family("CO")], ["mu", "co"])
        cup = attach(u, [("co.p0", "mu.p1")], name="cup(CO)").family
        return DomainFamily("H_2CO", top, 1, (("2CO", build_family("2CO")), ("cup(CO)", cup)))
    if kind == "H2_CY":
        top = TopType((Component("annulus", (("poc",), ("pco",))),), (_bd("poc", "in"), _bd("pco", "out")))
        return DomainFamily("H2_CY", top, 1, (("mubar(CY)", _mubar_cy()), ("H12_CY", _co_oc("0"))))
    raise DomainError(f"unknown homotopy family {kind!r}")


# ---------------------------------------------------------------------------
# orientation lemmas and the sign ledgers


def aut_orientation_sign(translation: Sequence[Fraction | int], scaling: Sequence[Fraction | int]) -> int:
    """Sign of the basis (translation, scaling) of the automorphisms of the half-plane.

    The vectors are the infinitesimal actions on the coordinates of the marked points.
    """
    (a, b), (c, d) = translation, scaling
    det = a * d - b * c
    if det == 0:
        raise DomainError("the group action is not free at this configuration")
    return 1 if det > 0 else -1


def _tangents_mu2() -> tuple[tuple[int, int], tuple[int, int]]:
    p1, p2 = 1, -1
    return (1, 1), (p1, p2)


def _tangents_co() -> tuple[tuple[int, int], tuple[int, int]]:
    # interior point at i: translation moves it along the real axis, scaling about 0 along the imaginary one
    return (1, 0), (0, 1)


def _ledger_text(name: str) -> str:
    return resources.files("ainfcat").joinpath("ledgers", f"{name}.ledger").read_text()


def lemma_signs() -> dict[str, int]:
    """Signs of the two point-family lemmas, from their ledgers and the group-action determinants."""
    out = {}
    for name, tangents in (("mu2_or", _tangents_mu2), ("co_or", _tangents_co)):
        det = aut_orientation_sign(*tangents())
        _, sign = parse_ledger(_ledger_text(name), {"det": det}, name=name).run()
        out[name] = sign
    return out


SIGN_TABLE_ROWS: dict[str, list[tuple[str, str, str]]] = {
    "CO": [
        ("co_h12_h1", "H1_CO", "H12_CO"),
        ("co_star_h1", "H1_CO", "star*CO"),
        ("co_cup_h2", "H2_CO", "cup(CO,CO)"),
        ("co_h12_h2", "H2_CO", "H12_CO"),
    ],
    "hh-unit": [
        ("hh_2co", "H_2CO", "2CO"),
        ("hh_cup_co", "H_2CO", "cup(CO)"),
    ],
    "OC": [
        ("oc_h12_h1", "H1_OC", "H12_OC"),
        ("oc_star_h1", "H1_OC", "star*OC"),
        ("oc_cap_h2", "H2_OC", "OC(cap(CO))"),
        ("oc_h12_h2", "H2_OC", "H12_OC"),
    ],
    "Cardy": [
        ("cy_h12_h1", "H1_CY", "H12_CY"),
        ("cy_co_oc_h1", "H1_CY", "CO*OC"),
        ("cy_mubar_h2", "H2_CY", "mubar(CY)"),
        ("cy_h12_h2", "H2_CY", "H12_CY"),
    ],
}


def facet_sign(kind: str, facet: str) -> int:
    for f in boundary_strata(build_family(kind)):
        if f.name == facet:
            return f.sign
    raise DomainError(f"{kind} has no facet {facet!r}")


def ledger_params(name: str) -> dict[str, int]:
    """Parameters a packaged ledger needs apart from ``n``."""
    if name in ("mu2_or", "co_or"):
        tangents = _tangents_mu2 if name == "mu2_or" else _tangents_co
        return {"det": aut_orientation_sign(*tangents())}
    env = dict(lemma_signs())
    for rows in SIGN_TABLE_ROWS.values():
        for script, kind, facet in rows:
            if script == name:
                env["facet"] = facet_sign(kind, facet)
    return env


def sign_table_ledgers(n: int) -> dict[str, list[int]]:
    """Replay the sign ledger of every row; returns the sign table per lemma."""
    lemmas = lemma_signs()
    table = {}
    for lemma, rows in SIGN_TABLE_ROWS.items():
        signs = []
        for script, kind, facet in rows:
            env = {"n": n, "facet": facet_sign(kind, facet), **lemmas}
            _, sign = parse_ledger(_ledger_text(script), env, name=script).run()
            signs.append(sign)
        table[lemma] = signs
    return table
