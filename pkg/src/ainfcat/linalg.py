"""Exact integer and rational linear algebra on small dense or sparse matrices.

Matrices are lists of rows of Python ints or :class:`fractions.Fraction`.
Nothing here uses floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

__all__ = [
    "SmithForm",
    "smith_normal_form",
    "invariant_factors",
    "rank_q",
    "SparseSystem",
    "solve_q",
    "nullspace_q",
]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


@dataclass
class SmithForm:
    """``left @ matrix @ right == diag`` with ``diag[i][i]`` dividing ``diag[i+1][i+1]``."""

    diag: list[list[int]]
    left: list[list[int]]
    right: list[list[int]]

    @property
    def factors(self) -> list[int]:
        k = min(len(self.diag), len(self.diag[0]) if self.diag else 0)
        return [abs(self.diag[i][i]) for i in range(k) if self.diag[i][i] != 0]


def smith_normal_form(matrix: list[list[int]], ncols: int | None = None) -> SmithForm:
    """Smith normal form over the integers, with unimodular transforms."""
    m = len(matrix)
    n = ncols if ncols is not None else (len(matrix[0]) if m else 0)
    a = [list(map(int, row)) for row in matrix]
    left = _identity(m)
    right = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        if c:
            a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
            left[dst] = [x + c * y for x, y in zip(left[dst], left[src])]

    def add_col(src, dst, c):
        if c:
            for row in a:
                row[dst] += c * row[src]
            for row in right:
                row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best, pivot = abs(a[i][j]), (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        done = False
                        if abs(a[i][t]) < abs(a[t][t]):
                            swap_rows(t, i)
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        done = False
                        if abs(a[t][j]) < abs(a[t][t]):
                            swap_cols(t, j)
            if not done:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        t += 1
    return SmithForm(a, left, right)


def invariant_factors(matrix: list[list[int]], ncols: int | None = None) -> list[int]:
    """Nonzero diagonal entries of the Smith form (transforms not tracked)."""
    m = len(matrix)
    n = ncols if ncols is not None else (len(matrix[0]) if m else 0)
    a = [list(map(int, row)) for row in matrix if any(row)]
    m = len(a)
    out: list[int] = []
    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best, pivot = abs(a[i][j]), (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        a[t], a[pivot[0]] = a[pivot[0]], a[t]
        pj = pivot[1]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        done = False
                        a[t], a[i] = a[i], a[t]
                        p = a[t][t]
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        p = a[t][t]
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        out.append(abs(a[t][t]))
        t += 1
    return out


def rank_q(rows: Iterable[Mapping[Hashable, Fraction | int]]) -> int:
    """Rank over the rationals of a sparse matrix given as row dictionaries."""
    pivots: dict[Hashable, dict] = {}
    rank = 0
    for row in rows:
        r = {k: Fraction(v) for k, v in row.items() if v}
        r = _reduce(r, pivots)
        if r:
            key = min(r, key=repr)
            pivots[key] = _normalize(r, key)
            rank += 1
    return rank


def _normalize(row: dict, key) -> dict:
    c = row[key]
    return {k: v / c for k, v in row.items()}


def _reduce(row: dict, pivots: dict) -> dict:
    changed = True
    while changed and row:
        changed = False
        for k in list(row):
            if k in pivots and k in row:
                c = row[k]
                for kk, vv in pivots[k].items():
                    nv = row.get(kk, 0) - c * vv
                    if nv:
                        row[kk] = nv
                    else:
                        row.pop(kk, None)
                changed = True
    return row


class SparseSystem:
    """Incremental Gaussian elimination for ``sum_k a_k x_k = rhs`` over the rationals.

    Each equation is a dict from unknown to coefficient plus a right-hand side.
    Unknowns are arbitrary hashable labels.
    """

    def __init__(self):
        self._pivots: dict[Hashable, tuple[dict, Fraction]] = {}
        self._order: list[Hashable] = []
        self.inconsistent: list[Hashable] = []

    def add(self, coeffs: Mapping[Hashable, Fraction | int], rhs: Fraction | int = 0, tag=None) -> bool:
        row = {k: Fraction(v) for k, v in coeffs.items() if v}
        b = Fraction(rhs)
        changed = True
        while changed and row:
            changed = False
            for k in list(row):
                if k in self._pivots and k in row:
                    c = row[k]
                    prow, pb = self._pivots[k]
                    for kk, vv in prow.items():
                        nv = row.get(kk, 0) - c * vv
                        if nv:
                            row[kk] = nv
                        else:
                            row.pop(kk, None)
                    b -= c * pb
                    changed = True
        if not row:
            if b != 0:
                self.inconsistent.append(tag)
                return False
            return True
        key = min(row, key=repr)
        c = row[key]
        prow = {k: v / c for k, v in row.items()}
        pb = b / c
        for other, (orow, ob) in self._pivots.items():
            if key in orow:
                f = orow[key]
                for kk, vv in prow.items():
                    nv = orow.get(kk, 0) - f * vv
                    if nv:
                        orow[kk] = nv
                    else:
                        orow.pop(kk, None)
                self._pivots[other] = (orow, ob - f * pb)
        self._pivots[key] = (prow, pb)
        self._order.append(key)
        return True

    @property
    def consistent(self) -> bool:
        return not self.inconsistent

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def solution(self) -> dict[Hashable, Fraction]:
        """A particular solution with all free unknowns set to zero."""
        return {k: b for k, (row, b) in self._pivots.items() if b}

    def free_unknowns(self, unknowns: Iterable[Hashable]) -> list[Hashable]:
        return [u for u in unknowns if u not in self._pivots]

    def pivot_rows(self) -> dict[Hashable, tuple[dict, Fraction]]:
        return self._pivots


def solve_q(equations: Iterable[tuple[Mapping, Fraction | int]]):
    """Solve a sparse rational system; returns a particular solution or ``None``."""
    sysm = SparseSystem()
    for coeffs, rhs in equations:
        sysm.add(coeffs, rhs)
    return sysm.solution() if sysm.consistent else None


def nullspace_q(equations: Iterable[Mapping], unknowns: list[Hashable]) -> list[dict]:
    """Basis of solutions of the homogeneous sparse system."""
    sysm = SparseSystem()
    for coeffs in equations:
        sysm.add(coeffs, 0)
    piv = sysm.pivot_rows()
    basis = []
    for free in sysm.free_unknowns(unknowns):
        vec = {free: Fraction(1)}
        for k, (row, _) in piv.items():
            c = row.get(free)
            if c:
                vec[k] = -c
        basis.append(vec)
    return basis
