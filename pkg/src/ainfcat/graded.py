"""Grading data and the Koszul sign engine.

A grading datum is an abelian group ``G = Z^r + Z/d_1 + ... + Z/d_k`` together
with an element ``i(1)`` and a parity functional ``sigma: G -> Z/2`` sending
``i(1)`` to 1.  Every sign in the package is produced here, either as the
Koszul sign of a reordering of homogeneous symbols, or by replaying a
:class:`SignLedger` of elementary moves on a :class:`TorsorWord`.

>>> G = GradingDatum.standard()
>>> G.degree(3).parity
1
>>> koszul_reorder_sign([1, 1], [1, 0])
-1
"""

from __future__ import annotations

import ast
import operator
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Hashable, Iterable, Sequence

from .linalg import smith_normal_form

__all__ = [
    "GradingError",
    "LedgerError",
    "GradingDatum",
    "Degree",
    "GradingMorphism",
    "parity",
    "koszul_reorder_sign",
    "koszul_sign",
    "block_pass_sign",
    "TorsorSymbol",
    "TorsorWord",
    "Move",
    "SignLedger",
    "evaluate_ledger",
    "reorder_moves",
    "parse_ledger",
    "load_ledger",
]


class GradingError(ValueError):
    pass


class LedgerError(ValueError):
    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        where = []
        if position is not None:
            where.append(f"move {position}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message}" + (f" ({', '.join(where)})" if where else ""))
        self.position = position
        self.line = line


# ---------------------------------------------------------------------------
# grading data


@dataclass(frozen=True)
class GradingDatum:
    free_rank: int
    torsion: tuple[int, ...]
    i_map: tuple[int, ...]
    sigma_map: tuple[int, ...]

    def __post_init__(self):
        n = self.free_rank + len(self.torsion)
        if self.free_rank < 0:
            raise GradingError("free rank must be nonnegative")
        if any(d < 2 for d in self.torsion):
            raise GradingError("torsion moduli must be at least 2")
        if len(self.i_map) != n or len(self.sigma_map) != n:
            raise GradingError(f"i_map and sigma_map need {n} coordinates")
        sig = tuple(s % 2 for s in self.sigma_map)
        for d, s in zip(self.torsion, sig[self.free_rank:]):
            if s and d % 2:
                raise GradingError(f"parity is not well defined on Z/{d}")
        object.__setattr__(self, "sigma_map", sig)
        object.__setattr__(self, "i_map", self._reduce(self.i_map))
        if sum(a * b for a, b in zip(self.i_map, sig)) % 2 != 1:
            raise GradingError("sigma(i(1)) must be odd")

    @classmethod
    def standard(cls) -> "GradingDatum":
        """``Z`` with ``i = id`` and ``sigma`` = reduction mod 2."""
        return cls(1, (), (1,), (1,))

    @classmethod
    def cyclic(cls, modulus: int) -> "GradingDatum":
        """``Z/modulus`` (modulus even) with the obvious maps."""
        return cls(0, (modulus,), (1,), (1,))

    @classmethod
    def from_presentation(
        cls,
        ngens: int,
        relations: Sequence[Sequence[int]],
        i_map: Sequence[int],
        sigma_map: Sequence[int],
    ) -> tuple["GradingDatum", list[list[int]]]:
        """Normalize ``Z^ngens / <relations>`` via the Smith form.

        Returns the datum and the integer matrix sending old generator
        coordinates to new (reduced) coordinates.
        """
        rels = [list(r) for r in relations if any(r)]
        if not rels:
            return cls(ngens, (), tuple(i_map), tuple(sigma_map)), [
                [int(i == j) for j in range(ngens)] for i in range(ngens)
            ]
        # rows of `rels` are relations; Smith form of the transpose gives new basis
        mat = [[rels[r][g] for r in range(len(rels))] for g in range(ngens)]
        snf = smith_normal_form(mat, len(rels))
        facs = [abs(snf.diag[k][k]) if k < min(ngens, len(rels)) else 0 for k in range(ngens)]
        keep_free = [k for k in range(ngens) if facs[k] == 0]
        keep_tor = [k for k in range(ngens) if facs[k] > 1]
        order = keep_free + keep_tor
        change = [snf.left[k] for k in order]
        new_i = [sum(row[g] * i_map[g] for g in range(ngens)) for row in change]
        # sigma on new generators: new basis vector k is column k of left^{-1}
        inv = _integer_inverse(snf.left)
        new_sigma = [sum(sigma_map[g] * inv[g][k] for g in range(ngens)) % 2 for k in order]
        datum = cls(len(keep_free), tuple(facs[k] for k in keep_tor), tuple(new_i), tuple(new_sigma))
        return datum, change

    @property
    def ncoords(self) -> int:
        return self.free_rank + len(self.torsion)

    def _reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        c = list(coords)
        for k, d in enumerate(self.torsion):
            c[self.free_rank + k] %= d
        return tuple(c)

    def degree(self, *coords: int) -> "Degree":
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) == 1 and self.ncoords != 1:
            return self.integer(coords[0])
        if len(coords) != self.ncoords:
            raise GradingError(f"expected {self.ncoords} coordinates, got {len(coords)}")
        return Degree(self, self._reduce(coords))

    def integer(self, k: int) -> "Degree":
        """The image ``i(k)``."""
        return Degree(self, self._reduce([k * a for a in self.i_map]))

    @property
    def zero(self) -> "Degree":
        return Degree(self, (0,) * self.ncoords)

    def parity_of(self, coords: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(coords, self.sigma_map)) % 2

    def extend_by_z(self) -> "GradingDatum":
        """``G + Z`` with the new summand carrying even parity (used for weights)."""
        f = self.free_rank
        return GradingDatum(
            f + 1,
            self.torsion,
            self.i_map[:f] + (0,) + self.i_map[f:],
            self.sigma_map[:f] + (0,) + self.sigma_map[f:],
        )

    def __repr__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return f"GradingDatum({' + '.join(parts) or '0'}, i={self.i_map}, sigma={self.sigma_map})"


def _integer_inverse(m: list[list[int]]) -> list[list[int]]:
    from fractions import Fraction

    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [[int(x) for x in row[n:]] for row in a]


@dataclass(frozen=True)
class Degree:
    datum: GradingDatum
    coords: tuple[int, ...]

    @cached_property
    def parity(self) -> int:
        return self.datum.parity_of(self.coords)

    def _check(self, other: "Degree"):
        if not isinstance(other, Degree) or other.datum != self.datum:
            raise GradingError("degrees belong to different grading data")

    def __add__(self, other: "Degree") -> "Degree":
        if isinstance(other, int):
            other = self.datum.integer(other)
        self._check(other)
        return Degree(self.datum, self.datum._reduce([a + b for a, b in zip(self.coords, other.coords)]))

    __radd__ = __add__

    def __neg__(self) -> "Degree":
        return Degree(self.datum, self.datum._reduce([-a for a in self.coords]))

    def __sub__(self, other: "Degree") -> "Degree":
        if isinstance(other, int):
            other = self.datum.integer(other)
        return self + (-other)

    def __mul__(self, k: int) -> "Degree":
        return Degree(self.datum, self.datum._reduce([k * a for a in self.coords]))

    __rmul__ = __mul__

    def as_int(self) -> int | None:
        """The integer ``k`` with ``self == i(k)``, when the datum is ``Z``."""
        if self.datum.ncoords == 1 and self.datum.free_rank == 1 and self.datum.i_map == (1,):
            return self.coords[0]
        return None

    def __repr__(self):
        k = self.as_int()
        return f"deg({k})" if k is not None else f"deg{self.coords}"

    def __hash__(self):
        return hash(self.coords)

    def __eq__(self, other):
        return isinstance(other, Degree) and self.coords == other.coords and self.datum == other.datum


def parity(g: Degree | int) -> int:
    """``sigma(g)``; integers are read as ``i(g)`` in any datum."""
    if isinstance(g, Degree):
        return g.parity
    return g % 2


@dataclass(frozen=True)
class GradingMorphism:
    """Integer matrix from source coordinates to target coordinates."""

    source: GradingDatum
    target: GradingDatum
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(r) for r in self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != self.target.ncoords or any(len(r) != self.source.ncoords for r in m):
            raise GradingError("matrix shape does not match the grading data")
        # well defined on torsion summands
        for k, d in enumerate(self.source.torsion):
            col = self.source.free_rank + k
            img = self.target._reduce([d * m[r][col] for r in range(len(m))])
            if any(img[: self.target.free_rank]) or any(img):
                raise GradingError(f"generator of Z/{d} is not sent to a {d}-torsion element")
        if self._apply(self.source.i_map) != self.target.i_map:
            raise GradingError("morphism does not respect i")
        for col in range(self.source.ncoords):
            e = [int(j == col) for j in range(self.source.ncoords)]
            if self.target.parity_of(self._apply(e)) != self.source.sigma_map[col]:
                raise GradingError("morphism does not respect sigma")

    def _apply(self, coords: Sequence[int]) -> tuple[int, ...]:
        return self.target._reduce([sum(r[j] * coords[j] for j in range(len(coords))) for r in self.matrix])

    def __call__(self, g: Degree) -> Degree:
        if g.datum != self.source:
            raise GradingError("degree is not in the source datum")
        return Degree(self.target, self._apply(g.coords))

    @classmethod
    def identity(cls, datum: GradingDatum) -> "GradingMorphism":
        n = datum.ncoords
        return cls(datum, datum, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


# ---------------------------------------------------------------------------
# Koszul signs


def _par(x) -> int:
    return x.parity if isinstance(x, Degree) else int(x) % 2


def koszul_reorder_sign(before: Sequence[Degree | int], permutation: Sequence[int]) -> int:
    """Sign of moving ``before`` into the order ``[before[p] for p in permutation]``."""
    if sorted(permutation) != list(range(len(before))):
        raise GradingError("permutation does not match the number of symbols")
    ps = [_par(before[p]) for p in permutation]
    s = 0
    n = len(ps)
    for a in range(n):
        if ps[a]:
            for b in range(a + 1, n):
                if ps[b] and permutation[a] > permutation[b]:
                    s ^= 1
    return -1 if s else 1


def koszul_sign(start: Sequence[tuple[Hashable, int]], target: Sequence[Hashable]) -> int:
    """Koszul sign of rearranging labelled symbols ``(label, parity)`` into ``target`` order."""
    index = {lab: k for k, (lab, _) in enumerate(start)}
    if len(index) != len(start) or sorted(index[t] for t in target) != list(range(len(start))):
        raise GradingError("target is not a rearrangement of the start labels")
    return koszul_reorder_sign([p for _, p in start], [index[t] for t in target])


def block_pass_sign(p_moving: int, passed: Iterable[int]) -> int:
    """Sign of a symbol of parity ``p_moving`` passing the given parities."""
    if not p_moving & 1:
        return 1
    return -1 if sum(passed) & 1 else 1



# ---------------------------------------------------------------------------
# torsor words and ledgers


@dataclass(frozen=True)
class TorsorSymbol:
    label: str
    degree: Degree
    dual: bool = False

    @property
    def parity(self) -> int:
        return self.degree.parity

    @property
    def total_degree(self) -> Degree:
        return -self.degree if self.dual else self.degree

    def __str__(self):
        k = self.degree.as_int()
        d = k if k is not None else self.degree.coords
        return f"{self.label}{'^' if self.dual else ''}:{d}"


@dataclass(frozen=True)
class TorsorWord:
    symbols: tuple[TorsorSymbol, ...] = ()

    def __len__(self):
        return len(self.symbols)

    def degree(self, datum: GradingDatum) -> Degree:
        total = datum.zero
        for s in self.symbols:
            total = total + s.total_degree
        return total

    def __str__(self):
        return " ".join(str(s) for s in self.symbols) or "()"


@dataclass(frozen=True)
class Move:
    """One elementary move.

    ``kind`` is one of ``swap``, ``merge``, ``split``, ``contract``, ``expand``,
    ``drop`` (remove a degree-zero symbol) or ``axiom``.  ``args`` depends on the kind; see :func:`_apply_move`.
    """

    kind: str
    index: int
    args: tuple = ()
    sign: int = 1
    citation: str = ""
    line: int | None = None


@dataclass(frozen=True)
class SignLedger:
    moves: tuple[Move, ...] = ()
    name: str = ""

    def __add__(self, other: "SignLedger") -> "SignLedger":
        return SignLedger(self.moves + other.moves, self.name or other.name)

    def split_at(self, k: int) -> tuple["SignLedger", "SignLedger"]:
        return SignLedger(self.moves[:k], self.name), SignLedger(self.moves[k:], self.name)


def _apply_move(word: list[TorsorSymbol], mv: Move, pos: int) -> int:
    i = mv.index
    n = len(word)

    def need(k: int):
        if not 0 <= k < len(word):
            raise LedgerError(f"{mv.kind}: index {k} out of range for word of length {n}", pos, mv.line)

    if mv.kind == "swap":
        need(i)
        need(i + 1)
        a, b = word[i], word[i + 1]
        word[i], word[i + 1] = b, a
        return -1 if a.parity and b.parity else 1
    if mv.kind == "merge":
        need(i)
        need(i + 1)
        a, b = word[i], word[i + 1]
        if a.dual or b.dual:
            raise LedgerError("merge applies to non-dual symbols only", pos, mv.line)
        label = mv.args[0] if mv.args else f"{a.label}+{b.label}"
        word[i : i + 2] = [TorsorSymbol(label, a.degree + b.degree)]
        return 1
    if mv.kind == "split":
        need(i)
        a = word[i]
        (l1, g1), (l2, g2) = mv.args
        if a.dual:
            raise LedgerError("split applies to non-dual symbols only", pos, mv.line)
        if g1 + g2 != a.degree:
            raise LedgerError(f"split degrees do not add up to {a}", pos, mv.line)
        word[i : i + 1] = [TorsorSymbol(l1, g1), TorsorSymbol(l2, g2)]
        return 1
    if mv.kind == "contract":
        need(i)
        need(i + 1)
        a, b = word[i], word[i + 1]
        if not a.dual and b.dual:
            raise LedgerError("contraction sigma sigma^v -> () is not allowed", pos, mv.line)
        if not (a.dual and not b.dual):
            raise LedgerError("contraction needs a dual followed by its partner", pos, mv.line)
        if a.label != b.label or a.degree != b.degree:
            raise LedgerError(f"{a} does not cancel against {b}", pos, mv.line)
        del word[i : i + 2]
        return 1
    if mv.kind == "drop":
        need(i)
        a = word[i]
        if a.degree != a.degree.datum.zero:
            raise LedgerError(f"only degree-zero symbols can be dropped, not {a}", pos, mv.line)
        del word[i]
        return 1
    if mv.kind == "expand":
        if not 0 <= i <= len(word):
            raise LedgerError("expand position out of range", pos, mv.line)
        label, g = mv.args
        word[i:i] = [TorsorSymbol(label, g, True), TorsorSymbol(label, g)]
        return 1
    if mv.kind == "axiom":
        count, new = mv.args
        if i < 0 or i + count > len(word):
            raise LedgerError("axiom span out of range", pos, mv.line)
        old = word[i : i + count]
        if old:
            datum = old[0].degree.datum
        elif new:
            datum = new[0].degree.datum
        else:
            return mv.sign
        if TorsorWord(tuple(old)).degree(datum) != TorsorWord(tuple(new)).degree(datum):
            raise LedgerError("axiom move does not preserve the degree", pos, mv.line)
        if mv.sign not in (1, -1):
            raise LedgerError("axiom sign must be +1 or -1", pos, mv.line)
        word[i : i + count] = list(new)
        return mv.sign
    raise LedgerError(f"unknown move {mv.kind!r}", pos, mv.line)


def evaluate_ledger(start: TorsorWord, ledger: SignLedger) -> tuple[TorsorWord, int]:
    """Replay ``ledger`` on ``start``; returns the final word and the accumulated sign."""
    word = list(start.symbols)
    sign = 1
    for pos, mv in enumerate(ledger.moves):
        sign *= _apply_move(word, mv, pos)
    return TorsorWord(tuple(word)), sign


def reorder_moves(word: TorsorWord, target_labels: Sequence[str]) -> SignLedger:
    """Adjacent swaps taking ``word`` to the order given by ``target_labels``."""
    labels = [s.label for s in word.symbols]
    if sorted(labels) != sorted(target_labels) or len(set(labels)) != len(labels):
        raise LedgerError("target order is not a permutation of distinct labels")
    cur = list(labels)
    moves = []
    for k, lab in enumerate(target_labels):
        j = cur.index(lab)
        while j > k:
            moves.append(Move("swap", j - 1))
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            j -= 1
    return SignLedger(tuple(moves))


# ---------------------------------------------------------------------------
# ledger scripts

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Div: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}


def eval_int_expr(text: str, env: dict[str, int]) -> int:
    """Evaluate an integer expression in the parameters (``n``, ...).

    Juxtaposition such as ``2n`` or ``n(n+1)`` is accepted, and ``^`` means power.
    """
    src = text.strip().replace("^", "**")
    src = re.sub(r"(\d)\s*([A-Za-z(])", r"\1*\2", src)
    src = re.sub(r"([A-Za-z0-9)])\s*\(", r"\1*(", src)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise LedgerError(f"unknown parameter {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Div) and a % b:
                raise LedgerError(f"non-integral division in {text!r}")
            return _BINOPS[type(node.op)](a, b)
        raise LedgerError(f"unsupported expression {text!r}")

    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise LedgerError(f"cannot parse expression {text!r}") from exc
    return ev(tree)


def eval_sign_expr(text: str, env: dict[str, int]) -> int:
    t = text.strip()
    m = re.fullmatch(r"([+-]?)\(-1\)\s*\^\s*(.+)", t)
    if m:
        e = m.group(2).strip()
        if e.startswith("(") and e.endswith(")"):
            e = e[1:-1]
        v = -1 if eval_int_expr(e, env) % 2 else 1
        return -v if m.group(1) == "-" else v
    v = eval_int_expr(t, env)
    if v not in (1, -1):
        raise LedgerError(f"sign expression {text!r} is not +-1")
    return v


def _parse_symbol(tok: str, datum: GradingDatum, env: dict[str, int], line: int) -> TorsorSymbol:
    if ":" not in tok:
        raise LedgerError(f"symbol {tok!r} needs the form label:degree", line=line)
    lab, deg = tok.rsplit(":", 1)
    dual = lab.endswith("^")
    if dual:
        lab = lab[:-1]
    if lab.endswith("^"):
        raise LedgerError("double duals are not allowed", line=line)
    return TorsorSymbol(lab, datum.integer(eval_int_expr(deg, env)), dual)


@dataclass
class LedgerScript:
    """A parsed ledger file: start word, moves and optional expectations."""

    name: str
    start: TorsorWord
    ledger: SignLedger
    expect_word: TorsorWord | None = None
    expect_sign: int | None = None
    params: dict[str, int] = field(default_factory=dict)

    def run(self) -> tuple[TorsorWord, int]:
        end, sign = evaluate_ledger(self.start, self.ledger)
        if self.expect_word is not None and [
            (s.label, s.degree, s.dual) for s in end.symbols
        ] != [(s.label, s.degree, s.dual) for s in self.expect_word.symbols]:
            raise LedgerError(f"{self.name}: ended at {end}, expected {self.expect_word}")
        return end, sign


def parse_ledger(text: str, params: dict[str, int] | None = None, datum: GradingDatum | None = None,
                 name: str = "") -> LedgerScript:
    """Parse a ledger script.

    One directive per line; ``#`` starts a comment.  Directives::

        start  a:1 b^:2 ...
        swap i | merge i [label] | split i l1:g1 l2:g2 | contract i | expand i l:g | drop i
        axiom i count -> sym ... ; sign <expr> ; cite <text>
        expect sym ...
        sign <expr>            # expected final sign
    """
    env = dict(params or {})
    datum = datum or GradingDatum.standard()
    start = None
    moves: list[Move] = []
    expect_word = None
    expect_sign = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "name":
                name = rest
            elif head == "param":
                k, _, v = rest.partition("=")
                env.setdefault(k.strip(), eval_int_expr(v, env) if v else 0)
            elif head == "start":
                start = TorsorWord(tuple(_parse_symbol(t, datum, env, lineno) for t in rest.split()))
            elif head == "expect":
                expect_word = TorsorWord(tuple(_parse_symbol(t, datum, env, lineno) for t in rest.split()))
            elif head == "sign":
                expect_sign = eval_sign_expr(rest, env)
            elif head == "swap":
                moves.append(Move("swap", int(rest), line=lineno))
            elif head == "merge":
                parts = rest.split()
                moves.append(Move("merge", int(parts[0]), tuple(parts[1:2]), line=lineno))
            elif head == "split":
                i, a, b = rest.split()
                sa, sb = (_parse_symbol(t, datum, env, lineno) for t in (a, b))
                moves.append(Move("split", int(i), ((sa.label, sa.degree), (sb.label, sb.degree)), line=lineno))
            elif head == "contract":
                moves.append(Move("contract", int(rest), line=lineno))
            elif head == "drop":
                moves.append(Move("drop", int(rest), line=lineno))
            elif head == "expand":
                i, a = rest.split()
                sa = _parse_symbol(a, datum, env, lineno)
                moves.append(Move("expand", int(i), (sa.label, sa.degree), line=lineno))
            elif head == "axiom":
                segs = [s.strip() for s in rest.split(";")]
                lhs, _, rhs = segs[0].partition("->")
                i, count = (int(x) for x in lhs.split())
                new = tuple(_parse_symbol(t, datum, env, lineno) for t in rhs.split())
                sign, cite = 1, ""
                for s in segs[1:]:
                    key, _, val = s.partition(" ")
                    if key == "sign":
                        sign = eval_sign_expr(val, env)
                    elif key == "cite":
                        cite = val.strip()
                moves.append(Move("axiom", i, (count, new), sign, cite, line=lineno))
            elif head in ("undual", "dedual"):
                raise LedgerError("the double-dual identification is not allowed", line=lineno)
            else:
                raise LedgerError(f"unknown directive {head!r}", line=lineno)
        except LedgerError as exc:
            if exc.line is None:
                raise LedgerError(str(exc), exc.position, lineno) from exc
            raise
        except ValueError as exc:
            raise LedgerError(f"malformed directive: {raw.strip()!r}", line=lineno) from exc
    if start is None:
        raise LedgerError("ledger has no start word")
    return LedgerScript(name, start, SignLedger(tuple(moves), name), expect_word, expect_sign, env)


def load_ledger(path: str | Path, params: dict[str, int] | None = None,
                datum: GradingDatum | None = None) -> LedgerScript:
    p = Path(path)
    return parse_ledger(p.read_text(), params, datum, name=p.stem)
