"""Independent reference computations shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import sympy

from ainfcat.ainfty import Cochain
from ainfcat.bimod import BimoduleHom


def basis_chains(cat, max_len):
    for m in sorted(cat.morphisms, key=repr):
        for s in range(max_len + 1):
            for cs in cat.words(cat.tgt(m), s):
                end = cat.tgt(cs[-1]) if cs else cat.tgt(m)
                if end == cat.src(m):
                    yield (m, tuple(cs))


def basis_cochains(cat, max_len):
    for obj, w in cat.all_words(max_len):
        a, z = cat.endpoints(obj, w)
        for k in cat.hom_keys(a, z):
            par = (cat.par(k) + sum(cat.par(x) for x in w)) % 2
            yield Cochain(cat, cat.value_space, par, {(obj, w): {k: cat.ring.one}})


def random_cochain(cat, parity, max_len, rnd, density=0.4, min_len=0):
    table = {}
    for obj, w in cat.all_words(max_len, min_len):
        a, z = cat.endpoints(obj, w)
        outs = [k for k in cat.hom_keys(a, z) if (cat.par(k) + sum(cat.par(x) for x in w)) % 2 == parity]
        vec = {k: cat.ring.scalar(rnd.choice([1, -1, 2, 3])) for k in outs if rnd.random() < density}
        if vec:
            table[(obj, w)] = vec
    return Cochain(cat, cat.value_space, parity, table)


def random_bimodule_hom(M, N, parity, max_len, rnd, density=0.4):
    cat = M.left
    table = {}
    for _, lw, m, rw in M.cells(max_len):
        a = cat.src(lw[0]) if lw else M.src(m)
        e = cat.tgt(rw[-1]) if rw else M.tgt(m)
        outs = [n for n in N.keys_between(a, e)
                if (N.par(n) + M.par(m) + sum(cat.par(x) for x in lw + rw)) % 2 == parity]
        vec = {n: cat.ring.scalar(rnd.choice([1, -1, 2])) for n in outs if rnd.random() < density}
        if vec:
            table[(lw, m, rw)] = vec
    return BimoduleHom(M, N, parity, table)


# -- braces by direct interleaving


def _apply(cochain, obj, word):
    v = cochain.table.get((obj, tuple(word)))
    return dict(v) if v else {}


def brace_oracle(psi, phis, cat, max_len):
    """``psi{phi_1, ..., phi_k}`` summed over block placements with the Koszul sign of each phi passing inputs."""
    out = {}
    k = len(phis)
    for obj, word in cat.all_words(max_len):
        objs = cat.objects_along(obj, word)
        n = len(word)
        total = {}
        # choose start positions and block lengths
        for starts in itertools.combinations_with_replacement(range(n + 1), k):
            for lens in itertools.product(range(n + 1), repeat=k):
                ok, pos, blocks = True, 0, []
                for s, ln in zip(starts, lens):
                    if s < pos or s + ln > n:
                        ok = False
                        break
                    blocks.append((s, ln))
                    pos = s + ln
                if not ok:
                    continue
                # leading/between/trailing letters stay
                sign = 1
                for (s, _), phi in zip(blocks, phis):
                    before = sum(cat.par(x) for x in word[:s])
                    if phi.parity and before % 2:
                        sign = -sign
                # expand phi outputs
                choices = []
                for (s, ln), phi in zip(blocks, phis):
                    v = _apply(phi, objs[s], word[s:s + ln])
                    choices.append(list(v.items()))
                for pick in itertools.product(*choices):
                    new, coeff, pos = [], cat.ring.scalar(sign), 0
                    for (s, ln), (key, c) in zip(blocks, pick):
                        new += list(word[pos:s]) + [key]
                        coeff = coeff * c
                        pos = s + ln
                    new += list(word[pos:])
                    for z, c in _apply(psi, obj, new).items():
                        total[z] = total.get(z, cat.ring.zero) + coeff * c
        total = {z: c for z, c in total.items() if c}
        if total:
            out[(obj, tuple(word))] = total
    return out


# -- classical Hochschild ranks of an ungraded algebra, straight from its multiplication table


def _mult(table, basis):
    idx = {b: i for i, b in enumerate(basis)}
    m = [[[Fraction(0)] * len(basis) for _ in basis] for _ in basis]
    for (a, b), v in table.items():
        for c, x in v.items():
            m[idx[a]][idx[b]][idx[c]] = Fraction(x)
    return m


def classical_hh(table, basis, kind, degrees):
    """Ranks of ``HH^k`` (cochains) or ``HH_k`` (chains) using the bar complex truncated at the needed lengths."""
    m = _mult(table, basis)
    d = len(basis)

    def tuples(n):
        return list(itertools.product(range(d), repeat=n))

    def cochain_matrix(n):
        # delta: Hom(A^n, A) -> Hom(A^{n+1}, A)
        src = [(t, z) for t in tuples(n) for z in range(d)]
        tgt = [(t, z) for t in tuples(n + 1) for z in range(d)]
        col = {x: i for i, x in enumerate(src)}
        row = {x: i for i, x in enumerate(tgt)}
        M = sympy.zeros(len(tgt), len(src))
        for t, z in src:
            j = col[(t, z)]
            for a in tuples(n + 1):
                # (df)(a_1..a_{n+1}) = a_1 f(a_2..) + sum (-1)^i f(.. a_i a_{i+1} ..) + (-1)^{n+1} f(..a_n) a_{n+1}
                if a[1:] == t:
                    for y in range(d):
                        if m[a[0]][z][y]:
                            M[row[(a, y)], j] += m[a[0]][z][y]
                for i in range(n):
                    for c in range(d):
                        x = m[a[i]][a[i + 1]][c]
                        if x and a[:i] + (c,) + a[i + 2:] == t:
                            M[row[(a, z)], j] += (-1) ** (i + 1) * x
                if a[:-1] == t:
                    for y in range(d):
                        if m[z][a[-1]][y]:
                            M[row[(a, y)], j] += (-1) ** (n + 1) * m[z][a[-1]][y]
        return M

    def chain_matrix(n):
        # b: A (x) A^n -> A (x) A^{n-1}
        src = [(z, t) for z in range(d) for t in tuples(n)]
        tgt = [(z, t) for z in range(d) for t in tuples(n - 1)]
        col = {x: i for i, x in enumerate(src)}
        row = {x: i for i, x in enumerate(tgt)}
        M = sympy.zeros(len(tgt), len(src))
        for z, t in src:
            j = col[(z, t)]
            for y in range(d):
                if m[z][t[0]][y]:
                    M[row[(y, t[1:])], j] += m[z][t[0]][y]
            for i in range(n - 1):
                for c in range(d):
                    x = m[t[i]][t[i + 1]][c]
                    if x:
                        M[row[(z, t[:i] + (c,) + t[i + 2:])], j] += (-1) ** (i + 1) * x
            for y in range(d):
                if m[t[-1]][z][y]:
                    M[row[(y, t[:-1])], j] += (-1) ** n * m[t[-1]][z][y]
        return M

    ranks = {}
    for k in degrees:
        if kind == "cohomology":
            dim = d ** (k + 1)
            out = cochain_matrix(k).rank()
            inn = cochain_matrix(k - 1).rank() if k > 0 else 0
        else:
            dim = d ** (k + 1)
            out = chain_matrix(k).rank() if k > 0 else 0
            inn = chain_matrix(k + 1).rank()
        ranks[k] = dim - out - inn
    return ranks


def seeded(seed):
    return random.Random(seed)


def sign_isomorphism(cat, other):
    """A basis rescaling by signs carrying ``cat.mu`` to ``other.mu``, or ``None``."""
    keys = sorted(cat.morphisms, key=repr)
    for signs in itertools.product((1, -1), repeat=len(keys)):
        s = dict(zip(keys, signs))
        moved = {}
        for (obj, word), vec in cat.mu.table.items():
            pre = 1
            for w in word:
                pre *= s[w]
            moved[(obj, word)] = {z: c * (pre * s[z]) for z, c in vec.items()}
        if moved == {k: dict(v) for k, v in other.mu.table.items()}:
            return s
    return None
