"""Copies of Z^{n-1} in SL_n(Z), their normalizers, centralizers of
elementary powers, word balls and the SL_2 x SL_2 block embedding."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal

from .exactmat import (
    DimensionError,
    Key,
    SLMatrix,
    diagonal,
    elementary,
    identity_key,
    inv_key,
    mod_reduce,
    mul_key,
    s_matrix,
    to_json,
)

DEFAULT_BALL_CAP = 10**7


class ResourceLimitError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class CopySpec:
    """`col` j is V_j (column j free), `row` i is V_i^t (row i free)."""

    kind: Literal["col", "row"]
    index: int

    def __post_init__(self):
        if self.kind not in ("col", "row"):
            raise ValueError(f"unknown copy kind {self.kind!r}")
        if self.index < 1:
            raise ValueError("copy index is 1-based")

    def check(self, n: int):
        if not 1 <= self.index <= n:
            raise IndexError(f"copy index {self.index} out of range for n={n}")

    def positions(self, n: int) -> list[tuple[int, int]]:
        """1-based (row, col) positions of the free entries, in coordinate order."""
        self.check(n)
        t = self.index
        if self.kind == "col":
            return [(i, t) for i in range(1, n + 1) if i != t]
        return [(t, j) for j in range(1, n + 1) if j != t]

    def generators(self, n: int) -> list[SLMatrix]:
        return [elementary(n, i, j) for i, j in self.positions(n)]

    def element(self, n: int, coords: Iterable[int]) -> SLMatrix:
        coords = list(coords)
        pos = self.positions(n)
        if len(coords) != len(pos):
            raise DimensionError(f"need {len(pos)} coordinates")
        out = list(identity_key(n))
        for (i, j), a in zip(pos, coords):
            out[(i - 1) * n + (j - 1)] = a
        return SLMatrix.trusted(n, tuple(out))

    def coordinates(self, m: SLMatrix) -> tuple[int, ...]:
        return tuple(m[i - 1, j - 1] for i, j in self.positions(m.n))

    def __str__(self):
        return f"V_{self.index}" if self.kind == "col" else f"V_{self.index}^t"


def all_copies(n: int) -> list[CopySpec]:
    return [CopySpec(k, i) for k in ("col", "row") for i in range(1, n + 1)]


def is_in_copy(m: SLMatrix, c: CopySpec) -> bool:
    n = m.n
    free = set(c.positions(n))
    for i in range(n):
        for j in range(n):
            v = m.entries[i * n + j]
            if i == j:
                if v != 1:
                    return False
            elif v != 0 and (i + 1, j + 1) not in free:
                return False
    return True


def copy_intersection(c1: CopySpec, c2: CopySpec, n: int) -> SLMatrix | None:
    """Generator of c1 ∩ c2 when it is infinite cyclic, else None (trivial)."""
    if c1 == c2:
        raise ValueError("copies must be distinct")
    c1.check(n)
    c2.check(n)
    if c1.kind == c2.kind:
        return None
    col, row = (c1, c2) if c1.kind == "col" else (c2, c1)
    if col.index == row.index:
        return None
    return elementary(n, row.index, col.index)


def is_in_normalizer(m: SLMatrix, c: CopySpec) -> bool:
    """G_j: j-th row is ±e_j^t.  G_i^t: i-th column is ±e_i."""
    c.check(m.n)
    t = c.index - 1
    line = m.row(t) if c.kind == "col" else m.column(t)
    eps = line[t]
    if eps not in (1, -1):
        return False
    return all(v == 0 for k, v in enumerate(line) if k != t)


def centralizes_elementary(m: SLMatrix, i: int, j: int, k: int) -> bool:
    """Pattern test: ±e_i as i-th column and the same sign times e_j^t as j-th row."""
    if i == j:
        raise ValueError("need i != j")
    if k == 0:
        raise ValueError("need k != 0")
    col = m.column(i - 1)
    row = m.row(j - 1)
    eps = col[i - 1]
    if eps not in (1, -1) or row[j - 1] != eps:
        return False
    return (all(v == 0 for r, v in enumerate(col) if r != i - 1)
            and all(v == 0 for r, v in enumerate(row) if r != j - 1))


def commutes(a: SLMatrix, b: SLMatrix) -> bool:
    return (a @ b) == (b @ a)


def conjugates_into_copy(m: SLMatrix, c: CopySpec) -> bool:
    """m g m^-1 ∈ copy for every generator g of the copy."""
    mi = m.inv()
    return all(is_in_copy(m @ g @ mi, c) for g in c.generators(m.n))


# Word balls.

@dataclass
class GroupBall:
    n: int
    radius: int
    elements: list[SLMatrix]
    lengths: list[int]
    index: dict[Key, int] = field(repr=False)
    central: bool = False

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[SLMatrix]:
        return iter(self.elements)

    def __contains__(self, m) -> bool:
        key = m.entries if isinstance(m, SLMatrix) else tuple(m)
        return key in self.index

    def position(self, m: SLMatrix) -> int:
        return self.index[m.entries]

    def length(self, m: SLMatrix) -> int:
        return self.lengths[self.index[m.entries]]

    def sub_ball(self, radius: int) -> "GroupBall":
        if radius > self.radius:
            raise ValueError("sub-ball radius exceeds ball radius")
        keep = [k for k, l in enumerate(self.lengths) if l <= radius]
        els = [self.elements[k] for k in keep]
        lens = [self.lengths[k] for k in keep]
        return GroupBall(self.n, radius, els, lens,
                         {e.entries: p for p, e in enumerate(els)}, self.central)


def generator_keys(n: int) -> list[Key]:
    """Symmetric generating set {e_ij^{±1}} in (i, j, sign) lexicographic order."""
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                for s in (1, -1):
                    g = list(identity_key(n))
                    g[i * n + j] = s
                    out.append(tuple(g))
    return out


def ball_enumerate(n: int, radius: int, cap: int = DEFAULT_BALL_CAP,
                   central: bool = False) -> GroupBall:
    """Breadth-first ball of word length <= radius in the elementary generators.

    With ``central=True`` the ball is saturated by the centre {±I} (even n
    only changes anything); each -g keeps the word length of g.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if n < 2:
        raise DimensionError("n must be >= 2")
    gens = generator_keys(n)
    ident = identity_key(n)
    index = {ident: 0}
    keys = [ident]
    lengths = [0]
    frontier = [ident]
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul_key(x, g, n)
                if y not in index:
                    index[y] = len(keys)
                    keys.append(y)
                    lengths.append(r)
                    nxt.append(y)
                    if len(keys) > cap:
                        raise ResourceLimitError(
                            f"ball n={n} radius={radius} exceeds cap of {cap} elements")
        frontier = nxt
    if central and n % 2 == 0:
        for p in range(len(keys)):
            y = tuple(-v for v in keys[p])
            if y not in index:
                index[y] = len(keys)
                keys.append(y)
                lengths.append(lengths[p])
        if len(keys) > cap:
            raise ResourceLimitError(f"centre-saturated ball exceeds cap of {cap} elements")
    elements = [SLMatrix.trusted(n, k) for k in keys]
    return GroupBall(n, radius, elements, lengths, index, central)


def ball_is_symmetric(ball: GroupBall) -> bool:
    return all(inv_key(m.entries, ball.n) in ball.index for m in ball.elements)


def ball_to_jsonl(ball: GroupBall) -> str:
    lines = []
    for m, l in zip(ball.elements, ball.lengths):
        obj = to_json(m)
        obj["length"] = l
        lines.append(json.dumps(obj))
    return "\n".join(lines) + "\n"


def ball_from_jsonl(text: str, radius: int | None = None, central: bool = False) -> GroupBall:
    els, lens = [], []
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        if "entries" not in obj:
            continue  # header line
        n = int(obj["n"])
        els.append(SLMatrix(n, tuple(int(x) for x in obj["entries"])))
        lens.append(int(obj["length"]))
    if not els:
        raise ValueError("empty ball file")
    n = els[0].n
    r = max(lens) if radius is None else radius
    return GroupBall(n, r, els, lens, {m.entries: p for p, m in enumerate(els)}, central)


# Brute-force lemma checks on balls.

@dataclass
class PatternReport:
    checked: int
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def normalizer_brute_check(ball: GroupBall, c: CopySpec) -> PatternReport:
    bad = []
    for m in ball.elements:
        if conjugates_into_copy(m, c) != is_in_normalizer(m, c):
            bad.append(m)
    return PatternReport(len(ball), bad)


def centralizer_brute_check(ball: GroupBall, ks: Iterable[int] = (1, 2)) -> PatternReport:
    n = ball.n
    ks = list(ks)
    powers = [(i, j, k, elementary(n, i, j, k))
              for i in range(1, n + 1) for j in range(1, n + 1) if i != j for k in ks]
    bad = []
    for m in ball.elements:
        for i, j, k, e in powers:
            if commutes(m, e) != centralizes_elementary(m, i, j, k):
                bad.append((m, (i, j, k)))
    return PatternReport(len(ball) * len(powers), bad)


def congruence_membership(m: SLMatrix, N: int) -> bool:
    return mod_reduce(m, N).is_identity()


def embed_sl2_pair(a: SLMatrix, b: SLMatrix) -> SLMatrix:
    """(a, b) -> diag(a, b) in SL_4(Z)."""
    if a.n != 2 or b.n != 2:
        raise DimensionError("both blocks must be 2x2")
    p, q, r, s = a.entries
    w, x, y, z = b.entries
    return SLMatrix.trusted(4, (p, q, 0, 0,
                                r, s, 0, 0,
                                0, 0, w, x,
                                0, 0, y, z))


def elementary_conjugator(n: int, kl: tuple[int, int], pq: tuple[int, int]) -> SLMatrix:
    """c with c e_kl c^-1 = e_pq (n >= 3).

    A product of s-matrices moves e_k, e_l to ±e_p, ±e_q; if the signs
    disagree, a diagonal matrix with two -1 entries (lexicographically first
    pair touching exactly one of p, q) fixes the sign.
    """
    if n < 3:
        raise DimensionError("elementary matrices are all conjugate only for n >= 3")
    k, l = kl
    p, q = pq
    if k == l or p == q:
        raise ValueError("need off-diagonal positions")
    c = SLMatrix.identity(n)

    def image(v: int) -> tuple[int, int]:
        col = c.column(v - 1)
        pos = next(r for r, x in enumerate(col) if x)
        return pos + 1, col[pos]

    if k != p:
        c = s_matrix(n, p, k) @ c
    pos, _ = image(l)
    if pos != q:
        c = s_matrix(n, q, pos) @ c
    _, sk = image(k)
    _, sl = image(l)
    if sk * sl == -1:
        pair = next((a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)
                    if (a in (p, q)) != (b in (p, q)))
        signs = [1] * n
        signs[pair[0] - 1] = signs[pair[1] - 1] = -1
        c = diagonal(signs) @ c
    return c
