"""Congruence quotients SL_n(Z/N): enumeration, conjugacy classes,
Burnside-Dixon character tables, lifted characters and the Tits
containment check."""
from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product

import numpy as np

from . import modp
from .exactmat import (
    IntMatrix,
    Key,
    ResidueMatrix,
    SLMatrix,
    det_key,
    elementary_key,
    identity_key,
    inv_key,
    mul_key_mod,
)
from .subgroups import ResourceLimitError

DEFAULT_GROUP_CAP = 10**7
ORTHO_TOL = 1e-9


def prime_factors(N: int) -> list[int]:
    out, d = [], 2
    while d * d <= N:
        if N % d == 0:
            out.append(d)
            while N % d == 0:
                N //= d
        d += 1
    if N > 1:
        out.append(N)
    return out


def sl_order(n: int, N: int) -> int:
    """|SL_n(Z/N)| = N^(n^2-1) prod_{p | N} prod_{i=2..n} (1 - p^-i)."""
    out = Fraction(N ** (n * n - 1))
    for p in prime_factors(N):
        for i in range(2, n + 1):
            out *= 1 - Fraction(1, p**i)
    assert out.denominator == 1
    return int(out)


def _reduce_key(a: Key, N: int) -> Key:
    return tuple(x % N for x in a)


def inv_key_mod(a: Key, n: int, N: int) -> Key:
    return _reduce_key(inv_key(a, n), N)


@dataclass
class FiniteGroup:
    n: int
    N: int
    keys: list[Key]
    index: dict[Key, int] = field(repr=False)
    generators: list[Key]

    @property
    def order(self) -> int:
        return len(self.keys)

    def __len__(self):
        return len(self.keys)

    def element(self, i: int) -> ResidueMatrix:
        return ResidueMatrix.trusted(self.n, self.N, self.keys[i])

    @property
    def elements(self) -> list[ResidueMatrix]:
        return [self.element(i) for i in range(len(self.keys))]

    def mul(self, a: Key, b: Key) -> Key:
        return mul_key_mod(a, b, self.n, self.N)

    def inv(self, a: Key) -> Key:
        return inv_key_mod(a, self.n, self.N)

    def position_of(self, m) -> int:
        if isinstance(m, (IntMatrix, ResidueMatrix)):
            m = m.entries
        pos = self.index.get(_reduce_key(m, self.N))
        if pos is None:
            raise ValueError(f"matrix does not reduce into SL_{self.n}(Z/{self.N})")
        return pos

    def element_order(self, a: Key) -> int:
        ident = identity_key(self.n)
        x, k = a, 1
        while x != ident:
            x = self.mul(x, a)
            k += 1
        return k


def closure(n: int, N: int, generators: list[Key], cap: int = DEFAULT_GROUP_CAP) -> FiniteGroup:
    """Breadth-first closure of the generators inside SL_n(Z/N)."""
    ident = identity_key(n)
    index = {ident: 0}
    keys = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = mul_key_mod(x, g, n, N)
                if y not in index:
                    index[y] = len(keys)
                    keys.append(y)
                    nxt.append(y)
                    if len(keys) > cap:
                        raise ResourceLimitError(
                            f"group closure in SL_{n}(Z/{N}) exceeds cap of {cap} elements")
        frontier = nxt
    return FiniteGroup(n, N, keys, index, list(generators))


def elementary_generators(n: int, N: int, power: int = 1) -> list[Key]:
    return [_reduce_key(elementary_key(n, i, j, power), N)
            for i in range(n) for j in range(n) if i != j]


def enumerate_group(n: int, N: int, cap: int = DEFAULT_GROUP_CAP) -> FiniteGroup:
    if N < 2:
        raise ValueError("modulus must be >= 2")
    return closure(n, N, elementary_generators(n, N), cap)


@dataclass
class ConjugacyClasses:
    reps: list[Key]
    sizes: list[int]
    class_of: list[int] = field(repr=False)
    members: list[list[int]] = field(repr=False)

    def __len__(self):
        return len(self.reps)


def conjugacy_classes(g: FiniteGroup) -> ConjugacyClasses:
    n, N = g.n, g.N
    gens = [(x, inv_key_mod(x, n, N)) for x in g.generators]
    label = [-1] * len(g)
    raw = []
    for start in range(len(g)):
        if label[start] >= 0:
            continue
        cid = len(raw)
        label[start] = cid
        orbit = [start]
        stack = [g.keys[start]]
        while stack:
            x = stack.pop()
            for a, ai in gens:
                y = mul_key_mod(mul_key_mod(a, x, n, N), ai, n, N)
                j = g.index[y]
                if label[j] < 0:
                    label[j] = cid
                    orbit.append(j)
                    stack.append(y)
        raw.append(orbit)
    reps = [min(g.keys[i] for i in orbit) for orbit in raw]
    order = sorted(range(len(raw)), key=lambda c: (len(raw[c]), reps[c]))
    relabel = {old: new for new, old in enumerate(order)}
    return ConjugacyClasses(
        reps=[reps[c] for c in order],
        sizes=[len(raw[c]) for c in order],
        class_of=[relabel[c] for c in label],
        members=[sorted(raw[c]) for c in order],
    )


def dixon_prime(order: int, exponent: int) -> int:
    """Smallest prime p > 2 sqrt(|G|) with p = 1 mod exp(G)."""
    p = exponent + 1
    while p * p <= 4 * order or not modp.is_prime(p):
        p += exponent
    return p


def class_matrices(g: FiniteGroup, cc: ConjugacyClasses) -> list[list[list[int]]]:
    """M[r][s][t] = #{x in C_r : x^-1 g_t in C_s}, so ω_r ω = M_r ω."""
    k = len(cc)
    inv_class = [cc.class_of[g.index[g.inv(rep)]] for rep in cc.reps]
    M = [[[0] * k for _ in range(k)] for _ in range(k)]
    for pos, u in enumerate(g.keys):
        r = inv_class[cc.class_of[pos]]  # u = x^-1 with x in C_r
        Mr = M[r]
        for t, gt in enumerate(cc.reps):
            s = cc.class_of[g.index[g.mul(u, gt)]]
            Mr[s][t] += 1
    return M


def _common_eigenvectors(M: list[list[list[int]]], p: int) -> list[list[int]]:
    k = len(M)
    spaces = [[[int(i == j) for j in range(k)] for i in range(k)]]
    for Mr in M:
        if all(len(W) == 1 for W in spaces):
            break
        nxt = []
        for W in spaces:
            if len(W) == 1:
                nxt.append(W)
                continue
            B, piv = modp.rref(W, p)
            d = len(B)
            # coordinates of M_r b_i in the basis B
            R = []
            for b in B:
                w = [sum(Mr[s][t] * b[t] for t in range(k)) % p for s in range(k)]
                R.append([w[c] for c in piv])
            found = 0
            for lam in modp.charpoly_roots(R, p):
                A = [[(R[i][j] - (lam if i == j else 0)) % p for i in range(d)] for j in range(d)]
                coeffs = modp.nullspace(A, p)
                if not coeffs:
                    continue
                sub = [[sum(c[i] * B[i][t] for i in range(d)) % p for t in range(k)] for c in coeffs]
                nxt.append(modp.rref(sub, p)[0])
                found += len(coeffs)
            if found != d:
                raise ArithmeticError("class matrix not diagonalisable over the chosen prime")
        spaces = nxt
    if any(len(W) != 1 for W in spaces):
        raise ArithmeticError("class matrices did not separate the characters")
    return [W[0] for W in spaces]


@dataclass
class CharacterTable:
    n: int
    N: int
    order: int
    class_reps: list[Key]
    class_sizes: list[int]
    values: np.ndarray  # characters x classes, complex
    degrees: list[int]
    prime: int | None = None
    exponent: int | None = None
    group: FiniteGroup | None = field(default=None, repr=False)
    classes: ConjugacyClasses | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.degrees)

    def attach(self, group: FiniteGroup | None = None) -> None:
        """Bind the table to an enumerated group so elements can be looked up."""
        if self.group is not None:
            return
        group = group or enumerate_group(self.n, self.N)
        cc = conjugacy_classes(group)
        if cc.reps != self.class_reps:
            raise ValueError("class representatives do not match the group")
        self.group, self.classes = group, cc

    def class_index(self, m) -> int:
        self.attach()
        return self.classes.class_of[self.group.position_of(m)]

    def orthogonality_errors(self) -> tuple[float, float]:
        X = self.values
        h = np.array(self.class_sizes, dtype=float)
        rows = (X * h) @ X.conj().T / self.order
        row_err = np.abs(rows - np.eye(len(h))).max()
        cols = X.conj().T @ X
        col_err = np.abs(cols - np.diag(self.order / h)).max()
        return float(row_err), float(col_err)

    def check(self, tol: float = ORTHO_TOL) -> None:
        k = len(self.class_sizes)
        if self.values.shape != (k, k):
            raise ArithmeticError("number of irreducibles differs from number of classes")
        if sum(d * d for d in self.degrees) != self.order:
            raise ArithmeticError("sum of squared degrees differs from |G|")
        if any(self.order % d for d in self.degrees):
            raise ArithmeticError("a degree does not divide |G|")
        if sum(self.class_sizes) != self.order:
            raise ArithmeticError("class sizes do not sum to |G|")
        row_err, col_err = self.orthogonality_errors()
        if row_err > tol or col_err > tol:
            raise ArithmeticError(f"orthogonality violated: rows {row_err:.2e}, columns {col_err:.2e}")

    def to_json(self) -> dict:
        return {
            "group": {"n": self.n, "N": self.N, "order": self.order},
            "classes": [{"rep": {"n": self.n, "N": self.N, "entries": [str(x) for x in r]},
                         "size": s} for r, s in zip(self.class_reps, self.class_sizes)],
            "degrees": list(self.degrees),
            "characters": [[[float(z.real), float(z.imag)] for z in row] for row in self.values],
            "prime": self.prime,
            "exponent": self.exponent,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CharacterTable":
        grp = obj["group"]
        vals = np.array([[complex(re, im) for re, im in row] for row in obj["characters"]])
        return cls(
            n=int(grp["n"]), N=int(grp["N"]), order=int(grp["order"]),
            class_reps=[tuple(int(x) for x in c["rep"]["entries"]) for c in obj["classes"]],
            class_sizes=[int(c["size"]) for c in obj["classes"]],
            values=vals,
            degrees=[int(d) for d in obj["degrees"]],
            prime=obj.get("prime"), exponent=obj.get("exponent"),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["character", "degree"] + [f"class{c}(size={s})" for c, s in enumerate(self.class_sizes)])
        for i, row in enumerate(self.values):
            w.writerow([i, self.degrees[i]] + [_fmt_complex(z) for z in row])
        return buf.getvalue()


def _fmt_complex(z: complex) -> str:
    re = 0.0 if abs(z.real) < 1e-12 else z.real
    im = 0.0 if abs(z.imag) < 1e-12 else z.imag
    return f"{re:.12g}" if im == 0 else f"{re:.12g}{im:+.12g}j"


def character_table(g: FiniteGroup, cc: ConjugacyClasses | None = None,
                    prime_bound: int = 10**7) -> CharacterTable:
    """Burnside-Dixon: common eigenvectors of the class matrices over F_p,
    then lift the modular values to sums of complex roots of unity."""
    cc = cc or conjugacy_classes(g)
    order, k = len(g), len(cc)
    ident = identity_key(g.n)
    id_class = cc.class_of[g.index[ident]]
    orders = [g.element_order(r) for r in cc.reps]
    exponent = reduce(math.lcm, orders, 1)
    p = dixon_prime(order, exponent)
    if p > prime_bound:
        raise ArithmeticError(f"no splitting prime below {prime_bound} (smallest is {p})")
    z = modp.primitive_root(p)
    inv_class = [cc.class_of[g.index[g.inv(r)]] for r in cc.reps]

    # power maps: pow_class[t][l] = class of g_t^l
    pow_class = []
    for rep, o in zip(cc.reps, orders):
        row, x = [], ident
        for _ in range(o):
            row.append(cc.class_of[g.index[x]])
            x = g.mul(x, rep)
        pow_class.append(row)

    M = class_matrices(g, cc)
    vectors = _common_eigenvectors(M, p)

    chars = []
    for v in vectors:
        scale = pow(v[id_class], -1, p)
        omega = [x * scale % p for x in v]
        S = sum(omega[r] * omega[inv_class[r]] * pow(cc.sizes[r], -1, p) for r in range(k)) % p
        target = order * pow(S, -1, p) % p
        deg = next((d for d in range(1, math.isqrt(order) + 1) if d * d % p == target), None)
        if deg is None:
            raise ArithmeticError("no integer degree matches the modular data")
        chi_mod = [deg * omega[t] * pow(cc.sizes[t], -1, p) % p for t in range(k)]
        row = []
        for t in range(k):
            o = orders[t]
            zeta = pow(z, (p - 1) // o, p)
            o_inv = pow(o, -1, p)
            val = 0j
            for j in range(o):
                m = sum(chi_mod[pow_class[t][l]] * pow(zeta, (-j * l) % o, p) for l in range(o)) * o_inv % p
                if m > deg:
                    raise ArithmeticError("eigenvalue multiplicity out of range; prime does not split")
                if m:
                    val += m * cmath.exp(2j * math.pi * j / o)
            row.append(val)
        chars.append((deg, row))

    def sort_key(item):
        deg, row = item
        return (deg, [(-round(z.real, 9), -round(z.imag, 9)) for z in row])

    chars.sort(key=sort_key)
    table = CharacterTable(
        n=g.n, N=g.N, order=order,
        class_reps=list(cc.reps), class_sizes=list(cc.sizes),
        values=np.array([row for _, row in chars], dtype=complex),
        degrees=[d for d, _ in chars],
        prime=p, exponent=exponent, group=g, classes=cc,
    )
    table.check()
    return table


@dataclass
class LiftedCharacter:
    """γ ↦ χ(γ mod N) / χ(1) on SL_n(Z)."""

    table: CharacterTable
    row: int

    @property
    def level(self) -> int:
        return self.table.N

    @property
    def degree(self) -> int:
        return self.table.degrees[self.row]

    def __call__(self, gamma: SLMatrix) -> complex:
        return complex(self.table.values[self.row, self.table.class_index(gamma)]) / self.degree


def lift_character(t: CharacterTable, row: int, N: int | None = None) -> LiftedCharacter:
    if not 0 <= row < len(t):
        raise IndexError(f"character row {row} out of range")
    if N is not None and N != t.N:
        raise ValueError(f"table is for level {t.N}, not {N}")
    t.attach()
    return LiftedCharacter(t, row)


@dataclass
class TitsReport:
    n: int
    base: int
    modulus: int
    subgroup_order: int
    kernel_order: int
    contained: bool
    missing: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def congruence_kernel(n: int, M: int, L: int, cap: int = DEFAULT_GROUP_CAP) -> list[Key]:
    """Kernel of SL_n(Z/M) -> SL_n(Z/L), L | M, by direct enumeration."""
    if M % L:
        raise ValueError(f"{L} does not divide {M}")
    span = M // L
    if span ** (n * n) > cap:
        raise ResourceLimitError("kernel candidate count exceeds cap")
    ident = identity_key(n)
    out = []
    for xs in product(range(span), repeat=n * n):
        a = tuple((i + L * x) % M for i, x in zip(ident, xs))
        if det_key(a, n) % M == 1 % M:
            out.append(a)
    return out


def tits_containment_check(n: int, N: int, M: int, cap: int = DEFAULT_GROUP_CAP) -> TitsReport:
    """Does <e_ij^N mod M> contain the kernel of SL_n(Z/M) -> SL_n(Z/N^2)?"""
    if M % (N * N):
        raise ValueError("M must be a multiple of N^2")
    H = closure(n, M, elementary_generators(n, M, power=N), cap)
    K = congruence_kernel(n, M, N * N, cap)
    missing = sum(1 for a in K if a not in H.index)
    return TitsReport(n, N, M, len(H), len(K), missing == 0, missing)


def table_to_json_text(t: CharacterTable) -> str:
    return json.dumps(t.to_json(), sort_keys=True)
