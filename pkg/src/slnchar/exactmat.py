"""Exact integer and residue matrices.

Everything is stored row-major as tuples of Python ints, so entries never
overflow and values can be used directly as dictionary keys.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Key = tuple[int, ...]


class DimensionError(ValueError):
    pass


class NotUnimodularError(ValueError):
    pass


# Raw tuple kernels.  Used directly by the enumeration code paths.

def identity_key(n: int) -> Key:
    return tuple(1 if i == j else 0 for i in range(n) for j in range(n))


def mul_key(a: Key, b: Key, n: int) -> Key:
    cols = [b[j::n] for j in range(n)]
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for c in cols:
            out.append(sum(x * y for x, y in zip(row, c)))
    return tuple(out)


def mul_key_mod(a: Key, b: Key, n: int, N: int) -> Key:
    cols = [b[j::n] for j in range(n)]
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for c in cols:
            out.append(sum(x * y for x, y in zip(row, c)) % N)
    return tuple(out)


def det_key(a: Sequence[int], n: int) -> int:
    """Bareiss fraction-free elimination."""
    m = [list(a[i * n:(i + 1) * n]) for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mi = m[i]
            mk = m[k]
            for j in range(k + 1, n):
                mi[j] = (mi[j] * pivot - mi[k] * mk[j]) // prev
            mi[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def adjugate_key(a: Key, n: int) -> Key:
    """Transpose of the cofactor matrix, computed with exact minors."""
    if n == 1:
        return (1,)
    out = [0] * (n * n)
    for i in range(n):
        for j in range(n):
            minor = [a[r * n + c] for r in range(n) if r != i for c in range(n) if c != j]
            cof = det_key(minor, n - 1)
            out[j * n + i] = cof if (i + j) % 2 == 0 else -cof
    return tuple(out)


def inv_key(a: Key, n: int) -> Key:
    """Inverse of a determinant-one matrix."""
    if n == 2:
        p, q, r, s = a
        return (s, -q, -r, p)
    if n == 3:
        a0, a1, a2, a3, a4, a5, a6, a7, a8 = a
        return (
            a4 * a8 - a5 * a7, a2 * a7 - a1 * a8, a1 * a5 - a2 * a4,
            a5 * a6 - a3 * a8, a0 * a8 - a2 * a6, a2 * a3 - a0 * a5,
            a3 * a7 - a4 * a6, a1 * a6 - a0 * a7, a0 * a4 - a1 * a3,
        )
    return adjugate_key(a, n)


def elementary_key(n: int, i: int, j: int, k: int = 1) -> Key:
    """0-based indices."""
    out = list(identity_key(n))
    out[i * n + j] = k
    return tuple(out)


# Value types.

@dataclass(frozen=True)
class IntMatrix:
    n: int
    entries: Key

    def __post_init__(self):
        if self.n < 2:
            raise DimensionError(f"dimension must be >= 2, got {self.n}")
        if len(self.entries) != self.n * self.n:
            raise DimensionError(f"expected {self.n * self.n} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]):
        rows = [list(map(int, r)) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionError("matrix is not square")
        return cls(n, tuple(x for r in rows for x in r))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.n + j]

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def column(self, j: int) -> list[int]:
        return list(self.entries[j::self.n])

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.n:(i + 1) * self.n])

    @property
    def key(self) -> Key:
        return self.entries

    def max_abs(self) -> int:
        return max(abs(x) for x in self.entries)

    def __repr__(self):
        return f"{type(self).__name__}({self.rows()})"


@dataclass(frozen=True, repr=False)
class SLMatrix(IntMatrix):
    """Integer matrix with determinant exactly one."""

    def __post_init__(self):
        super().__post_init__()
        if det_key(self.entries, self.n) != 1:
            raise NotUnimodularError("determinant is not 1")

    @classmethod
    def trusted(cls, n: int, entries: Key) -> "SLMatrix":
        # Skips the determinant check; only for products/inverses of SL elements.
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "entries", entries)
        return obj

    @classmethod
    def identity(cls, n: int) -> "SLMatrix":
        return cls.trusted(n, identity_key(n))

    def __matmul__(self, other: "SLMatrix") -> "SLMatrix":
        return mat_mul(self, other)

    def inv(self) -> "SLMatrix":
        return mat_inv(self)

    def __neg__(self) -> "SLMatrix":
        if self.n % 2:
            raise NotUnimodularError("-A has determinant -1 in odd dimension")
        return SLMatrix.trusted(self.n, tuple(-x for x in self.entries))

    def __pow__(self, k: int) -> "SLMatrix":
        base = self if k >= 0 else self.inv()
        k = abs(k)
        out = SLMatrix.identity(self.n)
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return self.entries == identity_key(self.n)


@dataclass(frozen=True, repr=False)
class ResidueMatrix:
    n: int
    N: int
    entries: Key

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"modulus must be >= 2, got {self.N}")
        if len(self.entries) != self.n * self.n:
            raise DimensionError("wrong number of entries")
        if any(not 0 <= x < self.N for x in self.entries):
            raise ValueError("entries must be reduced to [0, N)")
        if det_key(self.entries, self.n) % self.N != 1 % self.N:
            raise NotUnimodularError(f"determinant is not 1 mod {self.N}")

    @classmethod
    def trusted(cls, n: int, N: int, entries: Key) -> "ResidueMatrix":
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "N", N)
        object.__setattr__(obj, "entries", entries)
        return obj

    @property
    def key(self) -> Key:
        return self.entries

    def __matmul__(self, other: "ResidueMatrix") -> "ResidueMatrix":
        if (self.n, self.N) != (other.n, other.N):
            raise DimensionError("dimension or modulus mismatch")
        return ResidueMatrix.trusted(self.n, self.N, mul_key_mod(self.entries, other.entries, self.n, self.N))

    def reduce(self, M: int) -> "ResidueMatrix":
        if self.N % M:
            raise ValueError(f"{M} does not divide {self.N}")
        return ResidueMatrix.trusted(self.n, M, tuple(x % M for x in self.entries))

    def is_identity(self) -> bool:
        return self.entries == identity_key(self.n)

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def __repr__(self):
        return f"ResidueMatrix(N={self.N}, {self.rows()})"


def _check_index(n: int, i: int, j: int):
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"indices ({i}, {j}) out of range for n={n}")
    if i == j:
        raise ValueError("elementary matrices need i != j")


def mat_mul(a: SLMatrix, b: SLMatrix) -> SLMatrix:
    if a.n != b.n:
        raise DimensionError(f"cannot multiply {a.n}x{a.n} by {b.n}x{b.n}")
    return SLMatrix.trusted(a.n, mul_key(a.entries, b.entries, a.n))


def mat_inv(a: SLMatrix) -> SLMatrix:
    return SLMatrix.trusted(a.n, inv_key(a.entries, a.n))


def det(a: IntMatrix) -> int:
    return det_key(a.entries, a.n)


def elementary(n: int, i: int, j: int, k: int = 1) -> SLMatrix:
    """e_ij^k with 1-based indices: unit diagonal and k at (i, j)."""
    _check_index(n, i, j)
    return SLMatrix.trusted(n, elementary_key(n, i - 1, j - 1, k))


def s_matrix(n: int, i: int, j: int) -> SLMatrix:
    """s_ij = e_ij e_ji^-1 e_ij; sends e_j to e_i and e_i to -e_j."""
    _check_index(n, i, j)
    e = elementary(n, i, j)
    return e @ elementary(n, j, i, -1) @ e


def diagonal(signs: Sequence[int]) -> SLMatrix:
    n = len(signs)
    out = [0] * (n * n)
    for i, s in enumerate(signs):
        out[i * n + i] = s
    return SLMatrix(n, tuple(out))


def conjugate(c: SLMatrix, g: SLMatrix) -> SLMatrix:
    """c g c^-1."""
    return c @ g @ c.inv()


def mod_reduce(a: IntMatrix, N: int) -> ResidueMatrix:
    if N < 2:
        raise ValueError(f"modulus must be >= 2, got {N}")
    return ResidueMatrix.trusted(a.n, N, tuple(x % N for x in a.entries))


def to_json(a: IntMatrix | ResidueMatrix) -> dict:
    out = {"n": a.n, "entries": [str(x) for x in a.entries]}
    if isinstance(a, ResidueMatrix):
        out["N"] = a.N
    return out


def from_json(obj: dict) -> SLMatrix | IntMatrix | ResidueMatrix:
    n = int(obj["n"])
    entries = tuple(int(x) for x in obj["entries"])
    if "N" in obj:
        return ResidueMatrix(n, int(obj["N"]), entries)
    if det_key(entries, n) == 1:
        return SLMatrix(n, entries)
    return IntMatrix(n, entries)
