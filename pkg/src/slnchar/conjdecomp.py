"""Constructive conjugation of γ ∈ SL_n(Z) into G_1^t · G_n · V_1.

The construction has four steps:

1. conjugate γ (by e_ij, i, j >= 2, and one s-matrix) until its first
   column is (k, 0, l, 0, ..., 0)^t;
2. left-multiply by γ1 ∈ G_n built from p k + q l = 1, giving (k, 1, l, 0, ...);
3. left-multiply by γ2 with (1, 2)-entry 1 - k, giving (1, 1, l, 0, ...);
4. left-multiply by γ3 ∈ V_1, giving e_1.

With γ4 = γ3 γ2 γ1 γ' ∈ G_1^t one has γ4 γ' γ4^-1 = γ4 (γ1^-1 γ2^-1) γ3^-1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exactmat import (
    DimensionError,
    IntMatrix,
    NotUnimodularError,
    SLMatrix,
    det,
    elementary,
    identity_key,
    s_matrix,
)
from .subgroups import CopySpec, is_in_copy, is_in_normalizer


class WitnessError(AssertionError):
    """A witness failed its own verification.  Always a bug."""


def _as_sl(gamma: IntMatrix) -> SLMatrix:
    if isinstance(gamma, SLMatrix):
        return gamma
    if det(gamma) != 1:
        raise NotUnimodularError("input matrix does not have determinant 1")
    return SLMatrix.trusted(gamma.n, gamma.entries)


def _from_updates(n: int, updates: dict[tuple[int, int], int]) -> SLMatrix:
    out = list(identity_key(n))
    for (i, j), v in updates.items():
        out[(i - 1) * n + (j - 1)] = v
    return SLMatrix.trusted(n, tuple(out))


def brenner_reduce(gamma: SLMatrix) -> tuple[SLMatrix, SLMatrix]:
    """Return (c, c γ c^-1) with first column (k, 0, l, 0, ..., 0)^t."""
    gamma = _as_sl(gamma)
    n = gamma.n
    if n < 3:
        raise DimensionError("need n >= 3")
    c = SLMatrix.identity(n)
    g = gamma
    while True:
        w = g.column(0)
        nz = [r for r in range(1, n) if w[r] != 0]
        if len(nz) <= 1:
            break
        j = min(nz, key=lambda r: (abs(w[r]), r))
        for i in nz:
            if i == j:
                continue
            q = w[i] // w[j]
            # row_i -= q row_j on column 1; e_ij^-q fixes e_1 so the conjugation
            # acts on the first column as this row operation.
            e = elementary(n, i + 1, j + 1, -q)
            g = e @ g @ elementary(n, i + 1, j + 1, q)
            c = e @ c
    w = g.column(0)
    nz = [r for r in range(1, n) if w[r] != 0]
    if nz and nz[0] != 2:
        # s_{3,r} sends e_r to +e_3
        s = s_matrix(n, 3, nz[0] + 1)
        g = s @ g @ s.inv()
        c = s @ c
    return c, g


def bezout_min_p(k: int, l: int) -> tuple[int, int]:
    """(p, q) with p k + q l = 1 and |p| minimal (ties: p >= 0)."""
    if l == 0:
        if k not in (1, -1):
            raise ValueError(f"gcd({k}, 0) != 1")
        return k, 0
    m = abs(l)
    if m == 1:
        p = 0
    else:
        p = pow(k % m, -1, m)
        if m - p < p:
            p -= m
    q, r = divmod(1 - p * k, l)
    if r:
        raise ValueError(f"gcd({k}, {l}) != 1")
    return p, q


@dataclass(frozen=True)
class DecompositionWitness:
    gamma: SLMatrix
    conjugator: SLMatrix
    factors: tuple[SLMatrix, ...]
    k: int
    l: int
    p: int
    q: int
    reduced: SLMatrix
    brenner_conjugator: SLMatrix
    steps: tuple[SLMatrix, SLMatrix, SLMatrix]

    @property
    def g1(self) -> SLMatrix:
        return self.factors[0]

    @property
    def g2(self) -> SLMatrix:
        return self.factors[1]

    @property
    def g3(self) -> SLMatrix:
        return self.factors[2]

    def product(self) -> SLMatrix:
        out = self.factors[0]
        for f in self.factors[1:]:
            out = out @ f
        return out

    def max_entry(self) -> int:
        return max(m.max_abs() for m in (self.conjugator, *self.factors))

    def verify(self) -> bool:
        n = self.gamma.n
        c = self.conjugator
        if c @ self.gamma @ c.inv() != self.product():
            return False
        if not is_in_normalizer(self.factors[0], CopySpec("row", 1)):
            return False
        if not is_in_normalizer(self.factors[1], CopySpec("col", n)):
            return False
        if len(self.factors) == 3 and not is_in_copy(self.factors[2], CopySpec("col", 1)):
            return False
        return True


def _steps(gamma: SLMatrix):
    n = gamma.n
    c0, g = brenner_reduce(gamma)
    k, l = g[0, 0], g[2, 0]
    p, q = bezout_min_p(k, l)
    gamma1 = _from_updates(n, {(2, 1): p, (2, 3): q})
    gamma2 = _from_updates(n, {(1, 2): 1 - k})
    gamma3 = _from_updates(n, {(2, 1): -1, (3, 1): -l})
    gamma4 = gamma3 @ gamma2 @ gamma1 @ g
    if gamma4.column(0) != [1] + [0] * (n - 1):
        raise WitnessError(f"first column of γ4 is {gamma4.column(0)}")
    return c0, g, k, l, p, q, gamma1, gamma2, gamma3, gamma4


def decompose(gamma: IntMatrix) -> DecompositionWitness:
    """c, g1 ∈ G_1^t, g2 ∈ G_n, g3 ∈ V_1 with c γ c^-1 = g1 g2 g3."""
    if gamma.n < 3:
        raise DimensionError("decomposition needs n >= 3")
    gamma = _as_sl(gamma)
    c0, g, k, l, p, q, gamma1, gamma2, gamma3, gamma4 = _steps(gamma)
    w = DecompositionWitness(
        gamma=gamma,
        conjugator=gamma4 @ c0,
        factors=(gamma4, gamma1.inv() @ gamma2.inv(), gamma3.inv()),
        k=k, l=l, p=p, q=q,
        reduced=g,
        brenner_conjugator=c0,
        steps=(gamma1, gamma2, gamma3),
    )
    if not w.verify():
        raise WitnessError(f"decomposition of {gamma} failed self-check")
    return w


def decompose_two_factor(gamma: IntMatrix) -> DecompositionWitness:
    """For n >= 4 the V_1 factor already lies in G_n and is absorbed into g2."""
    if gamma.n < 4:
        raise DimensionError("two-factor decomposition requires n >= 4")
    gamma = _as_sl(gamma)
    c0, g, k, l, p, q, gamma1, gamma2, gamma3, gamma4 = _steps(gamma)
    w = DecompositionWitness(
        gamma=gamma,
        conjugator=gamma4 @ c0,
        factors=(gamma4, gamma1.inv() @ gamma2.inv() @ gamma3.inv()),
        k=k, l=l, p=p, q=q,
        reduced=g,
        brenner_conjugator=c0,
        steps=(gamma1, gamma2, gamma3),
    )
    if not w.verify():
        raise WitnessError(f"two-factor decomposition of {gamma} failed self-check")
    return w


def alpha_beta_split(g3: SLMatrix, k: int) -> tuple[SLMatrix, SLMatrix]:
    """Split x^k g3 x^-k = α_k β with x = e_{2,n}.

    α_k carries k·a_n at (2, 1); β = g3.  (Conjugating the other way round,
    x^-k g3 x^k, gives α_{-k} β.)
    """
    n = g3.n
    if n < 3:
        raise DimensionError("need n >= 3")
    if not is_in_copy(g3, CopySpec("col", 1)):
        raise ValueError("g3 is not in V_1")
    a_n = g3[n - 1, 0]
    alpha = _from_updates(n, {(2, 1): k * a_n})
    return alpha, g3


def witness_to_json(w: DecompositionWitness) -> dict:
    from .exactmat import to_json

    return {
        "gamma": to_json(w.gamma),
        "conjugator": to_json(w.conjugator),
        "factors": [to_json(f) for f in w.factors],
        "k": str(w.k),
        "l": str(w.l),
        "p": str(w.p),
        "q": str(w.q),
        "reduced": to_json(w.reduced),
        "brenner_conjugator": to_json(w.brenner_conjugator),
        "steps": [to_json(s) for s in w.steps],
        "max_entry": str(w.max_entry()),
        "verified": w.verify(),
    }
