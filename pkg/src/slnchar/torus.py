"""Finite SL_m(Z)-orbits on the torus (Q/Z)^m, Fourier transforms of
their uniform measures, and convex fits of sampled positive-definite
functions on Z^m."""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .subgroups import ResourceLimitError

DEFAULT_POINT_CAP = 10**6

Vector = tuple[int, ...]


@dataclass(frozen=True, order=True)
class TorusPoint:
    """x = numerators / denominator in lowest terms, numerators in [0, denominator)."""

    denominator: int
    numerators: Vector

    @classmethod
    def make(cls, numerators: Sequence[int], N: int) -> "TorusPoint":
        if N < 1:
            raise ValueError("denominator must be >= 1")
        nums = [x % N for x in numerators]
        g = math.gcd(N, *nums)
        return cls(N // g, tuple(x // g for x in nums))

    @property
    def m(self) -> int:
        return len(self.numerators)


@dataclass(frozen=True)
class TorusOrbit:
    m: int
    denominator: int
    points: tuple[Vector, ...]  # numerators over `denominator`, sorted

    @property
    def size(self) -> int:
        return len(self.points)

    def sort_key(self):
        return (self.denominator, self.size, self.points[0])

    def torus_points(self) -> list[TorusPoint]:
        return [TorusPoint(self.denominator, p) for p in self.points]

    def __contains__(self, x: TorusPoint) -> bool:
        return x.denominator == self.denominator and x.numerators in set(self.points)

    def to_json(self) -> dict:
        return {"size": self.size, "denominator": self.denominator,
                "points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, obj: dict, m: int) -> "TorusOrbit":
        pts = tuple(sorted(tuple(int(x) for x in p) for p in obj["points"]))
        return cls(m, int(obj["denominator"]), pts)


def _act(x: Vector, i: int, j: int, sign: int, N: int) -> Vector:
    # e_ij^sign acting on a column vector: x_i += sign * x_j
    y = list(x)
    y[i] = (y[i] + sign * y[j]) % N
    return tuple(y)


def finite_orbits(m: int, N: int, cap: int = DEFAULT_POINT_CAP) -> list[TorusOrbit]:
    """Partition of the N-torsion points of (Q/Z)^m into SL_m(Z)-orbits."""
    if N < 1:
        raise ValueError("denominator must be >= 1")
    if m < 1:
        raise ValueError("dimension must be >= 1")
    if N**m > cap:
        raise ResourceLimitError(f"{N}^{m} torsion points exceed cap of {cap}")
    moves = [(i, j, s) for i in range(m) for j in range(m) if i != j for s in (1, -1)]
    seen: set[Vector] = set()
    orbits = []
    for start in product(range(N), repeat=m):
        if start in seen:
            continue
        seen.add(start)
        orbit = [start]
        stack = [start]
        while stack:
            x = stack.pop()
            for i, j, s in moves:
                y = _act(x, i, j, s, N)
                if y not in seen:
                    seen.add(y)
                    orbit.append(y)
                    stack.append(y)
        d = N // math.gcd(N, *orbit[0])
        pts = tuple(sorted(tuple(c * d // N for c in x) for x in orbit))
        orbits.append(TorusOrbit(m, d, pts))
    orbits.sort(key=TorusOrbit.sort_key)
    return orbits


def orbits_up_to(m: int, N_max: int, cap: int = DEFAULT_POINT_CAP) -> list[TorusOrbit]:
    """All finite orbits whose points have exact denominator <= N_max."""
    out = []
    for d in range(1, N_max + 1):
        out.extend(o for o in finite_orbits(m, d, cap) if o.denominator == d)
    out.sort(key=TorusOrbit.sort_key)
    return out


def orbit_fourier(o: TorusOrbit, v: Sequence[int]) -> complex:
    """(1/|O|) sum_{x in O} exp(2πi <x, v>)."""
    if len(v) != o.m:
        raise ValueError(f"vector has length {len(v)}, orbit lives in dimension {o.m}")
    return complex(orbit_fourier_many(o, [tuple(v)])[0])


def orbit_fourier_many(o: TorusOrbit, vs: Sequence[Sequence[int]]) -> np.ndarray:
    P = np.array(o.points, dtype=np.int64).reshape(o.size, o.m)
    V = np.array(vs, dtype=np.int64).reshape(len(vs), o.m)
    # reduce the pairing mod the denominator before going to floating point
    phase = (P @ V.T) % o.denominator
    return np.exp(2j * np.pi * phase / o.denominator).mean(axis=0)


def lattice_box(m: int, radius: int) -> list[Vector]:
    return list(product(range(-radius, radius + 1), repeat=m))


def random_sl_word(m: int, length: int, rng: random.Random) -> np.ndarray:
    A = np.eye(m, dtype=np.int64)
    for _ in range(length):
        i, j = rng.sample(range(m), 2)
        E = np.eye(m, dtype=np.int64)
        E[i, j] = rng.choice((1, -1))
        A = A @ E
    return A


@dataclass
class InvarianceReport:
    trials: int
    max_deviation: float
    worst: tuple | None = None

    def passed(self, tol: float = 1e-12) -> bool:
        return self.max_deviation <= tol


def sl_invariance_check(o: TorusOrbit, trials: int = 100, rng: random.Random | None = None,
                        word_length: int = 6, box: int = 5,
                        matrices: Sequence[np.ndarray] | None = None) -> InvarianceReport:
    """max |ψ_O(A v) - ψ_O(v)| over random short words A and random v."""
    rng = rng or random.Random(0)
    worst, dev = None, 0.0
    for t in range(trials):
        if matrices is not None:
            A = np.asarray(matrices[t % len(matrices)], dtype=np.int64)
        elif o.m == 1:
            A = np.eye(1, dtype=np.int64)
        else:
            A = random_sl_word(o.m, rng.randint(1, word_length), rng)
        v = np.array([rng.randint(-box, box) for _ in range(o.m)], dtype=np.int64)
        a, b = orbit_fourier_many(o, [tuple(A @ v), tuple(v)])
        d = abs(a - b)
        if d > dev or worst is None:
            dev, worst = max(dev, d), (A.tolist(), v.tolist())
    return InvarianceReport(trials, float(dev), worst)


# Convex fitting.

def project_simplex(x: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {t >= 0, sum t = 1}."""
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, len(x) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(x - theta, 0.0)


def simplex_lstsq(A: np.ndarray, y: np.ndarray, tol: float = 1e-12,
                  max_iter: int = 100_000) -> tuple[np.ndarray, int]:
    """min ||A t - y||^2 over the probability simplex.

    Accelerated projected gradient, followed by an exact solve of the
    equality-constrained problem on the detected support.
    """
    k = A.shape[1]
    H = A.T @ A
    b = A.T @ y
    L = float(np.linalg.eigvalsh(H).max()) or 1.0
    t = np.full(k, 1.0 / k)
    z, s = t.copy(), 1.0
    it = 0
    for it in range(1, max_iter + 1):
        t_new = project_simplex(z - (H @ z - b) / L)
        s_new = (1 + math.sqrt(1 + 4 * s * s)) / 2
        if _objective(H, b, t_new) > _objective(H, b, t):
            # restart momentum on a non-monotone step
            z, s_new = t_new.copy(), 1.0
        else:
            z = t_new + ((s - 1) / s_new) * (t_new - t)
        step = np.abs(t_new - t).max()
        t, s = t_new, s_new
        if step < tol:
            break
    return _polish(A, y, t), it


def _objective(H, b, t):
    return float(t @ H @ t - 2 * b @ t)


def _polish(A: np.ndarray, y: np.ndarray, t: np.ndarray) -> np.ndarray:
    H, b = A.T @ A, A.T @ y
    best = t
    best_res = np.linalg.norm(A @ t - y)
    support = t > 1e-9
    for _ in range(len(t)):
        idx = np.nonzero(support)[0]
        if len(idx) == 0:
            break
        # KKT system for min |A t - y|^2 on the support with sum t = 1
        K = np.zeros((len(idx) + 1, len(idx) + 1))
        K[:-1, :-1] = 2 * H[np.ix_(idx, idx)]
        K[:-1, -1] = 1.0
        K[-1, :-1] = 1.0
        rhs = np.concatenate([2 * b[idx], [1.0]])
        sol = np.linalg.lstsq(K, rhs, rcond=None)[0][:-1]
        if (sol >= -1e-14).all():
            cand = np.zeros_like(t)
            cand[idx] = np.maximum(sol, 0.0)
            cand /= cand.sum()
            if np.linalg.norm(A @ cand - y) <= best_res * (1 + 1e-9) + 1e-15:
                best = cand
            break
        support[idx[sol < 0]] = False
    return best


@dataclass
class MeasureFit:
    t_inf: float
    t: np.ndarray
    residual: float
    orbits: list[TorusOrbit] = field(repr=False)
    iterations: int = 0

    def coefficient(self, orbit: TorusOrbit) -> float:
        return float(self.t[self.orbits.index(orbit)])

    @property
    def atomic_mass(self) -> float:
        return float(self.t.sum())

    def to_json(self) -> dict:
        return {
            "t_inf": float(self.t_inf),
            "t": [{"orbit_id": i, "coeff": float(c), "denominator": o.denominator, "size": o.size}
                  for i, (o, c) in enumerate(zip(self.orbits, self.t))],
            "residual": float(self.residual),
            "iterations": self.iterations,
        }


def design_matrix(vs: Sequence[Vector], orbits: Sequence[TorusOrbit]) -> np.ndarray:
    cols = [np.array([1.0 if not any(v) else 0.0 for v in vs], dtype=complex)]
    cols += [orbit_fourier_many(o, vs) for o in orbits]
    return np.column_stack(cols)


def fit_restriction(samples: Mapping[Vector, complex], m: int, N_max: int,
                    orbits: Sequence[TorusOrbit] | None = None) -> MeasureFit:
    """Fit φ(v) ≈ t_inf [v = 0] + sum_i t_i ψ_{O_i}(v) with t in the simplex."""
    if not samples:
        raise ValueError("empty sample set")
    zero = (0,) * m
    if zero not in samples:
        raise ValueError("samples must include the zero vector")
    if N_max < 1:
        raise ValueError("N_max must be >= 1")
    vs = sorted(samples)
    if any(len(v) != m for v in vs):
        raise ValueError(f"sample vectors must have length {m}")
    orbits = list(orbits) if orbits is not None else orbits_up_to(m, N_max)
    A = design_matrix(vs, orbits)
    y = np.array([samples[v] for v in vs], dtype=complex)
    Ar = np.vstack([A.real, A.imag])
    yr = np.concatenate([y.real, y.imag])
    coef, iters = simplex_lstsq(Ar, yr)
    residual = float(np.linalg.norm(A @ coef - y))
    return MeasureFit(float(coef[0]), coef[1:], residual, orbits, iters)


def synthetic_samples(t_inf: float, weights: Mapping[TorusOrbit, float],
                      vs: Sequence[Vector]) -> dict[Vector, complex]:
    out = {}
    for v in vs:
        val = t_inf if not any(v) else 0.0
        out[v] = complex(val)
    for o, w in weights.items():
        vals = orbit_fourier_many(o, vs)
        for v, z in zip(vs, vals):
            out[v] += w * z
    return out


def orbits_to_json(m: int, N: int, orbits: Sequence[TorusOrbit]) -> dict:
    return {"m": m, "N": N, "orbits": [o.to_json() for o in orbits]}


def orbits_from_json(obj: dict) -> list[TorusOrbit]:
    m = int(obj["m"])
    return [TorusOrbit.from_json(o, m) for o in obj["orbits"]]


def samples_to_json(samples: Mapping[Vector, complex], m: int) -> dict:
    return {"m": m, "samples": [{"v": list(v), "value": [float(z.real), float(z.imag)]}
                                for v, z in sorted(samples.items())]}


def samples_from_json(obj: dict) -> tuple[int, dict[Vector, complex]]:
    m = int(obj["m"])
    out = {tuple(int(x) for x in s["v"]): complex(*s["value"]) for s in obj["samples"]}
    return m, out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)
