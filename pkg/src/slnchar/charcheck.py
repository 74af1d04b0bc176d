"""Candidate characters sampled on word balls: centrality, positive
definiteness, restriction to the copies of Z^{n-1}, and the
congruence / centre classification driver."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .exactmat import SLMatrix, identity_key, inv_key, mul_key, to_json
from .finquot import CharacterTable, LiftedCharacter
from .subgroups import CopySpec, GroupBall, all_copies, generator_keys
from .torus import MeasureFit, design_matrix, fit_restriction, orbits_up_to

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class Tolerances:
    psd: float = 1e-8
    central: float = 1e-9
    fit: float = 1e-7
    atom: float = 1e-6
    vanish: float = 1e-8
    level: float = 1e-9


class DomainError(ValueError):
    """A requested quotient or conjugate falls outside the sampled ball."""


@dataclass
class CandidateCharacter:
    n: int
    domain: GroupBall
    values: np.ndarray
    provenance: str = "external"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if len(self.values) != len(self.domain):
            raise ValueError("value map is not total on the ball")
        ident = identity_key(self.n)
        if ident not in self.domain.index:
            raise ValueError("ball does not contain the identity")
        if abs(self.values[self.domain.index[ident]] - 1) > NORMALIZATION_TOL:
            raise ValueError("candidate is not normalized: value at I is not 1")

    @classmethod
    def from_function(cls, ball: GroupBall, fn: Callable[[SLMatrix], complex],
                      provenance: str = "external") -> "CandidateCharacter":
        return cls(ball.n, ball, np.array([fn(m) for m in ball.elements], dtype=complex), provenance)

    def __call__(self, m: SLMatrix) -> complex:
        return complex(self.values[self.domain.index[m.entries]])

    def value_at_key(self, key) -> complex:
        return complex(self.values[self.domain.index[key]])

    def restrict(self, ball: GroupBall) -> "CandidateCharacter":
        idx = [self.domain.index[m.entries] for m in ball.elements]
        return CandidateCharacter(self.n, ball, self.values[idx], self.provenance)

    def with_value(self, m: SLMatrix, value: complex) -> "CandidateCharacter":
        vals = self.values.copy()
        vals[self.domain.index[m.entries]] = value
        return CandidateCharacter(self.n, self.domain, vals, self.provenance + "+modified")


# Centrality.

@dataclass
class CentralityReport:
    checked: int
    max_deviation: float
    worst: tuple | None
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol

    def to_json(self) -> dict:
        worst = None
        if self.worst is not None:
            g, x = self.worst
            worst = {"conjugator": to_json(g), "element": to_json(x)}
        return {"checked": self.checked, "max_deviation": self.max_deviation,
                "passed": self.passed, "tol": self.tol, "worst": worst}


def check_central(c: CandidateCharacter, tol: float = Tolerances.central) -> CentralityReport:
    """Compare φ(γ x γ^-1) with φ(x) for every generator γ and x in the ball
    whose conjugate stays in the ball."""
    n = c.n
    gens = [(g, inv_key(g, n)) for g in generator_keys(n)]
    index = c.domain.index
    vals = c.values
    worst, dev, checked = None, 0.0, 0
    for pos, x in enumerate(c.domain.elements):
        vx = vals[pos]
        for g, gi in gens:
            y = mul_key(mul_key(g, x.entries, n), gi, n)
            q = index.get(y)
            if q is None:
                continue
            checked += 1
            d = abs(vals[q] - vx)
            if d > dev:
                dev, worst = d, (SLMatrix.trusted(n, g), x)
    return CentralityReport(checked, float(dev), worst, tol)


# Positive definiteness.

def select_subset(ball: GroupBall, size: int | None = None) -> list[SLMatrix]:
    """Greedy set of ball elements whose pairwise quotients x^-1 y stay in the ball.

    Elements are scanned by word length, then enumeration order.
    """
    n = ball.n
    order = sorted(range(len(ball)), key=lambda p: (ball.lengths[p], p))
    chosen: list[tuple] = []
    chosen_inv: list[tuple] = []
    index = ball.index
    for p in order:
        g = ball.elements[p].entries
        gi = inv_key(g, n)
        if all(mul_key(xi, g, n) in index and mul_key(gi, x, n) in index
               for x, xi in zip(chosen, chosen_inv)):
            chosen.append(g)
            chosen_inv.append(gi)
            if size is not None and len(chosen) >= size:
                break
    return [SLMatrix.trusted(n, g) for g in chosen]


def quotient_index(ball: GroupBall, subset: Sequence[SLMatrix]) -> np.ndarray:
    """Q[i, j] = ball position of subset[j]^-1 subset[i]."""
    n = ball.n
    inv = [inv_key(g.entries, n) for g in subset]
    Q = np.empty((len(subset), len(subset)), dtype=np.int64)
    for i, gi in enumerate(subset):
        for j, hj in enumerate(inv):
            pos = ball.index.get(mul_key(hj, gi.entries, n))
            if pos is None:
                raise DomainError(f"quotient of subset elements {j}, {i} lies outside the ball")
            Q[i, j] = pos
    return Q


def jacobi_eigenvalues(S: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations."""
    A = np.array(S, dtype=float)
    k = len(A)
    scale = np.abs(A).max() or 1.0
    for _ in range(max_sweeps):
        off = np.sqrt((np.triu(A, 1) ** 2).sum() * 2)
        if off <= tol * scale * k:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2 * apq)
                if abs(theta) > 1e150:
                    t = 1 / (2 * theta)
                elif theta:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1))
                else:
                    t = 1.0
                cs = 1 / np.sqrt(t * t + 1)
                sn = t * cs
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = cs * rp - sn * rq
                A[q, :] = sn * rp + cs * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = cs * cp - sn * cq
                A[:, q] = sn * cp + cs * cq
    return np.sort(np.diag(A))


def hermitian_eigenvalues(H: np.ndarray, method: str = "lapack") -> np.ndarray:
    H = np.asarray(H, dtype=complex)
    if method == "lapack":
        return np.linalg.eigvalsh(H)
    if method == "jacobi":
        # real symmetric embedding doubles every eigenvalue
        R = np.block([[H.real, -H.imag], [H.imag, H.real]])
        return jacobi_eigenvalues(R)[::2]
    raise ValueError(f"unknown eigen method {method!r}")


@dataclass
class PSDReport:
    size: int
    min_eigenvalue: float
    hermitian_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.hermitian_error <= self.tol and self.min_eigenvalue >= -self.tol

    def to_json(self) -> dict:
        return {"size": self.size, "min_eigenvalue": self.min_eigenvalue,
                "hermitian_error": self.hermitian_error, "tol": self.tol, "passed": self.passed}


def gram_matrix(c: CandidateCharacter, subset: Sequence[SLMatrix] | None = None,
                index: np.ndarray | None = None) -> np.ndarray:
    if index is None:
        index = quotient_index(c.domain, subset)
    return c.values[index]


def check_positive_definite(c: CandidateCharacter, subset: Sequence[SLMatrix] | None = None,
                            tol: float = Tolerances.psd, index: np.ndarray | None = None,
                            method: str = "lapack") -> PSDReport:
    """Gram matrix G[i, j] = φ(γ_j^-1 γ_i) must be Hermitian with spectrum >= -tol."""
    if index is None:
        subset = select_subset(c.domain) if subset is None else subset
        index = quotient_index(c.domain, subset)
    G = c.values[index]
    herm = float(np.abs(G - G.conj().T).max()) if len(G) else 0.0
    if herm > tol:
        return PSDReport(len(G), float("nan"), herm, tol)
    lam = hermitian_eigenvalues((G + G.conj().T) / 2, method)
    return PSDReport(len(G), float(lam.min()), herm, tol)


# Restriction to copies.

def restrict_to_copy(c: CandidateCharacter, copy: CopySpec) -> dict[tuple[int, ...], complex]:
    """φ on ball ∩ copy, keyed by the copy's Z^{n-1} coordinates."""
    pos = [((i - 1) * c.n + (j - 1)) for i, j in copy.positions(c.n)]
    free = set(pos)
    ident = identity_key(c.n)
    out = {}
    for p, m in enumerate(c.domain.elements):
        e = m.entries
        if all(e[k] == ident[k] for k in range(len(e)) if k not in free):
            out[tuple(e[k] for k in pos)] = complex(c.values[p])
    return out


# Classification.

@dataclass
class CopyFit:
    copy: CopySpec
    samples: int
    fit: MeasureFit
    off_zero_max: float
    denominator_used: int
    stop_reason: str  # "residual" | "identifiability" | "cap"

    def to_json(self) -> dict:
        out = self.fit.to_json()
        out.update({"copy": str(self.copy), "samples": self.samples,
                    "off_zero_max": self.off_zero_max,
                    "denominator_used": self.denominator_used,
                    "stop_reason": self.stop_reason})
        return out


def identifiable_denominator(vs: Sequence[tuple[int, ...]], m: int, n_max: int) -> int:
    """Largest D <= n_max for which the Lebesgue column and the orbit
    transforms of denominator <= D are linearly independent on ``vs``."""
    best = 0
    for D in range(1, n_max + 1):
        A = design_matrix(vs, orbits_up_to(m, D))
        R = np.vstack([A.real, A.imag])
        if np.linalg.matrix_rank(R, tol=1e-9 * max(1.0, np.abs(R).max())) < R.shape[1]:
            break
        best = D
    return best


def fit_copy(c: CandidateCharacter, copy: CopySpec, n_max: int,
             fit_tol: float = Tolerances.fit) -> CopyFit:
    """Fit the restriction to one copy, raising the orbit denominator from 1
    until the residual drops below ``fit_tol`` or the sample set can no
    longer separate the orbit transforms."""
    m = c.n - 1
    samples = restrict_to_copy(c, copy)
    off = max((abs(z) for v, z in samples.items() if any(v)), default=0.0)
    cap = identifiable_denominator(sorted(samples), m, n_max)
    reason = "identifiability" if cap < n_max else "cap"
    fit = None
    for D in range(1, max(cap, 1) + 1):
        fit = fit_restriction(samples, m, D)
        if fit.residual < fit_tol:
            reason = "residual"
            break
    return CopyFit(copy, len(samples), fit, float(off), D, reason)


@dataclass
class ClassificationReport:
    verdict: str  # congruence | center | undecided
    level: int | None = None
    center_values: dict[str, list[float]] = field(default_factory=dict)
    fits: list[CopyFit] = field(default_factory=list)
    centrality: CentralityReport | None = None
    psd: PSDReport | None = None
    diagnostics: list[str] = field(default_factory=list)
    offending_copies: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "level": self.level,
            "center_values": self.center_values,
            "fits": [f.to_json() for f in self.fits],
            "centrality": self.centrality.to_json() if self.centrality else None,
            "psd": self.psd.to_json() if self.psd else None,
            "diagnostics": list(self.diagnostics),
            "offending_copies": list(self.offending_copies),
        }


def center_elements(n: int) -> list[tuple]:
    ident = identity_key(n)
    out = [ident]
    if n % 2 == 0:
        out.append(tuple(-x for x in ident))
    return out


def congruence_level(c: CandidateCharacter, level_cap: int = 64,
                     tol: float = Tolerances.level) -> int | None:
    """Smallest L such that φ is constant on residue classes mod L over the ball."""
    keys = [m.entries for m in c.domain.elements]
    for L in range(1, level_cap + 1):
        groups: dict[tuple, list[int]] = defaultdict(list)
        for p, k in enumerate(keys):
            groups[tuple(x % L for x in k)].append(p)
        if all(np.abs(c.values[ps] - c.values[ps[0]]).max() <= tol
               for ps in groups.values() if len(ps) > 1):
            return L
    return None


def classify(c: CandidateCharacter, n_max: int = 6, tol: Tolerances = Tolerances(),
             level_cap: int = 64, psd_subset: Sequence[SLMatrix] | None = None,
             psd_size: int = 200) -> ClassificationReport:
    report = ClassificationReport("undecided")
    report.centrality = check_central(c, tol.central)
    if not report.centrality.passed:
        report.diagnostics.append(
            f"not central on the ball: max deviation {report.centrality.max_deviation:.3e}")
        return report
    subset = psd_subset if psd_subset is not None else select_subset(c.domain, psd_size)
    report.psd = check_positive_definite(c, subset, tol.psd)
    if not report.psd.passed:
        report.diagnostics.append(
            f"Gram matrix not positive semidefinite: min eigenvalue {report.psd.min_eigenvalue:.3e}, "
            f"hermitian error {report.psd.hermitian_error:.3e}")
        return report

    atomic, lebesgue = [], []
    for copy in all_copies(c.n):
        cf = fit_copy(c, copy, n_max, tol.fit)
        report.fits.append(cf)
        fit = cf.fit
        is_atomic = fit.t_inf < tol.atom and fit.residual < tol.fit
        is_lebesgue = fit.t_inf > 1 - tol.atom and cf.off_zero_max < tol.vanish
        if is_atomic:
            atomic.append(str(copy))
        elif is_lebesgue:
            lebesgue.append(str(copy))
    copies = [str(f.copy) for f in report.fits]

    if len(atomic) == len(copies):
        L = congruence_level(c, level_cap, tol.level)
        if L is None:
            report.diagnostics.append(f"no level <= {level_cap} makes φ constant on residue classes")
            return report
        report.verdict, report.level = "congruence", L
        return report
    if len(lebesgue) == len(copies):
        centre = set(center_elements(c.n))
        off = [abs(v) for m_, v in zip(c.domain.elements, c.values) if m_.entries not in centre]
        worst = max(off, default=0.0)
        if worst >= tol.vanish:
            report.diagnostics.append(f"φ does not vanish off the centre: max |φ| = {worst:.3e}")
            return report
        report.verdict = "center"
        for z in centre:
            if z in c.domain.index:
                v = c.value_at_key(z)
                report.center_values["I" if z == identity_key(c.n) else "-I"] = [v.real, v.imag]
        return report
    # dichotomy broken: name the copies that disagree with the majority
    majority = atomic if len(atomic) >= len(lebesgue) else lebesgue
    report.offending_copies = [s for s in copies if s not in majority]
    report.diagnostics.append(
        f"copies disagree: {len(atomic)} atomic, {len(lebesgue)} Lebesgue, "
        f"{len(copies) - len(atomic) - len(lebesgue)} neither")
    return report


# Constructors for the two families.

def trivial_extension(n: int, chi_on_center: Mapping[str, complex] | complex | None,
                      ball: GroupBall) -> CandidateCharacter:
    """χ on the centre C, extended by zero.  ``chi_on_center`` is χ(-I) or a
    mapping {"I": 1, "-I": ±1}."""
    if ball.n != n:
        raise ValueError("ball dimension mismatch")
    if isinstance(chi_on_center, Mapping):
        chi_id = complex(chi_on_center.get("I", 1))
        chi_neg = chi_on_center.get("-I")
    else:
        chi_id, chi_neg = 1, chi_on_center
    if abs(chi_id - 1) > NORMALIZATION_TOL:
        raise ValueError("χ(I) must be 1")
    ident = identity_key(n)
    values = {ident: 1.0}
    if n % 2 == 0:
        chi_neg = 1 if chi_neg is None else complex(chi_neg)
        if min(abs(chi_neg - 1), abs(chi_neg + 1)) > NORMALIZATION_TOL:
            raise ValueError("χ(-I) must be ±1")
        values[tuple(-x for x in ident)] = complex(round(chi_neg.real))
    elif chi_neg is not None:
        raise ValueError("-I is not in SL_n(Z) for odd n")
    vals = np.array([values.get(m.entries, 0.0) for m in ball.elements], dtype=complex)
    return CandidateCharacter(n, ball, vals, "trivial-extension")


def candidates_from_table(table: CharacterTable, ball: GroupBall,
                          rows: Iterable[int] | None = None) -> list[CandidateCharacter]:
    """Lifted characters γ ↦ χ(γ mod N)/χ(1) sampled on the ball."""
    table.attach()
    cls = np.array([table.class_index(m) for m in ball.elements])
    rows = range(len(table)) if rows is None else rows
    out = []
    for r in rows:
        vals = table.values[r, cls] / table.degrees[r]
        out.append(CandidateCharacter(ball.n, ball, vals, f"lifted:SL{table.n}(Z/{table.N})#{r}"))
    return out


def candidate_from_lift(lift: LiftedCharacter, ball: GroupBall) -> CandidateCharacter:
    return candidates_from_table(lift.table, ball, [lift.row])[0]


# Candidate files.

def candidate_to_jsonl(c: CandidateCharacter, extra: Mapping | None = None) -> str:
    header = {"n": c.n, "radius": c.domain.radius, "provenance": c.provenance,
              "central": c.domain.central}
    header.update(extra or {})
    lines = [json.dumps(header, sort_keys=True)]
    for m, l, v in zip(c.domain.elements, c.domain.lengths, c.values):
        lines.append(json.dumps({"matrix": to_json(m), "length": l,
                                 "value": [float(v.real), float(v.imag)]}, sort_keys=True))
    return "\n".join(lines) + "\n"


def candidate_from_jsonl(text: str) -> CandidateCharacter:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty candidate file")
    header = json.loads(lines[0])
    n = int(header["n"])
    els, lens, vals = [], [], []
    for ln in lines[1:]:
        obj = json.loads(ln)
        mat = obj["matrix"]
        if int(mat["n"]) != n:
            raise ValueError("matrix dimension disagrees with header")
        els.append(SLMatrix(n, tuple(int(x) for x in mat["entries"])))
        lens.append(int(obj.get("length", -1)))
        vals.append(complex(*obj["value"]))
    index = {m.entries: p for p, m in enumerate(els)}
    if len(index) != len(els):
        raise ValueError("duplicate matrices in candidate file")
    ball = GroupBall(n, int(header.get("radius", max(lens, default=0))), els, lens, index,
                     bool(header.get("central", False)))
    return CandidateCharacter(n, ball, np.array(vals), header.get("provenance", "external"))
