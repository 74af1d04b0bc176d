"""Small dense linear algebra over F_p (lists of ints)."""
from __future__ import annotations

from math import isqrt


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13):
        if m % d == 0:
            return m == d
    return all(m % d for d in range(17, isqrt(m) + 1, 2))


def primitive_root(p: int) -> int:
    phi = p - 1
    factors = []
    m, d = phi, 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")


def rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[x % p for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(a: list[list[int]], p: int) -> list[list[int]]:
    """Basis of {x : a x = 0}."""
    ncols = len(a[0])
    red, pivots = rref(a, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = -row[f] % p
        basis.append(v)
    return basis


def det_mod(a: list[list[int]], p: int) -> int:
    m = [[x % p for x in r] for r in a]
    n = len(m)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d = d * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return d % p


def charpoly_roots(a: list[list[int]], p: int) -> list[int]:
    """Roots in F_p of det(a - λ I), found by interpolation then exhaustive search."""
    n = len(a)
    xs = list(range(n + 1))
    ys = []
    for lam in xs:
        m = [[(a[i][j] - (lam if i == j else 0)) % p for j in range(n)] for i in range(n)]
        ys.append(det_mod(m, p))
    # Newton divided differences, then expand to monomial coefficients.
    coef = ys[:]
    for j in range(1, n + 1):
        for i in range(n, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    poly = [0] * (n + 1)  # poly[k] is coefficient of λ^k
    poly[0] = coef[n]
    for i in range(n - 1, -1, -1):
        # poly = poly * (λ - xs[i]) + coef[i]
        new = [0] * (n + 1)
        for k in range(n):
            new[k + 1] = (new[k + 1] + poly[k]) % p
            new[k] = (new[k] - xs[i] * poly[k]) % p
        new[0] = (new[0] + coef[i]) % p
        poly = new
    roots = []
    for lam in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * lam + c) % p
        if acc == 0:
            roots.append(lam)
    return roots
