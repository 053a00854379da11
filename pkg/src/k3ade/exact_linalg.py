"""Exact integer and rational linear algebra shared by all other modules.

All matrices are dense lists of lists of Python ints (arbitrary precision);
rational work uses fractions.Fraction. No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

IntMatrix = list[list[int]]


def mat_identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    oi[j] += c * bt[j]
    return out


def _find_pivot(a: IntMatrix, t: int):
    """Smallest nonzero |entry| in the trailing submatrix, earliest position."""
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[0])):
            x = a[i][j]
            if x != 0 and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(a: IntMatrix):
    """Return (U, D, V) with U*a*V = D, D diagonal, d_1 | d_2 | ... >= 0.

    U and V are unimodular. Pivot choice is the smallest nonzero absolute
    value (earliest position on ties), so the output is deterministic.
    """
    r = len(a)
    c = len(a[0]) if r else 0
    d = [row[:] for row in a]
    u = mat_identity(r)
    v = mat_identity(c)
    t = 0
    while t < min(r, c):
        pos = _find_pivot(d, t)
        if pos is None:
            break
        i, j = pos
        if i != t:
            d[t], d[i] = d[i], d[t]
            u[t], u[i] = u[i], u[t]
        if j != t:
            for row in d:
                row[t], row[j] = row[j], row[t]
            for row in v:
                row[t], row[j] = row[j], row[t]
        # clear column t and row t by Euclidean steps
        dirty = False
        for i in range(r):
            if i != t and d[i][t] != 0:
                q = d[i][t] // d[t][t]
                for j in range(c):
                    d[i][j] -= q * d[t][j]
                for j in range(r):
                    u[i][j] -= q * u[t][j]
                if d[i][t] != 0:
                    dirty = True
        for j in range(c):
            if j != t and d[t][j] != 0:
                q = d[t][j] // d[t][t]
                for i in range(r):
                    d[i][j] -= q * d[i][t]
                for i in range(c):
                    v[i][j] -= q * v[i][t]
                if d[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # column and row are clear; enforce divisibility of the rest
        offender = None
        for i in range(t + 1, r):
            for j in range(t + 1, c):
                if d[i][j] % d[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(c):
                d[t][j] += d[offender][j]
            for j in range(r):
                u[t][j] += u[offender][j]
            continue
        t += 1
    for i in range(min(r, c)):
        if d[i][i] < 0:
            for j in range(c):
                d[i][j] = -d[i][j]
            for j in range(r):
                u[i][j] = -u[i][j]
    return u, d, v


def hermite_normal_form(a: IntMatrix) -> IntMatrix:
    """Row-style HNF: positive pivots, entries above a pivot reduced into
    [0, pivot); zero rows removed. The integer row span is preserved."""
    rows = [row[:] for row in a]
    if not rows:
        return []
    ncols = len(rows[0])
    pr = 0
    for col in range(ncols):
        while True:
            best = None
            for i in range(pr, len(rows)):
                x = rows[i][col]
                if x != 0 and (best is None or abs(x) < abs(rows[best][col])):
                    best = i
            if best is None:
                break
            rows[pr], rows[best] = rows[best], rows[pr]
            done = True
            for i in range(pr + 1, len(rows)):
                if rows[i][col] != 0:
                    q = rows[i][col] // rows[pr][col]
                    for j in range(ncols):
                        rows[i][j] -= q * rows[pr][j]
                    if rows[i][col] != 0:
                        done = False
            if done:
                break
        if best is None:
            continue
        if rows[pr][col] < 0:
            rows[pr] = [-x for x in rows[pr]]
        p = rows[pr][col]
        for i in range(pr):
            q = rows[i][col] // p
            if q:
                for j in range(ncols):
                    rows[i][j] -= q * rows[pr][j]
        pr += 1
    return [row for row in rows[:pr]]


def legendre_symbol(u: int, p: int) -> int:
    """(u/p) for an odd prime p and u coprime to p."""
    if p % 2 == 0 or p < 3:
        raise ValueError(f"p must be an odd prime, got {p}")
    if u % p == 0:
        raise ValueError(f"{u} is divisible by {p}")
    r = pow(u, (p - 1) // 2, p)
    if r == 1:
        return 1
    if r == p - 1:
        return -1
    raise ValueError(f"{p} is not prime")


@dataclass(frozen=True)
class SquareClass:
    """An element of Z_p^x / (Z_p^x)^2.

    For odd p the tag is +1 (squares) or -1 (the class of a non-residue v_p);
    for p = 2 the tag is the unit's residue mod 8, one of {1, 3, 5, 7}.
    """

    p: int
    tag: int

    def __post_init__(self):
        if self.p == 2:
            if self.tag not in (1, 3, 5, 7):
                raise ValueError(f"bad 2-adic square class {self.tag}")
        elif self.tag not in (1, -1):
            raise ValueError(f"bad square class tag {self.tag}")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if self.p != other.p:
            raise ValueError("square classes at different primes")
        if self.p == 2:
            return SquareClass(2, (self.tag * other.tag) % 8)
        return SquareClass(self.p, self.tag * other.tag)

    @classmethod
    def identity(cls, p: int) -> "SquareClass":
        return cls(p, 1)

    def __str__(self):
        if self.p == 2:
            return str(self.tag)
        return "1" if self.tag == 1 else f"v_{self.p}"


def square_class(u: int, p: int) -> SquareClass:
    """Class of the unit u in Z_p^x / (Z_p^x)^2."""
    if u % p == 0:
        raise ValueError(f"{u} is not a unit at {p}")
    if p == 2:
        return SquareClass(2, u % 8)
    return SquareClass(p, legendre_symbol(u, p))


def int_det(a: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def int_rank(a: IntMatrix) -> int:
    """Rank over Q of an integer matrix."""
    if not a:
        return 0
    m = [[Fraction(x) for x in row] for row in a]
    rows, cols = len(m), len(m[0])
    rank = 0
    for col in range(cols):
        piv = None
        for i in range(rank, rows):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(rows):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def int_inverse(a: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix, again with integer entries."""
    inv = rat_inverse(a)
    out = []
    for row in inv:
        orow = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            orow.append(x.numerator)
        out.append(orow)
    return out


def rat_inverse(a: IntMatrix) -> list[list[Fraction]]:
    """Exact inverse of a nonsingular integer matrix."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            raise ValueError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [row[n:] for row in m]
