"""Pure-Python scan kernels.

These are the fallback implementations of the inner loops used by the
classifier; see kernels.py for the dispatch and the scaled-integer
encoding of the quadratic form data.
"""

from __future__ import annotations


def iso_scan(orders: list[int], q2: list[int], b1: list[list[int]],
             two_e: int) -> list[tuple[int, ...]]:
    """All coefficient tuples x (0 <= x_i < orders[i]) with

        sum_i x_i^2 q2[i] + 2 sum_{i<j} x_i x_j b1[i][j]  =  0  (mod two_e)

    where q2[i] = q(g_i) * E and b1[i][j] = b(g_i, g_j) * E for
    E = two_e / 2.
    """
    n = len(orders)
    if n == 0:
        return [()]
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def descend(k: int, qacc: int, dots: list[int]) -> None:
        if k == n:
            if qacc % two_e == 0:
                out.append(tuple(x))
            return
        for c in range(orders[k]):
            x[k] = c
            here = qacc + c * c * q2[k] + 2 * c * dots[k]
            row = b1[k]
            descend(k + 1, here,
                    [dots[j] + c * row[j] for j in range(n)])
        x[k] = 0

    descend(0, 0, [0] * n)
    return out


def orth_scan(pool: list[tuple[int, ...]], bv: list[int],
              e: int) -> list[tuple[int, ...]]:
    """Elements w of the pool with sum_j bv[j] * w[j] = 0 (mod e)."""
    out = []
    for w in pool:
        total = 0
        for j, c in enumerate(w):
            total += bv[j] * c
        if total % e == 0:
            out.append(w)
    return out
