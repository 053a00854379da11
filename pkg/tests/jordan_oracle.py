"""Exact Jordan decompositions of integer Gram matrices over Z_p.

Test-only oracle: the package itself never decomposes a lattice p-adically;
these routines provide independent expected values for the local-invariant
machinery on small random lattices.
"""

from fractions import Fraction

from k3ade.local_invariants import U_BLOCK, UNIT, V_BLOCK, JordanBlock


def _val(x: Fraction, p: int) -> int:
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _unit_residue(x: Fraction, p: int, mod: int) -> int:
    """Residue modulo mod (a power of p) of the unit part of x."""
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
    while den % p == 0:
        den //= p
    return num * pow(den, -1, mod) % mod


def signature(gram) -> tuple[int, int]:
    """Counts of positive and negative eigenvalues, exactly."""
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    active = list(range(n))
    pos = neg = 0
    while active:
        i = next((i for i in active if m[i][i] != 0), None)
        if i is None:
            pair = next(((a, b) for a in active for b in active
                         if a != b and m[a][b] != 0), None)
            if pair is None:
                break
            a, b = pair
            for j in range(n):
                m[a][j] += m[b][j]
            for j in range(n):
                m[j][a] += m[j][b]
            continue
        if m[i][i] > 0:
            pos += 1
        else:
            neg += 1
        piv = m[i][i]
        others = [k for k in active if k != i]
        for k in others:
            if m[k][i] != 0:
                f = m[k][i] / piv
                for j in range(n):
                    m[k][j] -= f * m[i][j]
                for j in range(n):
                    m[j][k] -= f * m[j][i]
        active.remove(i)
    return pos, neg


def _eliminate_unit(m, n, active, i):
    piv = m[i][i]
    for k in [k for k in active if k != i]:
        if m[k][i] != 0:
            f = m[k][i] / piv
            for j in range(n):
                m[k][j] -= f * m[i][j]
            for j in range(n):
                m[j][k] -= f * m[j][i]
    active.remove(i)


def _eliminate_pair(m, n, active, i, j):
    aii, aij, ajj = m[i][i], m[i][j], m[j][j]
    det = aii * ajj - aij * aij
    for k in [k for k in active if k not in (i, j)]:
        c1 = (m[k][i] * ajj - m[k][j] * aij) / det
        c2 = (m[k][j] * aii - m[k][i] * aij) / det
        if c1 or c2:
            for t in range(n):
                m[k][t] -= c1 * m[i][t] + c2 * m[j][t]
            for t in range(n):
                m[t][k] -= c1 * m[t][i] + c2 * m[t][j]
    active.remove(i)
    active.remove(j)


def jordan_blocks(gram, p: int) -> list[JordanBlock]:
    """Jordan decomposition of a nondegenerate Gram matrix over Z_p."""
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    active = list(range(n))
    blocks = []
    while active:
        vd = di = None
        for i in active:
            if m[i][i] != 0:
                v = _val(m[i][i], p)
                if vd is None or v < vd:
                    vd, di = v, i
        vo = oij = None
        for a, i in enumerate(active):
            for j in active[a + 1:]:
                if m[i][j] != 0:
                    v = _val(m[i][j], p)
                    if vo is None or v < vo:
                        vo, oij = v, (i, j)
        if vd is None and vo is None:
            raise ValueError("degenerate Gram matrix")
        if p != 2:
            if vd is None or (vo is not None and vo < vd):
                i, j = oij
                s = m[i][i] + 2 * m[i][j] + m[j][j]
                sign = 1 if s != 0 and _val(s, p) == vo else -1
                for t in range(n):
                    m[i][t] += sign * m[j][t]
                for t in range(n):
                    m[t][i] += sign * m[t][j]
                continue
            blocks.append(JordanBlock(vd, UNIT, _unit_residue(m[di][di], p, p)))
            _eliminate_unit(m, n, active, di)
        elif vd is not None and (vo is None or vd <= vo):
            blocks.append(JordanBlock(vd, UNIT, _unit_residue(m[di][di], 2, 8)))
            _eliminate_unit(m, n, active, di)
        else:
            i, j = oij
            odd_diag = (m[i][i] != 0 and _val(m[i][i], 2) == vo + 1 and
                        m[j][j] != 0 and _val(m[j][j], 2) == vo + 1)
            blocks.append(JordanBlock(vo, V_BLOCK if odd_diag else U_BLOCK))
            _eliminate_pair(m, n, active, i, j)
    return sorted(blocks, key=lambda b: (b.nu, b.kind, b.a or 0))
