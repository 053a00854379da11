"""p-adic invariants of even lattices.

Two invariants classify a p-adic lattice up to the data this package
needs: the p-excess (an element of Z/8, called 2-excess at p = 2) and the
reduced discriminant (the square class of the unit part of the
determinant).  Both are computed from a Jordan decomposition into scaled
unit blocks and, at p = 2, the even 2x2 blocks U and V.

local_invariant_set(p, n, q) returns every pair [excess, reduced
discriminant] realized by a p-adic lattice of rank n whose discriminant
form is the given p-group form q.  It combines the invariant set of a
unimodular complement with a recursion that splits generators off the
form one or two at a time until the closed rank <= 2 tables apply.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_linalg import SquareClass, legendre_symbol, square_class
from .fqf import (
    FiniteQuadraticForm,
    eval_b,
    form_on_generators,
    reduced_generators,
)

UNIT, U_BLOCK, V_BLOCK = "unit", "U", "V"


@dataclass(frozen=True)
class JordanBlock:
    """One block of a p-adic Jordan decomposition, scaled by p^nu.

    kind is "unit" for a rank-1 block <a * p^nu> with a a p-adic unit, or
    (p = 2 only) "U" / "V" for the scaled even rank-2 blocks.
    """

    nu: int
    kind: str
    a: int | None = None

    def __post_init__(self):
        if self.nu < 0:
            raise ValueError("scale exponent must be nonnegative")
        if self.kind == UNIT:
            if self.a is None:
                raise ValueError("unit block needs a unit residue")
        elif self.kind not in (U_BLOCK, V_BLOCK):
            raise ValueError(f"unknown block kind {self.kind!r}")


@dataclass(frozen=True)
class LocalInvariant:
    """A pair [excess mod 8, reduced discriminant square class]."""

    excess: int
    reddisc: SquareClass

    def __post_init__(self):
        if not 0 <= self.excess < 8:
            raise ValueError("excess must be reduced mod 8")


LocalInvariantSet = frozenset


def _unit_excess_2(nu: int, a: int) -> int:
    """2-excess of the rank-1 block <a * 2^nu>, a odd."""
    if nu % 2 == 0 or a % 8 in (1, 7):
        return (1 - a) % 8
    return (5 - a) % 8


def p_excess(blocks: list[JordanBlock], p: int) -> int:
    """p-excess (2-excess at p = 2) of a p-adic Jordan decomposition."""
    if p == 2:
        total = 0
        for blk in blocks:
            if blk.kind == UNIT:
                if blk.a % 2 == 0:
                    raise ValueError(f"{blk.a} is not a 2-adic unit")
                total += _unit_excess_2(blk.nu, blk.a)
            elif blk.kind == U_BLOCK:
                total += 2
            else:
                total += 2 if blk.nu % 2 == 0 else 6
        return total % 8
    total = 0
    for blk in blocks:
        if blk.kind != UNIT:
            raise ValueError("U/V blocks exist only at p = 2")
        if blk.a % p == 0:
            raise ValueError(f"{blk.a} is not a unit at {p}")
        total += pow(p, blk.nu, 8) - 1
        if blk.nu % 2 == 1 and legendre_symbol(blk.a, p) == -1:
            total += 4
    return total % 8


def reddisc(blocks: list[JordanBlock], p: int) -> SquareClass:
    """Square class of the product of the unit parts of the blocks."""
    cls = SquareClass.identity(p)
    for blk in blocks:
        if blk.kind == UNIT:
            cls = cls * square_class(blk.a, p)
        elif p != 2:
            raise ValueError("U/V blocks exist only at p = 2")
        elif blk.kind == U_BLOCK:
            cls = cls * SquareClass(2, 7)
        else:
            cls = cls * SquareClass(2, 3)
    return cls


def star(s1: LocalInvariantSet, s2: LocalInvariantSet) -> LocalInvariantSet:
    """Pairwise combination {[e + e', u * u']}; {[0, 1]} is the identity."""
    return frozenset(
        LocalInvariant((a.excess + b.excess) % 8, a.reddisc * b.reddisc)
        for a in s1 for b in s2)


def identity_set(p: int) -> LocalInvariantSet:
    return frozenset({LocalInvariant(0, SquareClass.identity(p))})


def unimodular_set(p: int, k: int) -> LocalInvariantSet:
    """Invariant pairs of unimodular p-adic lattices of rank k.

    At p = 2 only even unimodular lattices count, so odd ranks give the
    empty set and the reduced discriminant depends on k mod 4 through the
    possible mixes of U and V blocks.
    """
    if k < 0:
        raise ValueError("rank must be nonnegative")
    if k == 0:
        return identity_set(p)
    if p != 2:
        return frozenset({
            LocalInvariant(0, SquareClass.identity(p)),
            LocalInvariant(0, SquareClass(p, -1)),
        })
    if k % 2 == 1:
        return frozenset()
    tags = (1, 5) if k % 4 == 0 else (3, 7)
    return frozenset(
        LocalInvariant(k % 8, SquareClass(2, t)) for t in tags)


def _scaled_int(x: Fraction, m: int) -> int:
    v = x * m
    if v.denominator != 1:
        raise ValueError("value is not integral at the expected scale")
    return v.numerator


def _prime_power_exponent(d: int, p: int) -> int:
    nu = 0
    while d % p == 0:
        d //= p
        nu += 1
    if d != 1:
        raise ValueError("order is not a power of the expected prime")
    return nu


def rank_le2_set(p: int, presentation: FiniteQuadraticForm) -> LocalInvariantSet:
    """Invariant pairs of p-adic lattices of rank l realizing a rank-l form.

    Closed tables for the two base shapes of the recursion: a cyclic form
    [a/p^nu], and at p = 2 the rank-2 forms (1/2^nu)[[2u, v], [v, 2w]]
    with v odd.  Everything else is rejected.
    """
    orders = presentation.orders
    if len(orders) == 1:
        d = orders[0]
        nu = _prime_power_exponent(d, p)
        a = _scaled_int(presentation.qdiag[0], d)
        if a % p == 0:
            raise ValueError("cyclic form value must have a unit numerator")
        if p != 2:
            if legendre_symbol(a, p) == 1:
                return frozenset({LocalInvariant((d - 1) % 8,
                                                 SquareClass.identity(p))})
            excess = (d - 1 + (4 if nu % 2 else 0)) % 8
            return frozenset({LocalInvariant(excess, SquareClass(p, -1))})
        residues = {a % 8, (a + 4) % 8} if nu == 1 else {a % 8}
        return frozenset(
            LocalInvariant(_unit_excess_2(nu, r), SquareClass(2, r))
            for r in residues)
    if len(orders) == 2 and p == 2:
        d = orders[0]
        nu = _prime_power_exponent(d, 2)
        if orders[1] != d:
            raise ValueError("rank-2 table needs equal generator orders")
        if presentation.bmat[0][1].denominator != d:
            raise ValueError("rank-2 table needs an odd off-diagonal pairing")
        u = _scaled_int(presentation.qdiag[0], d)
        w = _scaled_int(presentation.qdiag[1], d)
        if u % 2 or w % 2:
            raise ValueError("rank-2 table needs even diagonal q numerators")
        if (u // 2) * (w // 2) % 2 == 0:
            return frozenset({LocalInvariant(2, SquareClass(2, 7))})
        if nu % 2 == 0:
            return frozenset({LocalInvariant(2, SquareClass(2, 3))})
        return frozenset({LocalInvariant(6, SquareClass(2, 3))})
    raise ValueError("input outside the rank <= 2 table shapes")


_REC_CACHE: dict = {}
_SET_CACHE: dict = {}


def local_invariant_set(p: int, n: int,
                        q_p: FiniteQuadraticForm) -> LocalInvariantSet:
    """All pairs [excess, reddisc] of rank-n p-adic lattices with form q_p.

    Empty when n is smaller than the minimal number of generators l of the
    group; otherwise the set for a rank-l lattice combined (via star) with
    the unimodular possibilities in rank n - l.
    """
    key = (p, n, q_p)
    cached = _SET_CACHE.get(key)
    if cached is not None:
        return cached
    gens = reduced_generators(q_p)  # also validates the p-group shape
    for d in q_p.orders:
        if d % p != 0:
            raise ValueError(f"form is not a {p}-group form")
    l = len(gens)
    if n < l:
        result = frozenset()
    else:
        sorted_form = form_on_generators(q_p, gens)
        result = star(unimodular_set(p, n - l), _split_set(p, sorted_form))
    _SET_CACHE[key] = result
    return result


def _split_set(p: int, form: FiniteQuadraticForm) -> LocalInvariantSet:
    """Invariant set in rank exactly l, by recursive generator splitting.

    The presentation must be sorted by weakly decreasing generator order.
    Splits an orthogonal rank-1 block when some b(g_i, g_i) pairs at full
    scale; otherwise repairs the top generator (odd p) or splits the even
    rank-2 block it spans with its full-scale partner (p = 2).
    """
    key = (p, form)
    cached = _REC_CACHE.get(key)
    if cached is not None:
        return cached
    result = _split_set_uncached(p, form)
    _REC_CACHE[key] = result
    return result


def _split_set_uncached(p, form):
    l = len(form.orders)
    if l == 0:
        return identity_set(p)
    if l == 1:
        return rank_le2_set(p, form)
    pn = form.orders[0]
    pivot = None
    for i in range(l):
        if form.bmat[i][i].denominator == pn:
            pivot = i
            break
    if pivot is not None:
        u = _scaled_int(form.bmat[pivot][pivot], pn)
        uinv = pow(u, -1, pn)
        head = [0] * l
        head[pivot] = 1
        rows = []
        for j in range(l):
            if j == pivot:
                continue
            c = uinv * _scaled_int(form.bmat[pivot][j], pn) % pn
            row = [0] * l
            row[j] = 1
            row[pivot] = -c
            rows.append(row)
            if eval_b(form, head, row) != 0:
                raise AssertionError("rank-1 split is not orthogonal")
        rank1 = form_on_generators(form, [head])
        rest = _resorted(form, rows)
        return star(rank_le2_set(p, rank1), _split_set(p, rest))
    partner = None
    for j in range(1, l):
        if form.bmat[0][j].denominator == pn:
            partner = j
            break
    if partner is None:
        raise ValueError("degenerate form: top generator pairs below full scale")
    if p != 2:
        rows = [[0] * l for _ in range(l)]
        for j in range(l):
            rows[j][j] = 1
        rows[0][partner] = 1
        return _split_set(p, form_on_generators(form, rows))
    u2 = _scaled_int(form.bmat[0][0], pn)
    v = _scaled_int(form.bmat[0][partner], pn)
    w2 = _scaled_int(form.bmat[partner][partner], pn)
    t = pow(u2 * w2 - v * v, -1, pn)
    head = [0] * l
    head[0] = 1
    second = [0] * l
    second[partner] = 1
    rows = []
    for j in range(1, l):
        if j == partner:
            continue
        s1 = _scaled_int(form.bmat[0][j], pn)
        s2 = _scaled_int(form.bmat[partner][j], pn)
        row = [0] * l
        row[j] = 1
        row[0] = -(t * (w2 * s1 - v * s2) % pn)
        row[partner] = -(t * (u2 * s2 - v * s1) % pn)
        rows.append(row)
        if eval_b(form, head, row) != 0 or eval_b(form, second, row) != 0:
            raise AssertionError("rank-2 split is not orthogonal")
    pair = form_on_generators(form, [head, second])
    rest = _resorted(form, rows)
    return star(rank_le2_set(2, pair), _split_set(2, rest))


def _resorted(form, rows):
    """Build the form on the given generators, sorted by decreasing order."""
    sub = form_on_generators(form, rows)
    return form_on_generators(sub, reduced_generators(sub))
