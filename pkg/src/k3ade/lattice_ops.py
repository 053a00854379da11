"""Operations on explicit even integral lattices.

A lattice is presented by its Gram matrix on a fixed basis.  The
module builds even overlattices from isotropic glue vectors in the
dual, enumerates short vectors exactly, and identifies the ADE type of
the sublattice generated by the norm-2 vectors.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, isqrt, lcm
from typing import Sequence

import numpy

from .ade_types import ADEType, Component
from .exact_linalg import hermite_normal_form, int_det, int_rank, rat_inverse
from .fqf import FiniteQuadraticForm, RatVector, discriminant_form


class GramLattice:
    """An even integral lattice of nonzero determinant.

    The Gram matrix must be symmetric with even diagonal.  Positive
    definiteness is only required (and checked) by the operations that
    need it.
    """

    __slots__ = ("gram", "det", "_dual", "_disc")

    def __init__(self, gram: Sequence[Sequence[int]]):
        n = len(gram)
        if n == 0:
            raise ValueError("empty Gram matrix")
        rows = []
        for i in range(n):
            row = list(gram[i])
            if len(row) != n:
                raise ValueError("Gram matrix must be square")
            for x in row:
                if x % 1 != 0:
                    raise ValueError("Gram entries must be integers")
            rows.append(tuple(int(x) for x in row))
        for i in range(n):
            if rows[i][i] % 2 != 0:
                raise ValueError("diagonal must be even")
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.gram = tuple(rows)
        self.det = int_det([list(r) for r in rows])
        if self.det == 0:
            raise ValueError("Gram matrix is degenerate")
        self._dual = None
        self._disc = None

    @property
    def rank(self) -> int:
        return len(self.gram)

    def dual_basis(self) -> list[list[Fraction]]:
        """Rows are the dual basis vectors in lattice coordinates."""
        if self._dual is None:
            self._dual = rat_inverse([list(r) for r in self.gram])
        return self._dual

    def disc_form(self) -> tuple[FiniteQuadraticForm, list[RatVector]]:
        if self._disc is None:
            self._disc = discriminant_form([list(r) for r in self.gram])
        return self._disc

    def pairing(self, u: Sequence, v: Sequence):
        n = self.rank
        return sum(u[i] * self.gram[i][j] * v[j]
                   for i in range(n) for j in range(n))

    def __eq__(self, other):
        return isinstance(other, GramLattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"GramLattice(rank={self.rank}, det={self.det})"


def overlattice(lat: GramLattice,
                lifts: Sequence[Sequence[Fraction]]) -> tuple[GramLattice, int]:
    """Even overlattice generated by the lattice and dual glue vectors.

    Each lift must lie in the dual lattice and the glue classes must be
    totally isotropic for the discriminant form.  Returns the
    overlattice on a new basis together with the index, which satisfies
    det(L) = det(M) * index**2.  Evenness of the result is asserted, as
    it follows from isotropy.
    """
    n = lat.rank
    vecs = [[Fraction(x) for x in v] for v in lifts]
    for v in vecs:
        if len(v) != n:
            raise ValueError("lift has wrong length")
    scale = lcm(1, *(x.denominator for v in vecs for x in v))
    ivecs = [[int(x * scale) for x in v] for v in vecs]
    paired = [[sum(u[i] * lat.gram[i][j] * v[j]
                   for i in range(n) for j in range(n))
               for v in ivecs] for u in ivecs]
    for v in ivecs:
        for i in range(n):
            if sum(lat.gram[i][j] * v[j] for j in range(n)) % scale != 0:
                raise ValueError("lift outside the dual lattice")
    for i in range(len(ivecs)):
        if paired[i][i] % (2 * scale * scale) != 0:
            raise ValueError("glue class is not isotropic")
        for j in range(i + 1, len(ivecs)):
            if paired[i][j] % (scale * scale) != 0:
                raise ValueError("glue classes do not pair to zero")

    rows = [[scale * (i == j) for j in range(n)] for i in range(n)]
    rows += ivecs
    hnf = hermite_normal_form(rows)
    assert len(hnf) == n, "overlattice basis must have full rank"

    half = [[sum(hnf[i][k] * lat.gram[k][j] for k in range(n))
             for j in range(n)] for i in range(n)]
    sq = scale * scale
    new_gram = []
    for i in range(n):
        row = []
        for j in range(n):
            g = sum(half[i][k] * hnf[j][k] for k in range(n))
            assert g % sq == 0, "overlattice pairing must be integral"
            row.append(g // sq)
        new_gram.append(row)
    for i in range(n):
        assert new_gram[i][i] % 2 == 0, "overlattice must be even"

    over = GramLattice(new_gram)
    ratio = Fraction(lat.det, over.det)
    assert ratio.denominator == 1 and ratio > 0
    index = isqrt(int(ratio))
    assert index * index == int(ratio), "index must square to det ratio"
    return over, index


def _cholesky(lat: GramLattice) -> list[list[Fraction]]:
    """Fincke-Pohst data: q[i][i] are the outer coefficients and
    q[i][j] (j > i) the mixing coefficients, all exact."""
    n = lat.rank
    q = [[Fraction(x) for x in row] for row in lat.gram]
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("lattice is not positive definite")
        col = [q[i][j] for j in range(n)]
        for j in range(i + 1, n):
            q[i][j] /= q[i][i]
        for j in range(i + 1, n):
            for k in range(j, n):
                q[j][k] -= col[j] * q[i][k]
    return q


def short_vectors(lat: GramLattice, norm_bound: int = 2,
                  both_signs: bool = False) -> list[tuple[int, ...]]:
    """All nonzero vectors of norm at most norm_bound, sorted.

    By default one representative per {v, -v} pair is returned, chosen
    with positive leading nonzero coordinate; with both_signs=True the
    full list is returned.
    """
    q = _cholesky(lat)
    n = lat.rank
    found: list[tuple[int, ...]] = []
    x = [0] * n

    def descend(i: int, budget: Fraction) -> None:
        if i < 0:
            if any(x):
                found.append(tuple(x))
            return
        u = sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        xi = floor(-u)
        while True:
            used = q[i][i] * (xi + u) ** 2
            if used > budget:
                break
            x[i] = xi
            descend(i - 1, budget - used)
            xi -= 1
        xi = floor(-u) + 1
        while True:
            used = q[i][i] * (xi + u) ** 2
            if used > budget:
                break
            x[i] = xi
            descend(i - 1, budget - used)
            xi += 1
        x[i] = 0

    descend(n - 1, Fraction(norm_bound))
    if not both_signs:
        neg = {tuple(-c for c in v) for v in found}
        found = [v for v in found if v not in neg or v > tuple(-c for c in v)]
    return sorted(found)


_EXCEPTIONAL_COUNTS = {(6, 72): ("E", 6), (7, 126): ("E", 7),
                       (8, 240): ("E", 8)}

_ROOT_TYPE_CACHE: dict[tuple, tuple[Component, ...]] = {}


def root_type(lat: GramLattice) -> ADEType:
    """ADE type of the sublattice generated by the norm-2 vectors.

    Roots are grouped into components by the nonorthogonality relation;
    each component is identified from its rank and root count.  A Gram
    matrix that splits into orthogonal blocks is classified block by
    block: in an even positive-definite lattice every norm-2 vector is
    supported on a single block.
    """
    blocks = _gram_blocks(lat.gram)
    if len(blocks) > 1:
        comps: list[Component] = []
        for block in blocks:
            sub = GramLattice([[lat.gram[i][j] for j in block]
                               for i in block])
            comps.extend(root_type(sub).components)
        return ADEType(tuple(comps))
    cached = _ROOT_TYPE_CACHE.get(lat.gram)
    if cached is not None:
        return ADEType(cached)
    result = _connected_root_type(lat)
    _ROOT_TYPE_CACHE[lat.gram] = result.components
    return result


def _gram_blocks(gram) -> list[list[int]]:
    """Index sets of the connected components of the Gram matrix."""
    n = len(gram)
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if gram[i][j] != 0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    blocks: dict[int, list[int]] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    return sorted(blocks.values())


def _pairwise_gram(lat: GramLattice, reps) -> list[list[int]]:
    """All pairwise products of the given vectors, via int64 matrix
    arithmetic when the entries are provably too small to overflow."""
    n = lat.rank
    top = max((abs(x) for v in reps for x in v), default=0)
    top_g = max(abs(x) for row in lat.gram for x in row)
    if n <= 100 and top <= 10 ** 4 and top_g <= 10 ** 4:
        r = numpy.array(reps, dtype=numpy.int64).reshape(len(reps), n)
        g = numpy.array(lat.gram, dtype=numpy.int64)
        return (r @ g @ r.T).tolist()
    return [[lat.pairing(u, v) for v in reps] for u in reps]


def _connected_root_type(lat: GramLattice) -> ADEType:
    reps = short_vectors(lat, 2)
    k = len(reps)
    parent = list(range(k))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    pairs = _pairwise_gram(lat, reps)
    for i in range(k):
        for j in range(i + 1, k):
            if pairs[i][j] != 0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj

    groups: dict[int, list[tuple[int, ...]]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(reps[i])

    comps: list[Component] = []
    for vectors in groups.values():
        r = int_rank([list(v) for v in vectors])
        count = 2 * len(vectors)
        if count == r * (r + 1):
            comps.append(("A", r))
        elif r >= 4 and count == 2 * r * (r - 1):
            comps.append(("D", r))
        elif (r, count) in _EXCEPTIONAL_COUNTS:
            comps.append(_EXCEPTIONAL_COUNTS[(r, count)])
        else:
            raise RuntimeError(
                f"root component with rank {r} and {count} roots "
                "matches no ADE type")
    return ADEType(tuple(comps))
