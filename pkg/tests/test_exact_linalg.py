from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3ade.exact_linalg import (
    SquareClass,
    hermite_normal_form,
    int_det,
    int_inverse,
    int_rank,
    legendre_symbol,
    mat_identity,
    mat_mul,
    rat_inverse,
    smith_normal_form,
    square_class,
)

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-9, 9), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
)


class TestSmithNormalForm:
    def test_identity(self):
        u, d, v = smith_normal_form(mat_identity(2))
        assert d == mat_identity(2)

    def test_already_diagonal(self):
        u, d, v = smith_normal_form([[2, 0], [0, 2]])
        assert d == [[2, 0], [0, 2]]

    def test_a2_gram(self):
        u, d, v = smith_normal_form([[2, 1], [1, 2]])
        assert d == [[1, 0], [0, 3]]

    def test_zero_matrix(self):
        u, d, v = smith_normal_form([[0, 0], [0, 0]])
        assert d == [[0, 0], [0, 0]]

    def test_rectangular(self):
        a = [[2, 4, 4]]
        u, d, v = smith_normal_form(a)
        assert mat_mul(mat_mul(u, a), v) == d
        assert d[0][0] == 2

    @given(small_matrices)
    @settings(max_examples=200, deadline=None)
    def test_uav_equals_d_and_unimodular(self, a):
        u, d, v = smith_normal_form(a)
        assert mat_mul(mat_mul(u, a), v) == d
        assert abs(int_det(u)) == 1
        assert abs(int_det(v)) == 1
        diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
        for i in range(len(d)):
            for j in range(len(d[0])):
                if i != j:
                    assert d[i][j] == 0
        for x, y in zip(diag, diag[1:]):
            assert x >= 0 and y >= 0
            if x != 0:
                assert y % x == 0
            else:
                assert y == 0

    @given(small_matrices.filter(lambda a: len(a) == len(a[0])))
    @settings(max_examples=200, deadline=None)
    def test_diag_product_is_det(self, a):
        det = int_det(a)
        if det == 0:
            return
        _, d, _ = smith_normal_form(a)
        prod = 1
        for i in range(len(a)):
            prod *= d[i][i]
        assert prod == abs(det)


def _in_row_span(v, hnf_rows):
    """Membership of an integer vector in the row span of an HNF basis."""
    v = v[:]
    for row in hnf_rows:
        col = next(j for j, x in enumerate(row) if x != 0)
        if v[col] % row[col] != 0:
            return False
        q = v[col] // row[col]
        v = [a - q * b for a, b in zip(v, row)]
    return all(x == 0 for x in v)


class TestHermiteNormalForm:
    def test_identity(self):
        assert hermite_normal_form(mat_identity(3)) == mat_identity(3)

    def test_hand_example(self):
        assert hermite_normal_form([[2, 0], [1, 1]]) == [[1, 1], [0, 2]]

    def test_zero_rows_removed(self):
        assert hermite_normal_form([[0, 0], [0, 0]]) == []
        assert hermite_normal_form([[0, 2], [0, 0]]) == [[0, 2]]

    @given(small_matrices)
    @settings(max_examples=200, deadline=None)
    def test_row_span_preserved(self, a):
        h = hermite_normal_form(a)
        hh = hermite_normal_form(h + a)
        assert hh == h
        for row in a:
            assert _in_row_span(row, h)

    @given(small_matrices)
    @settings(max_examples=100, deadline=None)
    def test_canonical_shape(self, a):
        h = hermite_normal_form(a)
        pivots = []
        for row in h:
            col = next(j for j, x in enumerate(row) if x != 0)
            assert row[col] > 0
            pivots.append(col)
        assert pivots == sorted(pivots)
        for i, row in enumerate(h):
            for prow in h[i + 1:]:
                col = next(j for j, x in enumerate(prow) if x != 0)
                assert 0 <= row[col] < prow[col]


class TestLegendreSymbol:
    def test_one_is_square(self):
        assert legendre_symbol(1, 3) == 1

    def test_two_mod_three(self):
        assert legendre_symbol(2, 3) == -1

    def test_two_mod_seven(self):
        assert legendre_symbol(2, 7) == 1

    def test_rejects_divisible(self):
        with pytest.raises(ValueError):
            legendre_symbol(6, 3)

    def test_rejects_even_p(self):
        with pytest.raises(ValueError):
            legendre_symbol(3, 2)

    def test_brute_force_small_primes(self):
        for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
            squares = {(x * x) % p for x in range(1, p)}
            for u in range(1, p):
                want = 1 if u in squares else -1
                assert legendre_symbol(u, p) == want


class TestSquareClass:
    def test_perfect_square(self):
        assert square_class(9, 5) == SquareClass(5, 1)

    def test_nonsquare_mod_three(self):
        assert square_class(2, 3) == SquareClass(3, -1)

    def test_mod_eight(self):
        assert square_class(21, 2) == SquareClass(2, 5)

    def test_rejects_nonunit(self):
        with pytest.raises(ValueError):
            square_class(4, 2)

    @given(st.sampled_from([3, 5, 7, 2]), st.integers(-50, 50), st.integers(-50, 50))
    @settings(max_examples=200, deadline=None)
    def test_multiplicative(self, p, u, v):
        if u % p == 0 or v % p == 0:
            return
        assert square_class(u, p) * square_class(v, p) == square_class(u * v, p)

    def test_identity_element(self):
        for p in (2, 3, 5):
            c = square_class(7 if p != 7 else 11, p)
            assert c * SquareClass.identity(p) == c


class TestRationalHelpers:
    def test_inverse_of_a2(self):
        inv = rat_inverse([[2, 1], [1, 2]])
        assert inv == [[Fraction(2, 3), Fraction(-1, 3)],
                       [Fraction(-1, 3), Fraction(2, 3)]]

    def test_inverse_rejects_singular(self):
        with pytest.raises(ValueError):
            rat_inverse([[1, 1], [1, 1]])

    @given(small_matrices.filter(lambda a: len(a) == len(a[0])))
    @settings(max_examples=100, deadline=None)
    def test_rank_vs_det(self, a):
        n = len(a)
        if int_det(a) != 0:
            assert int_rank(a) == n
        else:
            assert int_rank(a) < n

    def test_rank_rectangular(self):
        assert int_rank([[1, 2, 3], [2, 4, 6]]) == 1
        assert int_rank([]) == 0

    def test_int_inverse_unimodular(self):
        assert int_inverse([[1, 1], [0, 1]]) == [[1, -1], [0, 1]]

    def test_int_inverse_rejects_nonunimodular(self):
        with pytest.raises(ValueError):
            int_inverse([[2, 0], [0, 1]])
