import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logicons.boolmat import (BoolMat, BoolVec, format_matrix, mat_mul, mat_pow,
                              mat_vec, nilpotency_index, parse_matrix, spectral_radius)
from logicons.errors import ShapeError

from helpers import fixture


# independent oracles

def triple_loop_product(a, b):
    A, B = a.to_lists(), b.to_lists()
    n, k, m = len(A), len(B), len(B[0])
    return [[int(any(A[i][j] and B[j][c] for j in range(k))) for c in range(m)] for i in range(n)]


def has_nonzero_fixed_vector(a):
    """Eigenvalue oracle: some x != 0 with A x = 1 * x."""
    A = a.to_lists()
    n = len(A)
    for x in itertools.product((0, 1), repeat=n):
        if not any(x):
            continue
        ax = [int(any(A[i][j] and x[j] for j in range(n))) for i in range(n)]
        if ax == list(x):
            return True
    return False


def triangularizable(a):
    A = a.to_lists()
    n = len(A)
    for perm in itertools.permutations(range(n)):
        if all(not A[perm[r]][perm[c]] for r in range(n) for c in range(r, n)):
            return True
    return False


matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n))


class TestVector:
    def test_roundtrip(self):
        v = BoolVec.from_list([1, 0, 1, 1])
        assert v.to_list() == [1, 0, 1, 1]
        assert v.support() == [0, 2, 3]
        assert v.count() == 3

    def test_ops(self):
        a = BoolVec.from_list([1, 1, 0, 0])
        b = BoolVec.from_list([1, 0, 1, 0])
        assert (a | b).to_list() == [1, 1, 1, 0]
        assert (a & b).to_list() == [1, 0, 0, 0]
        assert (a ^ b).to_list() == [0, 1, 1, 0]
        assert (~a).to_list() == [0, 0, 1, 1]
        assert (a & b) <= a and not (a <= b)

    def test_flip(self):
        assert BoolVec.from_list([0, 1, 0]).flip(2).to_list() == [0, 1, 1]

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            BoolVec.zeros(3) | BoolVec.zeros(4)


class TestMatMul:
    def test_identity_left(self):
        v = fixture("chain5_V")
        assert mat_mul(BoolMat.identity(5), v) == v

    def test_worked_column(self):
        # C V_j is the 2nd column of the reachability matrix fixture
        C, V = fixture("chain5_C"), fixture("chain5_V")
        assert mat_mul(C, V).col(0).to_list() == [1, 1, 1, 0, 0]
        assert fixture("chain5_R").col(1).to_list() == [1, 1, 1, 0, 0]

    def test_random_against_triple_loop(self, rng):
        for _ in range(50):
            a = BoolMat.from_numpy(rng.random((6, 6)) < 0.4)
            b = BoolMat.from_numpy(rng.random((6, 6)) < 0.4)
            assert mat_mul(a, b).to_lists() == triple_loop_product(a, b)

    def test_rectangular(self, rng):
        a = BoolMat.from_numpy(rng.random((3, 7)) < 0.5)
        b = BoolMat.from_numpy(rng.random((7, 2)) < 0.5)
        assert (a @ b).to_lists() == triple_loop_product(a, b)

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            mat_mul(BoolMat.zeros(2, 3), BoolMat.zeros(2, 3))

    def test_mat_vec(self):
        C, V = fixture("chain5_C"), fixture("chain5_V")
        assert mat_vec(C, V.col(0)) == (C @ V).col(0)


class TestPower:
    def test_zeroth_power_is_identity(self, rng):
        a = BoolMat.from_numpy(rng.random((4, 4)) < 0.5)
        assert mat_pow(a, 0) == BoolMat.identity(4)

    def test_worked_column(self):
        C, V = fixture("chain5_C"), fixture("chain5_V")
        assert (mat_pow(C, 2) @ V).col(0).to_list() == [1, 1, 1, 1, 0]

    def test_strictly_lower_triangular_nilpotent(self):
        a = BoolMat.from_rows([[0, 0, 0, 0], [1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0]])
        assert mat_pow(a, 4).is_zero()
        assert nilpotency_index(a) == 4

    def test_non_square(self):
        with pytest.raises(ShapeError):
            mat_pow(BoolMat.zeros(2, 3), 2)

    @given(matrices, st.integers(0, 8))
    def test_power_matches_repeated_product(self, rows, k):
        a = BoolMat.from_rows(rows)
        expected = BoolMat.identity(a.nrows)
        for _ in range(k):
            expected = BoolMat.from_rows(triple_loop_product(expected, a))
        assert mat_pow(a, k) == expected


class TestSpectralRadius:
    def test_zero(self):
        assert spectral_radius(BoolMat.zeros(3)) == 0

    def test_example_incidence(self):
        assert spectral_radius(fixture("map3_B")) == 1

    def test_non_square(self):
        with pytest.raises(ShapeError):
            spectral_radius(BoolMat.zeros(2, 3))

    def test_random_against_eigen_oracle(self, rng):
        for _ in range(100):
            a = BoolMat.from_numpy(rng.random((5, 5)) < rng.uniform(0.05, 0.5))
            assert spectral_radius(a) == int(has_nonzero_fixed_vector(a))

    def test_three_characterizations_agree(self, rng):
        for _ in range(60):
            n = int(rng.integers(1, 8))
            a = BoolMat.from_numpy(rng.random((n, n)) < rng.uniform(0.05, 0.35))
            rho = spectral_radius(a)
            assert (rho == 0) == triangularizable(a) == mat_pow(a, n).is_zero()


class TestText:
    def test_roundtrip(self, rng):
        a = BoolMat.from_numpy(rng.random((3, 4)) < 0.5)
        assert parse_matrix(format_matrix(a)) == a

    def test_comments_ignored(self):
        assert fixture("chain5_V").shape == (5, 1)

    @pytest.mark.parametrize("text", ["", "2 2\n1 0\n", "2 2\n1 0\n0 2\n", "x y\n"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_matrix(text)


def test_permutation_convention(rng):
    a = BoolMat.from_numpy(rng.random((4, 4)) < 0.5)
    order = [2, 0, 3, 1]
    P = BoolMat.permutation(order)
    moved = P.T @ a @ P
    assert all(moved[r, c] == a[order[r], order[c]] for r in range(4) for c in range(4))


def test_hstack_and_order():
    c = BoolMat.from_rows([[1, 0], [0, 1]])
    v = BoolMat.from_rows([[1], [0]])
    assert c.hstack(v).to_lists() == [[1, 0, 1], [0, 1, 0]]
    assert BoolMat.zeros(2, 3) <= c.hstack(v) <= BoolMat.ones(2, 3)
    assert np.array_equal(c.to_numpy(), np.eye(2, dtype=bool))
