import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grsecant.fieldcore import (
    DEFAULT_PRIME,
    SECOND_PRIME,
    NotACube,
    cube_root_mod_p,
    det_exact,
    det_mod_p,
    integer_cube_root_signed,
    is_prime,
    rank_exact,
    rank_mod_p,
    validate_prime,
)


def cofactor_det(m):
    """Independent oracle: recursive cofactor expansion."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


class TestRankModP:
    def test_identity(self):
        assert rank_mod_p(np.eye(5, dtype=np.int64), DEFAULT_PRIME) == 5

    def test_zero(self):
        assert rank_mod_p(np.zeros((3, 7), dtype=np.int64)) == 0

    def test_small_known(self):
        assert rank_mod_p([[1, 2], [2, 4]], 7) == 1
        assert rank_mod_p([[1, 2], [2, 5]], 7) == 2

    def test_entries_reduced(self):
        # 7 = 0 mod 7, so this matrix is zero over GF(7).
        assert rank_mod_p([[7, 14], [21, 28]], 7) == 0

    def test_rank_bounds_random(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            m, n = rng.integers(1, 9, size=2)
            A = rng.integers(0, DEFAULT_PRIME, size=(m, n))
            r = rank_mod_p(A)
            assert 0 <= r <= min(m, n)

    def test_stacked_rank_bounds(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            A = rng.integers(0, 50, size=(4, 6))
            B = rng.integers(0, 50, size=(3, 6))
            ra, rb = rank_mod_p(A), rank_mod_p(B)
            rs = rank_mod_p(np.vstack([A, B]))
            assert max(ra, rb) <= rs <= ra + rb

    def test_mod_p_at_most_exact(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            A = rng.integers(-9, 10, size=(8, 8))
            assert rank_mod_p(A, DEFAULT_PRIME) <= rank_exact(A)


class TestDetExact:
    def test_two_by_two(self):
        assert det_exact([[1, 2], [3, 4]]) == -2

    def test_identity_21(self):
        assert det_exact(np.eye(21, dtype=np.int64)) == 1

    def test_against_cofactor_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            m = rng.integers(-9, 10, size=(4, 4)).tolist()
            assert det_exact(m) == cofactor_det(m)

    def test_singular(self):
        assert det_exact([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) == 0

    def test_size_guard(self):
        with pytest.raises(ValueError):
            det_exact(np.eye(65, dtype=np.int64))

    def test_non_square(self):
        with pytest.raises(ValueError):
            det_exact([[1, 2, 3], [4, 5, 6]])

    def test_det_mod_p_matches_exact(self):
        rng = np.random.default_rng(22)
        for _ in range(50):
            m = rng.integers(-9, 10, size=(5, 5))
            assert det_mod_p(m, DEFAULT_PRIME) == det_exact(m) % DEFAULT_PRIME


class TestRankExact:
    def test_known(self):
        assert rank_exact([[1, 2], [2, 4]]) == 1
        assert rank_exact([[2, 0], [0, 3]]) == 2

    def test_wide_with_column_skips(self):
        A = [[0, 1, 0, 2], [0, 2, 0, 4], [0, 0, 0, 1]]
        assert rank_exact(A) == 2

    def test_agrees_with_numpy_on_small_random(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            A = rng.integers(-4, 5, size=(6, 8))
            assert rank_exact(A) == np.linalg.matrix_rank(A.astype(float))


class TestCubeRoots:
    def test_exponent_value(self):
        # e = 3^(-1) mod (p-1); sanity: 3 * 21335 = 2 * 32002 + 1.
        e = pow(3, -1, DEFAULT_PRIME - 1)
        assert e == 21335
        assert 3 * e % (DEFAULT_PRIME - 1) == 1

    def test_trivial_roots(self):
        assert cube_root_mod_p(0) == 0
        assert cube_root_mod_p(1) == 1
        assert cube_root_mod_p(8) == 2

    def test_roundtrip_thousand(self):
        rng = np.random.default_rng(31)
        for x in rng.integers(0, DEFAULT_PRIME, size=1000):
            x = int(x)
            assert cube_root_mod_p(pow(x, 3, DEFAULT_PRIME)) == x

    def test_roundtrip_second_prime(self):
        rng = np.random.default_rng(32)
        for x in rng.integers(0, SECOND_PRIME, size=100):
            x = int(x)
            assert cube_root_mod_p(pow(x, 3, SECOND_PRIME), SECOND_PRIME) == x

    def test_rejects_one_mod_three_prime(self):
        with pytest.raises(ValueError):
            cube_root_mod_p(5, 7)  # 7 = 1 mod 3
        with pytest.raises(ValueError):
            cube_root_mod_p(5, 65521)


class TestIntegerCubeRoot:
    def test_examples(self):
        assert integer_cube_root_signed(-27) == -3
        assert integer_cube_root_signed(0) == 0
        assert integer_cube_root_signed(-1) == -1

    def test_not_a_cube(self):
        with pytest.raises(NotACube):
            integer_cube_root_signed(9)
        with pytest.raises(NotACube):
            integer_cube_root_signed(-25)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=-(10**30), max_value=10**30))
    def test_roundtrip(self, x):
        assert integer_cube_root_signed(x**3) == x


class TestPrimes:
    def test_defaults_are_valid(self):
        validate_prime(DEFAULT_PRIME, cube_roots=True)
        validate_prime(SECOND_PRIME, cube_roots=True)

    def test_is_prime_small(self):
        assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]

    def test_composite_rejected(self):
        with pytest.raises(ValueError):
            validate_prime(32001)
