import math

import numpy as np
import pytest

from grsecant.codes import monomial_certificate
from grsecant.fieldcore import DEFAULT_PRIME, SECOND_PRIME, rank_mod_p
from grsecant.grassmann import CoordinateSubspace, tangent_space_dim
from grsecant.terracini import (
    CertificateUnavailable,
    ImpliedRange,
    SecantProblem,
    Verdict,
    expected_affine_dim,
    monotone_extend,
    probe,
    probe_with_specialization,
)

P = DEFAULT_PRIME


class TestExpectedDim:
    def test_examples(self):
        assert expected_affine_dim(2, 6, 3) == 35
        assert expected_affine_dim(3, 7, 3) == 51
        assert expected_affine_dim(2, 8, 4) == 76
        assert expected_affine_dim(3, 7, 4) == 68

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            expected_affine_dim(0, 5, 1)
        with pytest.raises(ValueError):
            expected_affine_dim(2, 2, 1)


class TestProbe:
    def test_defective_gr26(self):
        v = probe(SecantProblem(2, 6, 3, seed=0))
        assert v.verdict is Verdict.INCONCLUSIVE_DEFICIT
        assert (v.achieved_rank, v.expected_rank, v.deficit) == (34, 35, 1)

    def test_defective_gr37_s3(self):
        v = probe(SecantProblem(3, 7, 3, seed=0))
        assert (v.achieved_rank, v.expected_rank) == (50, 51)

    def test_defective_gr37_s4(self):
        v = probe(SecantProblem(3, 7, 4, seed=0))
        assert (v.achieved_rank, v.expected_rank, v.deficit) == (64, 68, 4)

    def test_defective_gr28(self):
        v = probe(SecantProblem(2, 8, 4, seed=0))
        assert (v.achieved_rank, v.expected_rank, v.deficit) == (74, 76, 2)

    def test_certified_expected(self):
        v = probe(SecantProblem(2, 9, 5, seed=0))
        assert v.verdict is Verdict.CERTIFIED_EXPECTED
        assert v.achieved_rank == 110 == 5 * 22

    def test_fills(self):
        v = probe(SecantProblem(2, 9, 6, seed=0))
        assert v.verdict is Verdict.CERTIFIED_FILLS
        assert v.achieved_rank == 120

    def test_k1_baseline(self):
        # A generic 6x6 skew form splits into 3 decomposables: sigma_3 fills.
        v = probe(SecantProblem(1, 5, 3, seed=0))
        assert v.verdict is Verdict.CERTIFIED_FILLS
        assert v.achieved_rank == 15

    def test_k1_pfaffian_oracle(self):
        # Independent check of the baseline: a random sum of three decomposable
        # skew forms has full rank 6, so it is not a sum of fewer.
        rng = np.random.default_rng(0)
        M = np.zeros((6, 6), dtype=np.int64)
        for _ in range(3):
            u, v = rng.integers(0, P, size=(2, 6))
            M = (M + np.outer(u, v) - np.outer(v, u)) % P
        assert rank_mod_p(M, P) == 6

    def test_deficits_stable_across_seeds_and_primes(self):
        for seed in range(3):
            for prime in (P, SECOND_PRIME):
                v = probe(SecantProblem(2, 6, 3, prime=prime, seed=seed))
                assert (v.achieved_rank, v.expected_rank) == (34, 35)

    def test_rank_monotone_in_s(self):
        prev = 0
        for s in range(1, 7):
            v = probe(SecantProblem(2, 7, s, seed=3, trials=1))
            assert v.achieved_rank >= prev
            assert v.achieved_rank <= prev + tangent_space_dim(2, 7)
            prev = v.achieved_rank

    def test_determinism(self):
        a = probe(SecantProblem(3, 8, 3, seed=9))
        b = probe(SecantProblem(3, 8, 3, seed=9))
        ra, rb = a.to_record(), b.to_record()
        ra.pop("elapsed_ms"), rb.pop("elapsed_ms")
        assert ra == rb

    def test_record_shape(self):
        rec = probe(SecantProblem(2, 6, 3, seed=1)).to_record()
        for key in ("k", "n", "s", "prime", "seed", "trials", "achieved", "expected", "ambient", "verdict", "elapsed_ms"):
            assert key in rec


class TestStrategies:
    def test_monomial_matches_random(self):
        pm = probe(SecantProblem(2, 12, 4, seed=0), strategy="monomial")
        pr = probe(SecantProblem(2, 12, 4, seed=0), strategy="random")
        assert pm.verdict is Verdict.CERTIFIED_EXPECTED
        assert pm.achieved_rank == pr.achieved_rank

    def test_monomial_unavailable(self):
        with pytest.raises(CertificateUnavailable):
            probe(SecantProblem(3, 9, 6, seed=0), strategy="monomial")

    def test_auto_falls_back(self):
        v = probe(SecantProblem(3, 9, 6, seed=0), strategy="auto")
        assert v.verdict is Verdict.CERTIFIED_EXPECTED
        assert v.achieved_rank == 150

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            probe(SecantProblem(2, 6, 3), strategy="exhaustive")


class TestTheorem34Grid:
    def test_grid_certified(self):
        # Whenever 3(s-1) <= n-k (k >= 2), the probe must certify.
        for k in (2, 3, 4):
            for n in range(2 * k + 1, 17):
                for s in range(1, 7):
                    if 3 * (s - 1) > n - k:
                        continue
                    v = probe(SecantProblem(k, n, s, seed=0, trials=1), strategy="auto")
                    assert v.verdict.is_certified(), (k, n, s, v.to_record())

    def test_grid_spot_checks_with_random_points(self):
        for k, n, s in [(2, 9, 3), (3, 10, 3), (4, 12, 2), (2, 14, 5)]:
            v = probe(SecantProblem(k, n, s, seed=0), strategy="random")
            assert v.verdict.is_certified(), (k, n, s)


class TestMonomialCrossCheck:
    def test_certificate_implies_certified_probe(self):
        for k in (2, 3):
            for n in range(2 * k + 1, 15):
                for s in (2, 3, 4):
                    cert = monomial_certificate(k, n, s)
                    if cert is None or s * tangent_space_dim(k, n) > math.comb(n + 1, k + 1):
                        continue
                    v = probe(SecantProblem(k, n, s, seed=0), strategy="random")
                    assert v.verdict.is_certified(), (k, n, s)


class TestSpecialization:
    def test_three_span_configuration(self):
        n = 17
        L = CoordinateSubspace(n, tuple(range(6, 18)))
        M = CoordinateSubspace(n, tuple(range(0, 6)) + tuple(range(12, 18)))
        N = CoordinateSubspace(n, tuple(range(0, 12)))
        problem = SecantProblem(
            2, n, 12, seed=0,
            point_constraints=(L,) * 4 + (M,) * 4 + (N,) * 4,
            extra_spans=(L, M, N),
        )
        v = probe_with_specialization(problem, math.comb(18, 3))
        assert v.verdict is Verdict.CERTIFIED_FILLS
        assert v.residual_dimension == 0

    def test_two_span_residuals(self):
        # floor((6n-49)/9) points per span, 4 free points; residual by n mod 3.
        for n, expected_residual in [(11, 32), (12, 20), (13, 8)]:
            s = (6 * n - 49) // 9
            L = CoordinateSubspace(n, tuple(range(6, n + 1)))
            M = CoordinateSubspace(n, tuple(range(0, n - 5)))
            target = math.comb(n + 1, 3) - expected_residual
            problem = SecantProblem(
                2, n, 2 * s + 4, seed=0,
                point_constraints=(L,) * s + (M,) * s + (None,) * 4,
                extra_spans=(L, M),
            )
            v = probe_with_specialization(problem, target)
            assert v.achieved_rank == target
            assert v.residual_dimension == expected_residual

    def test_inconsistent_constraint_rejected(self):
        n = 11
        L = CoordinateSubspace(n, tuple(range(6, n + 1)))
        stray = CoordinateSubspace(n, tuple(range(0, 4)))
        problem = SecantProblem(
            2, n, 1, seed=0, point_constraints=(stray,), extra_spans=(L,),
        )
        with pytest.raises(ValueError):
            probe_with_specialization(problem, 100)


class TestMonotoneExtend:
    def test_expected_extends_down(self):
        v = probe(SecantProblem(2, 9, 5, seed=0))
        rng = monotone_extend(v)
        assert rng == ImpliedRange(Verdict.CERTIFIED_EXPECTED, 1, 5)
        assert rng.covers(1) and rng.covers(5) and not rng.covers(6)

    def test_fills_extends_up(self):
        v = probe(SecantProblem(2, 9, 6, seed=0))
        rng = monotone_extend(v)
        assert rng == ImpliedRange(Verdict.CERTIFIED_FILLS, 6, None)
        assert rng.covers(6) and rng.covers(100) and not rng.covers(5)

    def test_rejects_inconclusive(self):
        v = probe(SecantProblem(2, 6, 3, seed=0))
        with pytest.raises(ValueError):
            monotone_extend(v)


class TestProblemValidation:
    def test_bad_shapes(self):
        with pytest.raises(ValueError):
            SecantProblem(2, 6, 0)
        with pytest.raises(ValueError):
            SecantProblem(2, 2, 1)
        with pytest.raises(ValueError):
            SecantProblem(2, 6, 2, point_constraints=(None,))
        with pytest.raises(ValueError):
            SecantProblem(2, 6, 1, prime=32001)

    def test_wrong_space_constraint(self):
        with pytest.raises(ValueError):
            SecantProblem(2, 6, 1, point_constraints=(CoordinateSubspace(9, (0, 1, 2)),))
