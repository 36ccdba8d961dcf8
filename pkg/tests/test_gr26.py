import numpy as np

from grsecant.extalg import Multivector, apply_linear_map, pairing_matrix, random_unimodular
from grsecant.fieldcore import DEFAULT_PRIME, cube_root_mod_p
from grsecant.gr26 import (
    classify,
    degree7_invariant,
    demo_gr28,
    demo_gr37,
    fano_tensor,
    figure1_table,
    five_term_identity,
    five_term_tensor,
    random_decomposable,
    random_secant_point,
    random_tensor,
)


def blade1(indices, coeff=1):
    return Multivector.blade(7, [i - 1 for i in indices], coeff)


class TestClassify:
    def test_decomposable(self):
        rep = classify(blade1((1, 2, 3)))
        assert rep.rank == 6
        assert rep.in_grassmannian and rep.in_sigma2 and rep.in_sigma3
        assert rep.invariant_exact == 0

    def test_two_secant(self):
        rep = classify(blade1((1, 2, 3)) + blade1((4, 5, 6)))
        assert rep.rank == 12
        assert not rep.in_grassmannian and rep.in_sigma2 and rep.in_sigma3

    def test_three_secant_samples(self):
        rng = np.random.default_rng(2)
        hits = 0
        for _ in range(5):
            omega = random_secant_point(rng, 3)
            rep = classify(omega)
            assert rep.rank <= 18 and rep.in_sigma3
            assert rep.invariant_exact == 0
            hits += rep.rank == 18
        assert hits >= 4

    def test_fano(self):
        rep = classify(fano_tensor())
        assert rep.rank == 21
        assert not rep.in_sigma3
        assert rep.invariant_exact == -1
        assert rep.invariant_mod_p == DEFAULT_PRIME - 1

    def test_flags_are_monotone(self):
        rng = np.random.default_rng(3)
        for terms in (1, 2, 3, 4):
            rep = classify(random_secant_point(rng, terms))
            if rep.in_grassmannian:
                assert rep.in_sigma2
            if rep.in_sigma2:
                assert rep.in_sigma3

    def test_invariant_mod_p_matches_exact(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            rep = classify(random_tensor(rng))
            assert rep.invariant_mod_p == rep.invariant_exact % DEFAULT_PRIME


class TestInvariant:
    def test_five_term_all_ones(self):
        det, predicted = five_term_identity(1, 1, 1, 1, 1)
        assert det == predicted == -2
        assert degree7_invariant(fano_tensor()) == -1

    def test_vanishing_factor(self):
        assert five_term_identity(1, 1, 1, 0, 1) == (0, 0)

    def test_doubled_parameter(self):
        det, predicted = five_term_identity(2, 1, 1, 1, 1)
        assert det == predicted == -2 * (1 * 1 * 2 * 1 * 1) ** 3 == -16

    def test_random_tuples(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            a = [int(x) for x in rng.integers(-9, 10, size=5)]
            det, predicted = five_term_identity(*a)
            assert det == predicted

    def test_det_is_twice_a_cube_generic(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            degree7_invariant(random_tensor(rng, bound=9))  # raises unless twice a cube

    def test_vanishes_on_three_secants(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            assert degree7_invariant(random_secant_point(rng, 3)) == 0

    def test_generic_tensors_nonvanishing(self):
        rng = np.random.default_rng(8)
        nonzero = 0
        for _ in range(20):
            nonzero += degree7_invariant(random_tensor(rng)) != 0
        assert nonzero >= 19

    def test_cube_consistency_mod_p(self):
        inv = degree7_invariant(fano_tensor())
        half_det = pairing_matrix(fano_tensor()).det() // 2
        assert cube_root_mod_p(half_det % DEFAULT_PRIME) == inv % DEFAULT_PRIME


class TestPairingRankProperties:
    def test_subadditive_in_summands(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            w1 = random_secant_point(rng, 2)
            w2 = random_secant_point(rng, 1)
            r1 = pairing_matrix(w1).rank(DEFAULT_PRIME)
            r2 = pairing_matrix(w2).rank(DEFAULT_PRIME)
            r12 = pairing_matrix(w1 + w2).rank(DEFAULT_PRIME)
            assert r12 <= r1 + r2

    def test_figure1_ranks_invariant_under_basis_change(self):
        rng = np.random.default_rng(10)
        for row in figure1_table(seed=0):
            for _ in range(20):
                g = random_unimodular(rng, 7)
                assert round(np.linalg.det(g.astype(float))) == 1
                moved = apply_linear_map(g, row.omega)
                assert pairing_matrix(moved).rank(DEFAULT_PRIME) == row.rank

    def test_mod_p_rank_equals_exact_on_figure1(self):
        for row in figure1_table(seed=0):
            cm = pairing_matrix(row.omega)
            assert cm.rank(DEFAULT_PRIME) == cm.rank()


class TestFigure1:
    def test_expected_ranks(self):
        rows = figure1_table(seed=0)
        assert [r.expected_rank for r in rows] == [6, 10, 12, 12, 15, 18, 21]
        assert all(r.matches for r in rows)

    def test_rank_thresholds_by_summand_count(self):
        rng = np.random.default_rng(11)
        for terms, want in [(1, 6), (2, 12), (3, 18)]:
            seen = 0
            for _ in range(20):
                rank = pairing_matrix(random_secant_point(rng, terms)).rank(DEFAULT_PRIME)
                assert rank <= want
                seen += rank == want
            assert seen >= 18

    def test_labels(self):
        labels = [r.label for r in figure1_table(seed=0)]
        assert labels[0] == "decomposable" and labels[-1] == "fano"


class TestDemos:
    def test_gr37(self):
        report = demo_gr37()
        assert report.passed
        assert report.achieved_rank == 50
        assert report.expected_rank == 51
        assert report.ambient == 70

    def test_gr28(self):
        report = demo_gr28()
        assert report.passed
        assert report.achieved_rank == 74
        assert report.expected_rank == 76
        assert report.ambient == 84

    def test_reports_serialize(self):
        rec = demo_gr37().to_record()
        assert rec["achieved"] == 50 and rec["passed"] is True


class TestHelpers:
    def test_random_decomposable_is_decomposable(self):
        rng = np.random.default_rng(12)
        w = random_decomposable(rng)
        assert pairing_matrix(w).rank(DEFAULT_PRIME) <= 6

    def test_five_term_tensor_support(self):
        w = five_term_tensor(1, 2, 3, 4, 5)
        assert w.coeff((0, 2, 4)) == 1
        assert w.coeff((0, 3, 6)) == 2
        assert w.coeff((0, 1, 5)) == 3
        assert w.coeff((1, 2, 3)) == 4
        assert w.coeff((4, 5, 6)) == 5
