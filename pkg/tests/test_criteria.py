"""
Tests for the global obstruction, the local-solvability hypotheses and the
combined verdict
"""

import pytest

from src.analysis.criteria import (
    ObstructionSummary,
    Verdict,
    check_theorem_ii_hypotheses,
    check_theorem_iii_hypotheses,
    classify,
    decomposes_in_K,
    equivalent_mod_p,
    global_obstruction,
    shift_parameters,
)
from src.analysis.modular_arithmetic import make_prime_spec
from src.core.exceptions import HypothesesNotMet, InvariantViolation, RamifiedPrime
from src.models.surface_models import ProjectivePoint


@pytest.fixture
def spec19():
    return make_prime_spec(19)


@pytest.fixture
def spec7():
    return make_prime_spec(7)


class TestGlobalObstruction:
    """Test cases for the cubic character at the roots of g"""

    def test_all_values_five(self, spec19):
        report = global_obstruction(spec19, 19, 5, 19, 4)

        assert report.roots_in_fp.residues == [1, 7, 11]
        assert [v.value for v in report.values] == [5, 5, 5]
        assert report.summary == ObstructionSummary.ALL_NONCUBE

    def test_three_noncubes(self, spec19):
        report = global_obstruction(spec19, 1, 1, 12, 1)

        assert report.roots_in_fp.residues == [12, 15, 17]
        assert [v.value for v in report.values] == [9, 15, 10]
        assert not any(v.is_cube for v in report.values)
        assert report.summary == ObstructionSummary.ALL_NONCUBE

    def test_single_root(self, spec19):
        report = global_obstruction(spec19, 1, 1, 2, 1)

        assert report.roots_in_fp.residues == [5]
        assert report.values[0].value == 5
        assert report.summary == ObstructionSummary.ALL_NONCUBE

    def test_mixed(self, spec19):
        report = global_obstruction(spec19, 1, 1, 6, 1)

        assert [v.value for v in report.values] == [13, 18, 16]
        assert [v.is_cube for v in report.values] == [False, True, False]
        assert report.summary == ObstructionSummary.MIXED

    def test_swinnerton_dyer_tuple(self, spec7):
        report = global_obstruction(spec7, 1, 1, 1, 2)

        assert [(v.s, v.value, v.is_cube) for v in report.values] == [(5, 4, False)]

    def test_no_roots(self, spec7):
        report = global_obstruction(spec7, 1, 1, 1, 1)

        assert report.values == ()
        assert report.summary == ObstructionSummary.NO_FP_ROOTS

    def test_symmetric_values_reported(self, spec19):
        """(a2 + d2 s)/s at s = 5 for (1, 1, 2, 1) is 7 * 5^-1 = 9 mod 19"""
        report = global_obstruction(spec19, 1, 1, 2, 1)

        assert report.symmetric_values[0].s == 5
        assert report.symmetric_values[0].value == 9

    def test_product_of_values_is_inverse_of_s(self, spec19):
        """g(s) = 0 means s^3 * v1 * v2 = 1"""
        report = global_obstruction(spec19, 1, 1, 12, 1)

        for v, w in zip(report.values, report.symmetric_values):
            assert (pow(v.s, 3) * v.value * w.value) % 19 == 1

    @pytest.mark.parametrize("params", [(1, 19, 1, 1), (1, 2, 1, 4)])
    def test_hypotheses_not_met(self, spec19, params):
        with pytest.raises(HypothesesNotMet):
            global_obstruction(spec19, *params)


class TestHypotheses:
    """Test cases for the hypothesis checklists"""

    def test_obstruction_hypotheses(self, spec19):
        checklist = check_theorem_ii_hypotheses(spec19, 1, 2, 1, 4)

        assert not checklist.satisfied
        assert checklist.items["p_does_not_divide_d1d2"]
        assert not checklist.items["gcd_d1_d2_is_one"]

    def test_local_hypotheses_satisfied(self, spec19):
        checklist = check_theorem_iii_hypotheses(spec19, 1, 1, 12, 1)

        assert checklist.satisfied
        assert checklist.notes["simple_roots"] == "12, 15, 17"

    def test_gcd_factor_must_split(self, spec19):
        """gcd(a1, d1) = 2 and 2 is not a cube mod 19"""
        checklist = check_theorem_iii_hypotheses(spec19, 2, 2, 1, 1)

        assert not checklist.items["gcd_a1_d1_factors_decompose"]
        assert "2:not split" in checklist.notes["gcd_a1_d1"]

    def test_gcd_factor_that_splits(self, spec19):
        """7 is a cube mod 19"""
        checklist = check_theorem_iii_hypotheses(spec19, 7, 7, 1, 1)

        assert checklist.items["gcd_a1_d1_factors_decompose"]

    def test_no_simple_root(self, spec7):
        checklist = check_theorem_iii_hypotheses(spec7, 1, 1, 3, 1)

        assert not checklist.items["simple_root_in_fp"]
        assert not checklist.satisfied

    @pytest.mark.parametrize("q,expected", [(7, True), (11, True), (2, False), (3, False)])
    def test_decomposes_in_K(self, spec19, q, expected):
        assert decomposes_in_K(q, spec19) is expected

    def test_ramified_prime(self, spec19):
        with pytest.raises(RamifiedPrime):
            decomposes_in_K(19, spec19)


class TestClassify:
    """Test cases for the combined verdict"""

    @pytest.mark.parametrize(
        "p,params",
        [
            (19, (19, 5, 19, 4)),
            (19, (1, 1, 12, 1)),
            (19, (1, 1, 2, 1)),
            (7, (1, 1, 1, 2)),
        ],
    )
    def test_counterexamples(self, p, params):
        result = classify(make_prime_spec(p), *params)

        assert result.verdict == Verdict.HASSE_COUNTEREXAMPLE
        assert result.theorem_ii.satisfied
        assert result.theorem_iii.satisfied

    def test_weak_approximation_candidate(self, spec19):
        point = ProjectivePoint((14, 15, 2, -7))
        result = classify(spec19, 1, 1, 6, 1, search_result=point)

        assert result.verdict == Verdict.WEAK_APPROX_FAILURE_CANDIDATE
        assert result.point_residue.s == 9
        assert result.point_residue.value == 18
        assert result.point_residue.is_cube

    def test_mixed_without_point(self, spec19):
        result = classify(spec19, 1, 1, 6, 1)

        assert result.verdict == Verdict.INCONCLUSIVE

    def test_no_roots(self, spec7):
        result = classify(spec7, 1, 1, 1, 1)

        assert result.verdict == Verdict.NO_RATIONAL_POINTS_LOCALITY_UNKNOWN
        assert result.obstruction.summary == ObstructionSummary.NO_FP_ROOTS

    def test_noncube_without_local_hypotheses(self, spec19):
        """(20, 58, 12, 1) is congruent to (1, 1, 12, 1) but gcd(20, 58) = 2 does not split"""
        result = classify(spec19, 20, 58, 12, 1)

        assert result.obstruction.summary == ObstructionSummary.ALL_NONCUBE
        assert not result.theorem_iii.items["gcd_a1_d1_factors_decompose"]
        assert result.verdict == Verdict.NO_RATIONAL_POINTS_LOCALITY_UNKNOWN

    @pytest.mark.parametrize("params", [(1, 19, 1, 1), (1, 2, 1, 4)])
    def test_hypotheses_not_met(self, spec19, params):
        result = classify(spec19, *params)

        assert result.verdict == Verdict.HYPOTHESES_NOT_MET
        assert result.obstruction is None

    def test_contradicting_point(self, spec19):
        """A slope with a non-cube value cannot come from a rational point"""
        with pytest.raises(InvariantViolation):
            classify(spec19, 1, 1, 12, 1, search_result=ProjectivePoint((1, 0, 0, 12)))

    def test_shifted_family_keeps_verdict(self, spec19):
        base = (1, 1, 12, 1)
        shifted = shift_parameters(base, 19, (1, 0, 2, 0))

        assert shifted == (20, 1, 50, 1)
        assert equivalent_mod_p(shifted, 19) == equivalent_mod_p(base, 19)
        assert classify(spec19, *shifted).verdict == classify(spec19, *base).verdict
