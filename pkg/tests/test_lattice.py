"""
Tests for Lagrange-Gauss reduction of the norm form
"""

import random

import pytest

from src.analysis.cyclotomic import theta_data_for
from src.analysis.lattice import (
    apply_substitution,
    gram_matrix,
    invert_unimodular,
    lagrange_reduce,
    max_abs_coefficient,
    reduce_norm_form,
    substitution_string,
)
from src.analysis.norm_form import expand_norm_form, norm_form_value
from src.core.exceptions import NotPositiveDefinite, NotUnimodular
from src.models.surface_models import GramMatrix, Unimodular2x2

REDUCED_P19 = (1, -19, 0, 114, 57, -133, -209, -418, 1045, -209)


@pytest.fixture
def theta19():
    return theta_data_for(19)


class TestGramMatrix:
    """Test cases for gram_matrix"""

    def test_p19(self, theta19):
        gram = gram_matrix(theta19)

        assert gram.rows() == [[133, -988], [-988, 7581]]
        assert gram.determinant == 32129

    def test_p7(self):
        assert gram_matrix(theta_data_for(7)).g11 == 21


class TestLagrangeReduce:
    """Test cases for lagrange_reduce"""

    def test_p19_transform(self, theta19):
        """The reduced basis is (v1, v2 + 7 v1)"""
        transform, reduced = lagrange_reduce(gram_matrix(theta19))

        assert transform.rows() == [[1, 7], [0, 1]]
        assert (reduced.g11, reduced.g12, reduced.g22) == (133, -57, 266)

    def test_identity(self):
        transform, reduced = lagrange_reduce(GramMatrix(1, 0, 1))

        assert transform == Unimodular2x2.identity()
        assert reduced == GramMatrix(1, 0, 1)

    def test_swap(self):
        transform, reduced = lagrange_reduce(GramMatrix(5, 0, 2))

        assert (reduced.g11, reduced.g22) == (2, 5)
        assert abs(transform.determinant) == 1

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            lagrange_reduce(GramMatrix(1, 2, 1))

    def test_random_grams_are_reduced(self):
        """Output satisfies |2 g12| <= g11 <= g22 with the determinant preserved"""
        rng = random.Random(11)
        for _ in range(50):
            a, b = rng.randint(-30, 30), rng.randint(-30, 30)
            c, d = rng.randint(-30, 30), rng.randint(-30, 30)
            if a * d - b * c == 0:
                continue
            gram = GramMatrix(a * a + c * c, a * b + c * d, b * b + d * d)
            transform, reduced = lagrange_reduce(gram)

            assert abs(2 * reduced.g12) <= reduced.g11 <= reduced.g22
            assert reduced.determinant == gram.determinant
            # columns of the transform reproduce the reduced Gram matrix
            (u11, u12), (u21, u22) = transform.rows()
            g = gram.rows()
            new_g11 = u11 * (g[0][0] * u11 + g[0][1] * u21) + u21 * (g[1][0] * u11 + g[1][1] * u21)
            assert new_g11 == reduced.g11

    @pytest.mark.parametrize("p", [7, 13, 19, 31, 37, 43, 61])
    def test_max_coefficient_does_not_increase(self, p):
        theta = theta_data_for(p)
        result = reduce_norm_form(theta)

        assert max_abs_coefficient(result.reduced_form) <= max_abs_coefficient(
            expand_norm_form(theta)
        )


class TestApplySubstitution:
    """Test cases for apply_substitution"""

    def test_p19_golden(self, theta19):
        transform, _ = lagrange_reduce(gram_matrix(theta19))
        reduced = apply_substitution(expand_norm_form(theta19), transform)

        assert tuple(reduced.ordered()) == REDUCED_P19
        assert reduced.coefficient((2, 0, 1)) == 0
        assert max_abs_coefficient(reduced) == 1045

    def test_identity_is_noop(self, theta19):
        form = expand_norm_form(theta19)

        assert apply_substitution(form, Unimodular2x2.identity()) == form

    def test_inverse_round_trip(self, theta19):
        form = expand_norm_form(theta19)
        u = Unimodular2x2(2, 1, 3, 2)

        assert apply_substitution(apply_substitution(form, u), invert_unimodular(u)) == form

    def test_values_preserved(self, theta19):
        """N'(t0, s1, s2) = N(t0, a s1 + b s2, c s1 + d s2)"""
        form = expand_norm_form(theta19)
        u = Unimodular2x2(1, 7, 0, 1)
        reduced = apply_substitution(form, u)
        rng = random.Random(3)

        for _ in range(20):
            t0, s1, s2 = (rng.randint(-20, 20) for _ in range(3))
            assert norm_form_value(reduced, t0, s1, s2) == norm_form_value(
                form, t0, u.a * s1 + u.b * s2, u.c * s1 + u.d * s2
            )


class TestUnimodular:
    """Test cases for the transform helpers"""

    def test_inverse(self):
        u = Unimodular2x2(2, 1, 3, 2)

        assert u @ invert_unimodular(u) == Unimodular2x2.identity()

    def test_negative_determinant(self):
        u = Unimodular2x2(0, 1, 1, 0)

        assert u.determinant == -1
        assert invert_unimodular(u) @ u == Unimodular2x2.identity()

    def test_not_unimodular(self):
        with pytest.raises(NotUnimodular):
            Unimodular2x2(2, 0, 0, 1)

    def test_substitution_string(self):
        assert substitution_string(Unimodular2x2(1, 7, 0, 1)) == "T1' = T1 - 7*T2"

    def test_substitution_string_with_second_line(self):
        assert substitution_string(Unimodular2x2(0, 1, 1, 0)) == "T1' = T2, T2' = T1"

    def test_reduce_norm_form(self, theta19):
        result = reduce_norm_form(theta19)

        assert result.substitution == "T1' = T1 - 7*T2"
        assert result.reduced_gram.rows() == [[133, -57], [-57, 266]]
