"""
Tests for the norm form expansion and the assembled surface
"""

import json
import random

import pytest
from sympy import Poly, expand, symbols

from src.analysis.cyclotomic import theta_data_for
from src.analysis.norm_form import (
    build_surface,
    evaluate_form,
    expand_norm_form,
    format_form,
    monomial_label,
    multiply_in_power_basis,
    norm_form_coefficients,
    norm_form_value,
    parse_monomial_label,
    partial_derivative,
    surface_from_dict,
    surface_to_dict,
    surface_to_json,
)
from src.models.surface_models import QUATERNARY_MONOMIALS, TERNARY_MONOMIALS

P19_NORM_FORM = (1, -19, 133, 114, -1539, 5054, -209, 3971, -23826, 43681)

# Example surface with (a1, d1, a2, d2) = (19, 5, 19, 4): T3 carries
# a1a2 = 361, a1d2 + a2d1 = 171, d1d2 = 20
P19_EXAMPLE_T3_PART = {(2, 0, 0, 1): 361, (1, 0, 0, 2): 171, (0, 0, 0, 3): 20}


@pytest.fixture
def theta19():
    return theta_data_for(19)


class TestNormFormCoefficients:
    """Test cases for expand_norm_form"""

    def test_p19_golden(self, theta19):
        form = expand_norm_form(theta19)

        assert tuple(form.ordered()) == P19_NORM_FORM

    def test_monomial_order(self):
        assert TERNARY_MONOMIALS[0] == (3, 0, 0)
        assert TERNARY_MONOMIALS[-1] == (0, 0, 3)
        assert len(TERNARY_MONOMIALS) == 10
        assert len(QUATERNARY_MONOMIALS) == 20

    @pytest.mark.parametrize("p", [7, 13, 19, 31, 37])
    def test_reduces_to_t0_cubed(self, p):
        form = expand_norm_form(theta_data_for(p))

        assert form.coefficient((3, 0, 0)) == 1
        for exps, c in form.coefficients.items():
            if exps != (3, 0, 0):
                assert c % p == 0

    def test_symbolic_identity(self):
        """The closed form agrees with sympy expanding the product of conjugate forms"""
        x1, x2, x3, t0, t1, t2 = symbols("x1 x2 x3 T0 T1 T2")
        product = expand(
            (t0 + x1 * t1 + x1**2 * t2)
            * (t0 + x2 * t1 + x2**2 * t2)
            * (t0 + x3 * t1 + x3**2 * t2)
        )
        e1 = x1 + x2 + x3
        e2 = x1 * x2 + x1 * x3 + x2 * x3
        e3 = x1 * x2 * x3
        closed = norm_form_coefficients(e1, e2, e3)
        poly = Poly(product, t0, t1, t2)

        for exps, c in zip(TERNARY_MONOMIALS, closed):
            assert expand(poly.coeff_monomial(t0 ** exps[0] * t1 ** exps[1] * t2 ** exps[2]) - c) == 0


class TestNormFormValue:
    """Test cases for evaluating N"""

    def test_unit_point(self, theta19):
        form = expand_norm_form(theta19)

        assert norm_form_value(form, 1, 0, 0) == 1

    def test_norm_of_theta_is_e3(self, theta19):
        form = expand_norm_form(theta19)

        assert norm_form_value(form, 0, 1, 0) == theta19.e3

    def test_multiplicativity(self):
        """N(xy) = N(x) N(y) for random elements of Z[theta]"""
        theta = theta_data_for(13)
        form = expand_norm_form(theta)
        rng = random.Random(13)

        for _ in range(25):
            x = [rng.randint(-5, 5) for _ in range(3)]
            y = [rng.randint(-5, 5) for _ in range(3)]
            xy = multiply_in_power_basis(x, y, theta)
            assert norm_form_value(form, *xy) == norm_form_value(
                form, *x
            ) * norm_form_value(form, *y)

    def test_theta_cubed_relation(self, theta19):
        """theta * theta^2 = e1 theta^2 - e2 theta + e3"""
        product = multiply_in_power_basis((0, 1, 0), (0, 0, 1), theta19)

        assert product == (theta19.e3, -theta19.e2, theta19.e1)


class TestBuildSurface:
    """Test cases for build_surface"""

    def test_example_coefficients(self, theta19):
        surface = build_surface(theta19, 19, 5, 19, 4)

        for exps, c in P19_EXAMPLE_T3_PART.items():
            assert surface.coefficient(exps) == c
        assert surface.coefficient((3, 0, 0, 0)) == -1
        assert surface.coefficient((0, 0, 3, 0)) == -43681
        assert surface.coefficient((1, 1, 1, 0)) == 1539
        assert surface.params == (19, 5, 19, 4)

    def test_no_mixed_t3_monomials(self, theta19):
        surface = build_surface(theta19, 3, 2, 7, 5)

        for (i, j, k, l), c in surface.coefficients.items():
            if l and (j or k):
                assert c == 0

    def test_evaluate_matches_definition(self, theta19):
        """F(t) = t3 (a1t0 + d1t3)(a2t0 + d2t3) - N(t0, t1, t2)"""
        a1, d1, a2, d2 = 1, 1, 6, 1
        surface = build_surface(theta19, a1, d1, a2, d2)
        norm = expand_norm_form(theta19)
        rng = random.Random(19)

        for _ in range(20):
            t0, t1, t2, t3 = (rng.randint(-9, 9) for _ in range(4))
            expected = t3 * (a1 * t0 + d1 * t3) * (a2 * t0 + d2 * t3) - norm_form_value(
                norm, t0, t1, t2
            )
            assert evaluate_form(surface, (t0, t1, t2, t3)) == expected

    def test_known_rational_point(self, theta19):
        surface = build_surface(theta19, 1, 1, 6, 1)

        assert evaluate_form(surface, (14, 15, 2, -7)) == 0

    def test_partial_derivative(self, theta19):
        surface = build_surface(theta19, 1, 1, 6, 1)
        d3 = partial_derivative(surface.coefficients, 3)

        # d/dT3 of a1a2 T0^2 T3 + (a1d2 + a2d1) T0 T3^2 + d1d2 T3^3
        assert d3 == {(2, 0, 0, 0): 6, (1, 0, 0, 1): 14, (0, 0, 0, 2): 3}

    @pytest.mark.parametrize("p", [7, 13, 19])
    def test_shift_by_p_moves_only_t3_coefficients(self, p):
        """Parameters shifted by multiples of p change T3 terms by multiples of p"""
        theta = theta_data_for(p)
        rng = random.Random(100 + p)

        for _ in range(20):
            params = [rng.randint(-30, 30) for _ in range(4)]
            shifted = [v + p * rng.randint(-4, 4) for v in params]
            base = build_surface(theta, *params)
            moved = build_surface(theta, *shifted)

            for m in QUATERNARY_MONOMIALS:
                delta = moved.coefficient(m) - base.coefficient(m)
                if m[3] == 0:
                    assert delta == 0
                else:
                    assert delta % p == 0


class TestSerialization:
    """Test cases for labels and JSON"""

    @pytest.mark.parametrize(
        "exps,label",
        [((2, 0, 0, 1), "T0^2*T3"), ((0, 1, 1, 1), "T1*T2*T3"), ((0, 0, 3, 0), "T2^3")],
    )
    def test_labels(self, exps, label):
        assert monomial_label(exps) == label
        assert parse_monomial_label(label) == exps

    def test_json_round_trip(self, theta19):
        surface = build_surface(theta19, 19, 5, 19, 4)
        data = json.loads(surface_to_json(surface))

        assert data["coefficients"]["T2^3"] == "-43681"
        assert data["params"] == [19, 5, 19, 4]
        assert surface_from_dict(data) == surface
        assert surface_to_dict(surface_from_dict(data)) == data

    def test_format_form(self):
        text = format_form({(3, 0, 0): 1, (2, 1, 0): -19, (0, 0, 3): 0})

        assert text == "T0^3 - 19*T0^2*T1"

    def test_format_form_primes(self):
        text = format_form({(0, 1, 0): -1, (0, 0, 1): 2}, primes=("T1",))

        assert text == "-T1' + 2*T2"
