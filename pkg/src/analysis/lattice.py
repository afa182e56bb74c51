"""
Lagrange-Gauss reduction of the lattice spanned by the conjugate vectors of
theta and theta^2, and the induced change of (T1, T2) coordinates

Only the integer Gram matrix of traces is used, so every step is exact.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple, TypeVar, Union

from sympy import Integer, Poly, expand, symbols

from src.analysis.norm_form import expand_norm_form
from src.core.exceptions import InvariantViolation, NotPositiveDefinite
from src.models.surface_models import (
    Exponents,
    GramMatrix,
    QuaternaryCubic,
    TernaryCubic,
    ThetaData,
    Unimodular2x2,
)

logger = logging.getLogger(__name__)

Form = TypeVar("Form", TernaryCubic, QuaternaryCubic)

_T = symbols("T0 T1 T2 T3")

MAX_ITERATIONS = 10_000


@dataclass(frozen=True)
class LatticeReduction:
    """Outcome of reducing the norm form of theta"""

    gram: GramMatrix
    transform: Unimodular2x2
    reduced_gram: GramMatrix
    reduced_form: TernaryCubic
    substitution: str


def gram_matrix(theta: ThetaData) -> GramMatrix:
    """[[tr(theta^2), tr(theta^3)], [tr(theta^3), tr(theta^4)]]"""
    return GramMatrix(
        g11=theta.power_sum(2), g12=theta.power_sum(3), g22=theta.power_sum(4)
    )


def _round_half_toward_zero(value: Fraction) -> int:
    floor = value.numerator // value.denominator
    remainder = value - floor
    if remainder > Fraction(1, 2):
        return floor + 1
    if remainder < Fraction(1, 2):
        return floor
    # exact half: pick the candidate closer to zero
    return floor if abs(floor) < abs(floor + 1) else floor + 1


def lagrange_reduce(gram: GramMatrix) -> Tuple[Unimodular2x2, GramMatrix]:
    """
    Lagrange-Gauss reduction carried out on the Gram matrix

    Args:
        gram: positive definite Gram matrix of the basis (b1, b2)

    Returns:
        (transform, reduced Gram) where the transform's columns express the
        reduced basis in terms of (b1, b2)
    """
    if gram.g11 <= 0 or gram.determinant <= 0:
        raise NotPositiveDefinite(f"Gram matrix {gram.rows()} is not positive definite")

    g11, g12, g22 = gram.g11, gram.g12, gram.g22
    # columns (b1, b2) in the original basis
    col1, col2 = [1, 0], [0, 1]

    for iteration in range(MAX_ITERATIONS):
        if g11 > g22:
            g11, g22 = g22, g11
            col1, col2 = col2, col1
            continue
        r = _round_half_toward_zero(Fraction(g12, g11))
        if r != 0:
            # b2 <- b2 - r b1
            g22 = g22 - 2 * r * g12 + r * r * g11
            g12 = g12 - r * g11
            col2 = [col2[0] - r * col1[0], col2[1] - r * col1[1]]
            logger.debug(f"Reduction step {iteration}: b2 <- b2 - ({r}) b1")
            continue
        if abs(2 * g12) <= g11 and g11 <= g22:
            break
    else:
        raise RuntimeError(f"Lagrange reduction did not converge for {gram.rows()}")

    transform = Unimodular2x2(col1[0], col2[0], col1[1], col2[1])
    reduced = GramMatrix(g11=g11, g12=g12, g22=g22)
    if reduced.determinant != gram.determinant:
        raise InvariantViolation(
            f"Reduction changed the Gram determinant: {gram.rows()} -> {reduced.rows()}"
        )
    return transform, reduced


def invert_unimodular(u: Unimodular2x2) -> Unimodular2x2:
    det = u.determinant
    return Unimodular2x2(det * u.d, -det * u.b, -det * u.c, det * u.a)


def _substitute(
    coefficients: Dict[Exponents, int], nvars: int, u: Unimodular2x2
) -> Dict[Exponents, int]:
    gens = _T[:nvars]
    t1, t2 = gens[1], gens[2]
    expr = Integer(0)
    for exps, c in coefficients.items():
        term = c
        for g, e in zip(gens, exps):
            term *= g**e
        expr += term
    # (T1, T2)^T = u (T1', T2')^T
    substituted = expand(
        expr.subs({t1: u.a * t1 + u.b * t2, t2: u.c * t1 + u.d * t2}, simultaneous=True)
    )
    poly = Poly(substituted, *gens)
    result = {exps: 0 for exps in coefficients}
    for exps, c in poly.as_dict().items():
        result[tuple(exps)] = int(c)
    return result


def apply_substitution(form: Form, u: Unimodular2x2) -> Form:
    """
    Re-express a form in the coordinates of the reduced basis

    T0 and T3 are untouched; (T1, T2) = u (T1', T2').
    """
    if isinstance(form, TernaryCubic):
        return TernaryCubic(p=form.p, coefficients=_substitute(form.coefficients, 3, u))
    return QuaternaryCubic(
        p=form.p,
        params=form.params,
        coefficients=_substitute(form.coefficients, 4, u),
    )


def _linear_combination(coeffs: List[int], names: List[str]) -> str:
    text = ""
    for c, name in zip(coeffs, names):
        if c == 0:
            continue
        magnitude = abs(c)
        body = name if magnitude == 1 else f"{magnitude}*{name}"
        if not text:
            text = body if c > 0 else f"-{body}"
        else:
            text += f" {'+' if c > 0 else '-'} {body}"
    return text or "0"


def substitution_string(u: Unimodular2x2) -> str:
    """'T1' = T1 - 7*T2' for the transform with columns b1, b2 + 7 b1"""
    inverse = invert_unimodular(u)
    lines = []
    for row, name in zip(inverse.rows(), ["T1'", "T2'"]):
        if name == "T2'" and row == [0, 1]:
            continue
        lines.append(f"{name} = {_linear_combination(row, ['T1', 'T2'])}")
    return ", ".join(lines)


def max_abs_coefficient(form: Union[TernaryCubic, QuaternaryCubic]) -> int:
    return max(abs(c) for c in form.coefficients.values())


@lru_cache(maxsize=None)
def reduce_norm_form(theta: ThetaData) -> LatticeReduction:
    """Reduce the (theta, theta^2) lattice and rewrite the norm form; memoized per theta"""
    gram = gram_matrix(theta)
    transform, reduced_gram = lagrange_reduce(gram)
    reduced = apply_substitution(expand_norm_form(theta), transform)
    logger.info(
        f"p={theta.p}: norm form max coefficient "
        f"{max_abs_coefficient(expand_norm_form(theta))} -> {max_abs_coefficient(reduced)}"
    )
    return LatticeReduction(
        gram=gram,
        transform=transform,
        reduced_gram=reduced_gram,
        reduced_form=reduced,
        substitution=substitution_string(transform),
    )
