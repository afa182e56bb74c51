"""
Norm form expansion and assembly of the cubic surface

The surface X is the zero set of

    F = T3 (a1 T0 + d1 T3)(a2 T0 + d2 T3) - N(T0 + theta T1 + theta^2 T2)

with N the norm from the cubic field K to Q.
"""

import json
import logging
from typing import Dict, Sequence, Tuple

from src.core.exceptions import InvariantViolation
from src.models.surface_models import (
    QUATERNARY_MONOMIALS,
    TERNARY_MONOMIALS,
    Exponents,
    QuaternaryCubic,
    TernaryCubic,
    ThetaData,
)

logger = logging.getLogger(__name__)

# T3-carrying monomials of F
_T0SQ_T3 = (2, 0, 0, 1)
_T0_T3SQ = (1, 0, 0, 2)
_T3_CUBE = (0, 0, 0, 3)


def norm_form_coefficients(e1: int, e2: int, e3: int) -> Tuple[int, ...]:
    """
    Coefficients of prod_i (T0 + x_i T1 + x_i^2 T2) in terms of the
    elementary symmetric functions of x_1, x_2, x_3

    Order: T0^3, T0^2T1, T0^2T2, T0T1^2, T0T1T2, T0T2^2, T1^3, T1^2T2,
    T1T2^2, T2^3.
    """
    return (
        1,
        e1,
        e1 * e1 - 2 * e2,
        e2,
        e1 * e2 - 3 * e3,
        e2 * e2 - 2 * e1 * e3,
        e3,
        e1 * e3,
        e2 * e3,
        e3 * e3,
    )


def expand_norm_form(theta: ThetaData) -> TernaryCubic:
    """
    N(T0 + theta T1 + theta^2 T2) as an exact integer ternary cubic

    Args:
        theta: invariants of theta for the prime p

    Returns:
        TernaryCubic with T0^3 coefficient 1 and all others divisible by p
    """
    coeffs = norm_form_coefficients(theta.e1, theta.e2, theta.e3)
    form = TernaryCubic(p=theta.p, coefficients=dict(zip(TERNARY_MONOMIALS, coeffs)))

    bad = [
        m
        for m, c in form.coefficients.items()
        if m != (3, 0, 0) and c % theta.p != 0
    ]
    if form.coefficient((3, 0, 0)) != 1 or bad:
        raise InvariantViolation(
            f"Norm form for p={theta.p} does not reduce to T0^3: {bad}"
        )
    return form


def norm_form_value(form: TernaryCubic, t0: int, t1: int, t2: int) -> int:
    """Exact value of the ternary form at (t0, t1, t2)"""
    point = (t0, t1, t2)
    total = 0
    for exps, c in form.coefficients.items():
        term = c
        for t, e in zip(point, exps):
            term *= t**e
        total += term
    return total


def build_surface(theta: ThetaData, a1: int, d1: int, a2: int, d2: int) -> QuaternaryCubic:
    """
    Assemble F = T3 (a1 T0 + d1 T3)(a2 T0 + d2 T3) - N(T0 + theta T1 + theta^2 T2)

    Args:
        theta: invariants of theta
        a1, d1, a2, d2: arbitrary integers

    Returns:
        QuaternaryCubic over the 20 monomials in T0..T3
    """
    norm = expand_norm_form(theta)
    coefficients: Dict[Exponents, int] = {m: 0 for m in QUATERNARY_MONOMIALS}
    for (i, j, k), c in norm.coefficients.items():
        coefficients[(i, j, k, 0)] = -c

    coefficients[_T0SQ_T3] = a1 * a2
    coefficients[_T0_T3SQ] = a1 * d2 + a2 * d1
    coefficients[_T3_CUBE] = d1 * d2

    logger.debug(f"Built surface p={theta.p}, params=({a1},{d1},{a2},{d2})")
    return QuaternaryCubic(
        p=theta.p, params=(a1, d1, a2, d2), coefficients=coefficients
    )


def evaluate_form(form: QuaternaryCubic, point: Sequence[int]) -> int:
    """Exact integer value of F at a 4-tuple"""
    total = 0
    for exps, c in form.coefficients.items():
        if c == 0:
            continue
        term = c
        for t, e in zip(point, exps):
            if e:
                term *= t**e
        total += term
    return total


def partial_derivative(
    coefficients: Dict[Exponents, int], index: int
) -> Dict[Exponents, int]:
    """Formal partial derivative with respect to T_index"""
    result: Dict[Exponents, int] = {}
    for exps, c in coefficients.items():
        e = exps[index]
        if e == 0 or c == 0:
            continue
        lowered = list(exps)
        lowered[index] -= 1
        key = tuple(lowered)
        result[key] = result.get(key, 0) + c * e
    return result


def multiply_in_power_basis(
    x: Sequence[int], y: Sequence[int], theta: ThetaData
) -> Tuple[int, int, int]:
    """
    (x0 + x1 t + x2 t^2)(y0 + y1 t + y2 t^2) in Z[t]/(min_poly of theta),
    written back in the basis 1, t, t^2
    """
    product = [0] * 5
    for i in range(3):
        for j in range(3):
            product[i + j] += x[i] * y[j]
    # t^3 = e1 t^2 - e2 t + e3
    for k in (4, 3):
        c = product[k]
        product[k] = 0
        product[k - 1] += c * theta.e1
        product[k - 2] -= c * theta.e2
        product[k - 3] += c * theta.e3
    return product[0], product[1], product[2]


def monomial_label(exps: Exponents) -> str:
    """(2, 0, 0, 1) -> 'T0^2*T3'"""
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"T{i}")
        elif e > 1:
            parts.append(f"T{i}^{e}")
    return "*".join(parts) or "1"


def parse_monomial_label(label: str, nvars: int = 4) -> Exponents:
    exps = [0] * nvars
    for part in label.split("*"):
        name, _, power = part.partition("^")
        exps[int(name[1:])] += int(power) if power else 1
    return tuple(exps)


def surface_to_dict(form: QuaternaryCubic) -> dict:
    """JSON-ready form; big integers as decimal strings"""
    return {
        "p": form.p,
        "params": list(form.params),
        "coefficients": {
            monomial_label(m): str(form.coefficient(m)) for m in QUATERNARY_MONOMIALS
        },
    }


def surface_from_dict(data: dict) -> QuaternaryCubic:
    coefficients = {m: 0 for m in QUATERNARY_MONOMIALS}
    for label, value in data["coefficients"].items():
        coefficients[parse_monomial_label(label)] = int(value)
    a1, d1, a2, d2 = (int(v) for v in data["params"])
    return QuaternaryCubic(
        p=int(data["p"]), params=(a1, d1, a2, d2), coefficients=coefficients
    )


def surface_to_json(form: QuaternaryCubic) -> str:
    return json.dumps(surface_to_dict(form), indent=2)


def format_form(coefficients: Dict[Exponents, int], primes: Sequence[str] = ()) -> str:
    """Human-readable polynomial, graded lexicographic order"""
    terms = []
    for exps in sorted(coefficients, reverse=True):
        c = coefficients[exps]
        if c == 0:
            continue
        label = monomial_label(exps)
        for name in primes:
            label = label.replace(name, f"{name}'")
        sign = "-" if c < 0 else "+"
        magnitude = abs(c)
        body = label if magnitude == 1 else f"{magnitude}*{label}"
        terms.append(f"{sign} {body}")
    if not terms:
        return "0"
    text = " ".join(terms)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]
