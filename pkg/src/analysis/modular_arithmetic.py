"""
Exact arithmetic in F_p: cubic residues and roots of the defining cubic

g(T) = T(a1 + d1 T)(a2 + d2 T) - 1 describes the slopes T3/T0 of the three
planes making up the reduction of the surface at p.
"""

import logging
from typing import Dict, List, Tuple

from sympy import isprime

from src.core.exceptions import (
    DegenerateLeadingCoefficient,
    GcdFactorizationOverflow,
    InputError,
    InvariantViolation,
    NotOneModThree,
    NotPrime,
    ZeroResidue,
)
from src.models.surface_models import PrimeSpec, RootSet

logger = logging.getLogger(__name__)


def make_prime_spec(p: int) -> PrimeSpec:
    """
    Build the PrimeSpec for p by enumerating x^3 mod p

    Args:
        p: a prime congruent to 1 modulo 3

    Returns:
        PrimeSpec with n = (p-1)/3 and the subgroup of nonzero cubes
    """
    p = int(p)
    if p < 2 or not isprime(p):
        raise NotPrime(f"p must be prime ≡ 1 mod 3, got {p} (not prime)")
    if p % 3 != 1:
        raise NotOneModThree(f"p must be prime ≡ 1 mod 3, got {p} ≡ {p % 3} mod 3")

    cubes = frozenset(pow(x, 3, p) for x in range(1, p))
    n = (p - 1) // 3
    if len(cubes) != n:
        raise InvariantViolation(f"Expected {n} cubes mod {p}, found {len(cubes)}")

    logger.debug(f"PrimeSpec for p={p}: n={n}")
    return PrimeSpec(p=p, n=n, cubes=cubes)


def is_cube(x: int, spec: PrimeSpec) -> bool:
    """
    Cubic residue test in F_p^*, by subgroup membership and by Euler's criterion

    Both tests are evaluated; disagreement is an arithmetic bug.
    """
    p = spec.p
    r = x % p
    if r == 0:
        raise ZeroResidue(f"{x} ≡ 0 mod {p} has no cubic character")
    by_membership = r in spec.cubes
    by_power = pow(r, spec.n, p) == 1
    if by_membership != by_power:
        raise InvariantViolation(
            f"Cube tests disagree on {r} mod {p}: "
            f"membership={by_membership}, power={by_power}"
        )
    return by_membership


def inverse_mod(x: int, m: int) -> int:
    """Inverse of x modulo m"""
    try:
        return pow(x, -1, m)
    except ValueError:
        raise ZeroResidue(f"{x} is not invertible mod {m}") from None


def defining_cubic_coefficients(
    spec: PrimeSpec, a1: int, d1: int, a2: int, d2: int
) -> Tuple[int, int, int, int]:
    """Coefficients (c3, c2, c1, c0) of g reduced into [0, p-1]"""
    p = spec.p
    return (
        (d1 * d2) % p,
        (a1 * d2 + a2 * d1) % p,
        (a1 * a2) % p,
        -1 % p,
    )


def _eval_mod(coeffs: List[int], x: int, p: int) -> int:
    """Horner evaluation, coefficients leading first"""
    acc = 0
    for c in coeffs:
        acc = (acc * x + c) % p
    return acc


def _synthetic_division(coeffs: List[int], s: int, p: int) -> Tuple[List[int], int]:
    """Divide by (T - s) mod p; returns (quotient, remainder)"""
    quotient: List[int] = []
    acc = 0
    for c in coeffs:
        acc = (acc * s + c) % p
        quotient.append(acc)
    remainder = quotient.pop()
    return quotient, remainder


def roots_of_defining_cubic(
    spec: PrimeSpec, a1: int, d1: int, a2: int, d2: int
) -> RootSet:
    """
    All roots of g(T) = T(a1 + d1T)(a2 + d2T) - 1 in F_p with multiplicities

    Roots come from evaluating g at every residue; each multiplicity is the
    number of times (T - s) divides g, found by repeated synthetic division.

    Args:
        spec: the prime
        a1, d1, a2, d2: surface parameters (any integers)

    Returns:
        RootSet whose remainder degree counts roots outside F_p
    """
    p = spec.p
    coeffs = list(defining_cubic_coefficients(spec, a1, d1, a2, d2))
    if coeffs[0] == 0:
        raise DegenerateLeadingCoefficient(
            f"p={p} divides d1*d2={d1 * d2}; g is not a cubic mod p"
        )

    candidates = [s for s in range(p) if _eval_mod(coeffs, s, p) == 0]

    roots: List[Tuple[int, int]] = []
    for s in candidates:
        multiplicity = 0
        poly = coeffs
        while len(poly) > 1:
            quotient, remainder = _synthetic_division(poly, s, p)
            if remainder != 0:
                break
            multiplicity += 1
            poly = quotient
        roots.append((s, multiplicity))

    remainder_degree = 3 - sum(m for _, m in roots)
    if remainder_degree not in (0, 2, 3):
        raise InvariantViolation(
            f"Impossible root pattern {roots} for a cubic over F_{p}"
        )

    logger.debug(
        f"g mod {p} for ({a1},{d1},{a2},{d2}): roots {roots}, "
        f"remainder degree {remainder_degree}"
    )
    return RootSet(p=p, roots=tuple(roots), irreducible_remainder_degree=remainder_degree)


def trial_division(n: int, budget: int) -> Dict[int, int]:
    """
    Factor |n| by trial division with divisors up to budget

    Raises GcdFactorizationOverflow when the remaining cofactor cannot be
    certified prime within the budget.
    """
    n = abs(int(n))
    if n == 0:
        raise InputError("Cannot factor zero")
    factors: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        if d > budget:
            raise GcdFactorizationOverflow(
                f"Cofactor {n} exceeds the trial-division budget {budget}"
            )
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors
