"""
Invariants of theta = tr_{Q(zeta_p)/K}(zeta_p - 1), the generator of the cubic
subfield K of Q(zeta_p)

Elements of Z[zeta_p] are kept as length-p integer vectors in the redundant
basis 1, zeta, ..., zeta^(p-1). The relation 1 + zeta + ... + zeta^(p-1) = 0
only enters when a trace is taken.
"""

import logging
import threading
from dataclasses import dataclass
from math import isqrt
from typing import Dict, List, Tuple

import mpmath
import numpy as np
from sympy import Poly, symbols

from src.analysis.modular_arithmetic import make_prime_spec
from src.core.exceptions import InvariantViolation, NonIntegralTrace
from src.models.surface_models import PrimeSpec, ThetaData

logger = logging.getLogger(__name__)

_x = symbols("x")

_THETA_CACHE: Dict[int, ThetaData] = {}
_lock = threading.Lock()


@dataclass(frozen=True)
class CyclotomicElement:
    """sum c_i zeta^i over exponents 0..p-1"""

    p: int
    coeffs: np.ndarray  # dtype=object, exact Python ints

    @classmethod
    def from_coefficients(cls, p: int, coeffs) -> "CyclotomicElement":
        vec = np.zeros(p, dtype=object)
        for i, c in enumerate(coeffs):
            vec[i % p] += int(c)
        return cls(p=p, coeffs=vec)

    @classmethod
    def constant(cls, p: int, value: int) -> "CyclotomicElement":
        return cls.from_coefficients(p, [value])

    def __add__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        return CyclotomicElement(self.p, self.coeffs + other.coeffs)

    def __sub__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        return CyclotomicElement(self.p, self.coeffs - other.coeffs)

    def __mul__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        # zeta^i * zeta^j = zeta^((i + j) mod p): cyclic convolution, one
        # rolled copy per nonzero coefficient of the sparser factor
        left, right = self.coeffs, other.coeffs
        if np.count_nonzero(left) < np.count_nonzero(right):
            left, right = right, left
        result = np.zeros(self.p, dtype=object)
        for j in np.flatnonzero(right):
            result = result + right[j] * np.roll(left, int(j))
        return CyclotomicElement(self.p, result)

    def __pow__(self, k: int) -> "CyclotomicElement":
        result = CyclotomicElement.constant(self.p, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        """Equality in Z[zeta_p], i.e. modulo the all-ones vector"""
        if not isinstance(other, CyclotomicElement) or other.p != self.p:
            return NotImplemented
        diff = self.coeffs - other.coeffs
        return all(c == diff[0] for c in diff)

    def coefficient_list(self) -> List[int]:
        return [int(c) for c in self.coeffs]


def theta_element(spec: PrimeSpec) -> CyclotomicElement:
    """theta = -n + sum of zeta^i over the nonzero cubes i"""
    coeffs = [0] * spec.p
    coeffs[0] = -spec.n
    for i in spec.cubes:
        coeffs[i] = 1
    return CyclotomicElement.from_coefficients(spec.p, coeffs)


def trace_to_rationals(x: CyclotomicElement, spec: PrimeSpec) -> int:
    """
    tr_{K/Q}(x) for x in K

    tr_{Q(zeta)/Q}(zeta^a) is p-1 for a = 0 and -1 otherwise, and for x in K
    the full trace is n times tr_{K/Q}(x).
    """
    full_trace = spec.p * int(x.coeffs[0]) - int(sum(x.coeffs))
    quotient, remainder = divmod(full_trace, spec.n)
    if remainder != 0:
        raise NonIntegralTrace(
            f"Trace {full_trace} of an element of K is not divisible by n={spec.n}"
        )
    return quotient


def elementary_from_power_sums(power_sums) -> Tuple[int, int, int]:
    """Newton's identities for three variables"""
    s1, s2, s3 = power_sums[0], power_sums[1], power_sums[2]
    e1 = s1
    two_e2 = e1 * s1 - s2
    three_e3 = s3 - e1 * s2 + (two_e2 // 2) * s1
    if two_e2 % 2 or three_e3 % 3:
        raise InvariantViolation(
            f"Power sums {power_sums[:3]} are not those of an algebraic integer"
        )
    return e1, two_e2 // 2, three_e3 // 3


def minimal_polynomial_discriminant(theta: ThetaData) -> int:
    return int(Poly(list(theta.min_poly), _x).discriminant())


def _verify_theta_data(theta: ThetaData) -> None:
    p = theta.p
    e1, e2, e3 = theta.e1, theta.e2, theta.e3
    s = [theta.power_sum(k) for k in range(5)]
    failures = []

    if e1 != -p:
        failures.append(f"e1={e1} != -p")
    if e2 % p:
        failures.append(f"p does not divide e2={e2}")
    if e3 % p or e3 % (p * p) == 0:
        failures.append(f"p does not exactly divide e3={e3}")
    # Newton's identities through k = 4
    if s[1] != e1:
        failures.append("s1 != e1")
    if s[2] != e1 * s[1] - 2 * e2:
        failures.append("s2 != e1 s1 - 2 e2")
    if s[3] != e1 * s[2] - e2 * s[1] + 3 * e3:
        failures.append("s3 != e1 s2 - e2 s1 + 3 e3")
    if s[4] != e1 * s[3] - e2 * s[2] + e3 * s[1]:
        failures.append("s4 != e1 s3 - e2 s2 + e3 s1")

    poly = Poly(list(theta.min_poly), _x)
    disc = int(poly.discriminant())
    if disc <= 0 or isqrt(disc) ** 2 != disc:
        failures.append(f"discriminant {disc} is not a positive square")
    if not poly.is_irreducible:
        failures.append("minimal polynomial is reducible over Q")

    if failures:
        raise InvariantViolation(f"Theta invariants fail for p={p}: {failures}")


def compute_theta_data(spec: PrimeSpec) -> ThetaData:
    """
    Power sums, elementary symmetric functions and minimal polynomial of theta

    Results are memoized per prime.

    Args:
        spec: the prime

    Returns:
        ThetaData with every invariant verified
    """
    if spec.p in _THETA_CACHE:
        return _THETA_CACHE[spec.p]

    logger.info(f"Computing theta invariants for p={spec.p}")
    theta = theta_element(spec)
    power = CyclotomicElement.constant(spec.p, 1)
    power_sums = []
    for _ in range(4):
        power = power * theta
        power_sums.append(trace_to_rationals(power, spec))

    e1, e2, e3 = elementary_from_power_sums(power_sums)
    data = ThetaData(p=spec.p, power_sums=tuple(power_sums), e1=e1, e2=e2, e3=e3)
    _verify_theta_data(data)
    logger.debug(f"p={spec.p}: (e1, e2, e3) = ({e1}, {e2}, {e3})")

    with _lock:
        _THETA_CACHE[spec.p] = data
    return data


def theta_data_for(p: int) -> ThetaData:
    return compute_theta_data(make_prime_spec(p))


def theta_conjugates(spec: PrimeSpec, dps: int = 50) -> List[mpmath.mpf]:
    """
    The three real conjugates of theta from high-precision roots of unity

    theta^(j) = -n + sum over cubes c of cos(2 pi r_j c / p), r_j running over
    representatives of the cosets of the cubes in F_p^*.
    """
    p = spec.p
    representatives: List[int] = []
    covered: set = set()
    for r in range(1, p):
        if r in covered:
            continue
        representatives.append(r)
        covered.update((r * c) % p for c in spec.cubes)

    with mpmath.workdps(dps):
        conjugates = []
        for r in representatives:
            total = mpmath.mpf(-spec.n)
            for c in sorted(spec.cubes):
                total += mpmath.cos(2 * mpmath.pi * r * c / p)
            conjugates.append(total)
    return conjugates
