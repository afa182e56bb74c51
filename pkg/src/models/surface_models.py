"""
Value types for the Hasse Surface Workbench

All types are immutable; the analysis modules own the operations on them.
"""

from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Tuple

from src.core.exceptions import InputError, NotUnimodular

Exponents = Tuple[int, ...]
Params = Tuple[int, int, int, int]


def _cubic_monomials(nvars: int) -> Tuple[Exponents, ...]:
    """Degree-3 exponent tuples, graded lexicographic (T0^3 first)"""
    exps = [e for e in product(range(4), repeat=nvars) if sum(e) == 3]
    return tuple(sorted(exps, reverse=True))


TERNARY_MONOMIALS = _cubic_monomials(3)
QUATERNARY_MONOMIALS = _cubic_monomials(4)


@dataclass(frozen=True)
class PrimeSpec:
    """A prime p = 1 (mod 3) with its subgroup of nonzero cubes"""

    p: int
    n: int
    cubes: FrozenSet[int]


@dataclass(frozen=True)
class RootSet:
    """Roots in F_p of g(T) = T(a1 + d1T)(a2 + d2T) - 1"""

    p: int
    roots: Tuple[Tuple[int, int], ...]  # (residue, multiplicity)
    irreducible_remainder_degree: int

    @property
    def residues(self) -> List[int]:
        return [s for s, _ in self.roots]

    @property
    def simple_roots(self) -> List[int]:
        return [s for s, m in self.roots if m == 1]

    def multiplicity(self, s: int) -> int:
        for root, m in self.roots:
            if root == s % self.p:
                return m
        return 0


@dataclass(frozen=True)
class ThetaData:
    """Exact invariants of the Gaussian period generator theta"""

    p: int
    power_sums: Tuple[int, ...]  # tr(theta^k) for k = 1..4
    e1: int
    e2: int
    e3: int

    @property
    def min_poly(self) -> Tuple[int, int, int, int]:
        """Coefficients of x^3 - e1 x^2 + e2 x - e3, leading first"""
        return (1, -self.e1, self.e2, -self.e3)

    def power_sum(self, k: int) -> int:
        if k == 0:
            return 3
        return self.power_sums[k - 1]


@dataclass(frozen=True)
class TernaryCubic:
    """The norm form N(T0 + theta T1 + theta^2 T2)"""

    p: int
    coefficients: Dict[Exponents, int]

    def coefficient(self, exps: Exponents) -> int:
        return self.coefficients.get(tuple(exps), 0)

    def ordered(self) -> List[int]:
        return [self.coefficient(m) for m in TERNARY_MONOMIALS]


@dataclass(frozen=True)
class QuaternaryCubic:
    """The surface X as an integer cubic form in T0..T3"""

    p: int
    params: Params
    coefficients: Dict[Exponents, int]

    def coefficient(self, exps: Exponents) -> int:
        return self.coefficients.get(tuple(exps), 0)

    def ordered(self) -> List[int]:
        return [self.coefficient(m) for m in QUATERNARY_MONOMIALS]

    def reduced_mod(self, q: int) -> Dict[Exponents, int]:
        """Nonzero coefficients reduced to [0, q-1]"""
        return {
            m: c % q for m, c in self.coefficients.items() if c % q != 0
        }


@dataclass(frozen=True, order=True)
class ProjectivePoint:
    """A primitive integer point with its first nonzero coordinate positive"""

    coords: Tuple[int, int, int, int]

    @classmethod
    def canonical(cls, coords) -> "ProjectivePoint":
        coords = tuple(int(c) for c in coords)
        if len(coords) != 4 or not any(coords):
            raise InputError(f"Not a projective point: {coords}")
        g = 0
        for c in coords:
            g = gcd(g, c)
        sign = 1 if next(c for c in coords if c) > 0 else -1
        return cls(tuple(sign * c // g for c in coords))  # type: ignore[arg-type]

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coords)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.height, self.coords)

    def __str__(self) -> str:
        return "(" + " : ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric 2x2 integer matrix [[g11, g12], [g12, g22]]"""

    g11: int
    g12: int
    g22: int

    @property
    def determinant(self) -> int:
        return self.g11 * self.g22 - self.g12 * self.g12

    def rows(self) -> List[List[int]]:
        return [[self.g11, self.g12], [self.g12, self.g22]]


@dataclass(frozen=True)
class Unimodular2x2:
    """Integer matrix [[a, b], [c, d]] of determinant +-1

    Columns are the new basis vectors written in the old basis.
    """

    a: int
    b: int
    c: int
    d: int
    determinant: int = field(init=False)

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det) != 1:
            raise NotUnimodular(f"Determinant {det} is not +-1")
        object.__setattr__(self, "determinant", det)

    @classmethod
    def identity(cls) -> "Unimodular2x2":
        return cls(1, 0, 0, 1)

    def rows(self) -> List[List[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, other: "Unimodular2x2") -> "Unimodular2x2":
        return Unimodular2x2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


@dataclass(frozen=True)
class SurfaceInput:
    """Echo of the user parameters (p, a1, d1, a2, d2)"""

    p: int
    a1: int
    d1: int
    a2: int
    d2: int
    label: Optional[str] = None

    @property
    def params(self) -> Params:
        return (self.a1, self.d1, self.a2, self.d2)
