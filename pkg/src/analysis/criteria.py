"""
Global obstruction and local-solvability hypotheses, combined into a verdict

The obstruction: if s = t3/t0 mod p is the slope of a rational point, then
(a1 + d1 s)/s must be a cube in F_p^*. When this fails at every F_p-rational
root of g, the surface has no rational point. With a simple F_p-rational root
and the gcd conditions, the surface has points everywhere locally.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Dict, Optional, Sequence, Tuple

from src.analysis.modular_arithmetic import (
    inverse_mod,
    is_cube,
    roots_of_defining_cubic,
    trial_division,
)
from src.analysis.point_search import ResidueCheck, residue_check
from src.config.config import config
from src.core.exceptions import HypothesesNotMet, InvariantViolation, RamifiedPrime
from src.models.surface_models import Params, PrimeSpec, ProjectivePoint, RootSet

logger = logging.getLogger(__name__)


class ObstructionSummary(str, Enum):
    ALL_NONCUBE = "ALL_NONCUBE"
    MIXED = "MIXED"
    ALL_CUBE = "ALL_CUBE"
    NO_FP_ROOTS = "NO_FP_ROOTS"


class Verdict(str, Enum):
    HASSE_COUNTEREXAMPLE = "HASSE_COUNTEREXAMPLE"
    WEAK_APPROX_FAILURE_CANDIDATE = "WEAK_APPROX_FAILURE_CANDIDATE"
    NO_RATIONAL_POINTS_LOCALITY_UNKNOWN = "NO_RATIONAL_POINTS_LOCALITY_UNKNOWN"
    HYPOTHESES_NOT_MET = "HYPOTHESES_NOT_MET"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class RootValue:
    """(a1 + d1 s)/s at one F_p-rational root s"""

    s: int
    value: int
    is_cube: bool


@dataclass(frozen=True)
class ObstructionReport:
    """Cubic character of (a1 + d1 s)/s over the F_p-rational roots of g"""

    roots_in_fp: RootSet
    values: Tuple[RootValue, ...]
    summary: ObstructionSummary
    # (a2 + d2 s)/s; reported, never used in the verdict
    symmetric_values: Tuple[RootValue, ...] = ()


@dataclass(frozen=True)
class HypothesisChecklist:
    """Named conditions of a criterion and whether each holds"""

    satisfied: bool
    items: Dict[str, bool]
    notes: Dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Classification:
    """Verdict with its full evidence"""

    verdict: Verdict
    obstruction: Optional[ObstructionReport]
    theorem_ii: HypothesisChecklist
    theorem_iii: HypothesisChecklist
    point: Optional[ProjectivePoint] = None
    point_residue: Optional[ResidueCheck] = None
    reason: str = ""


def check_theorem_ii_hypotheses(
    spec: PrimeSpec, a1: int, d1: int, a2: int, d2: int
) -> HypothesisChecklist:
    """p does not divide d1 d2, and gcd(d1, d2) = 1"""
    items = {
        "p_does_not_divide_d1d2": (d1 * d2) % spec.p != 0,
        "gcd_d1_d2_is_one": gcd(d1, d2) == 1,
    }
    return HypothesisChecklist(satisfied=all(items.values()), items=items)


def _classify_values(values: Sequence[RootValue]) -> ObstructionSummary:
    if not values:
        return ObstructionSummary.NO_FP_ROOTS
    cubes = sum(1 for v in values if v.is_cube)
    if cubes == 0:
        return ObstructionSummary.ALL_NONCUBE
    if cubes == len(values):
        return ObstructionSummary.ALL_CUBE
    return ObstructionSummary.MIXED


def _root_value(spec: PrimeSpec, s: int, a: int, d: int) -> RootValue:
    value = ((a + d * s) * inverse_mod(s, spec.p)) % spec.p
    if value == 0:
        raise InvariantViolation(
            f"(a + d s)/s vanishes at root s={s} mod {spec.p}; g(s) cannot be 0"
        )
    return RootValue(s=s, value=value, is_cube=is_cube(value, spec))


def global_obstruction(
    spec: PrimeSpec, a1: int, d1: int, a2: int, d2: int
) -> ObstructionReport:
    """
    Evaluate (a1 + d1 s)/s at every F_p-rational root s of g

    Args:
        spec: the prime
        a1, d1, a2, d2: surface parameters satisfying the gcd hypotheses

    Returns:
        ObstructionReport with the per-root cube flags and their summary
    """
    hypotheses = check_theorem_ii_hypotheses(spec, a1, d1, a2, d2)
    if not hypotheses.satisfied:
        failed = [k for k, ok in hypotheses.items.items() if not ok]
        raise HypothesesNotMet(f"Obstruction hypotheses fail: {failed}")

    roots = roots_of_defining_cubic(spec, a1, d1, a2, d2)
    values = tuple(_root_value(spec, s, a1, d1) for s in roots.residues)
    symmetric = tuple(_root_value(spec, s, a2, d2) for s in roots.residues)
    summary = _classify_values(values)

    logger.debug(
        f"Obstruction p={spec.p} ({a1},{d1},{a2},{d2}): "
        f"{[(v.s, v.value, v.is_cube) for v in values]} -> {summary.value}"
    )
    return ObstructionReport(
        roots_in_fp=roots, values=values, summary=summary, symmetric_values=symmetric
    )


def decomposes_in_K(q: int, spec: PrimeSpec) -> bool:
    """A prime q != p splits completely in K iff q is a cube mod p"""
    if q == spec.p:
        raise RamifiedPrime(f"q={q} is the ramified prime of K")
    return (q % spec.p) in spec.cubes


def _gcd_factors_decompose(
    spec: PrimeSpec, a: int, d: int, budget: int
) -> Tuple[bool, str]:
    g = gcd(a, d)
    if g == 0:
        return False, "gcd is 0"
    if g == 1:
        return True, "gcd is 1"
    factors = trial_division(g, budget)
    statuses = []
    ok = True
    for q in sorted(factors):
        split = q != spec.p and decomposes_in_K(q, spec)
        ok = ok and split
        statuses.append(f"{q}:{'split' if split else 'not split'}")
    return ok, f"gcd {g} = " + ", ".join(statuses)


def check_theorem_iii_hypotheses(
    spec: PrimeSpec,
    a1: int,
    d1: int,
    a2: int,
    d2: int,
    budget: Optional[int] = None,
) -> HypothesisChecklist:
    """
    p does not divide d1 d2; every prime factor of gcd(a1, d1) and gcd(a2, d2)
    decomposes in K; g has a simple root in F_p
    """
    budget = config.criteria.trial_division_budget if budget is None else budget
    notes: Dict[str, str] = {}

    p_ok = (d1 * d2) % spec.p != 0
    gcd1_ok, notes["gcd_a1_d1"] = _gcd_factors_decompose(spec, a1, d1, budget)
    gcd2_ok, notes["gcd_a2_d2"] = _gcd_factors_decompose(spec, a2, d2, budget)

    simple_ok = False
    if p_ok:
        roots = roots_of_defining_cubic(spec, a1, d1, a2, d2)
        simple_ok = bool(roots.simple_roots)
        notes["simple_roots"] = ", ".join(str(s) for s in roots.simple_roots) or "none"

    items = {
        "p_does_not_divide_d1d2": p_ok,
        "gcd_a1_d1_factors_decompose": gcd1_ok,
        "gcd_a2_d2_factors_decompose": gcd2_ok,
        "simple_root_in_fp": simple_ok,
    }
    return HypothesisChecklist(satisfied=all(items.values()), items=items, notes=notes)


def classify(
    spec: PrimeSpec,
    a1: int,
    d1: int,
    a2: int,
    d2: int,
    search_result: Optional[ProjectivePoint] = None,
) -> Classification:
    """
    Combine the obstruction, the local-solvability hypotheses and an optional
    rational point into a verdict

    Args:
        spec: the prime
        a1, d1, a2, d2: surface parameters
        search_result: a rational point found on the surface, if any

    Returns:
        Classification
    """
    theorem_ii = check_theorem_ii_hypotheses(spec, a1, d1, a2, d2)
    theorem_iii = check_theorem_iii_hypotheses(spec, a1, d1, a2, d2)

    if not theorem_ii.satisfied:
        return Classification(
            verdict=Verdict.HYPOTHESES_NOT_MET,
            obstruction=None,
            theorem_ii=theorem_ii,
            theorem_iii=theorem_iii,
            point=search_result,
            reason="p | d1*d2 or gcd(d1, d2) != 1",
        )

    obstruction = global_obstruction(spec, a1, d1, a2, d2)
    summary = obstruction.summary

    point_residue = None
    if search_result is not None:
        point_residue = residue_check(search_result, spec.p, (a1, d1, a2, d2))
        if not point_residue.is_cube or summary == ObstructionSummary.ALL_NONCUBE:
            raise InvariantViolation(
                f"Rational point {search_result} contradicts the obstruction "
                f"({summary.value}, residue {point_residue})"
            )

    if summary == ObstructionSummary.NO_FP_ROOTS:
        verdict = Verdict.NO_RATIONAL_POINTS_LOCALITY_UNKNOWN
        reason = "g has no root in F_p; no simple F_p root for local solvability"
    elif summary == ObstructionSummary.ALL_NONCUBE:
        if theorem_iii.satisfied:
            verdict = Verdict.HASSE_COUNTEREXAMPLE
            reason = "every F_p root gives a non-cube and local points exist"
        else:
            verdict = Verdict.NO_RATIONAL_POINTS_LOCALITY_UNKNOWN
            reason = "every F_p root gives a non-cube; local hypotheses fail"
    elif summary == ObstructionSummary.MIXED and search_result is not None:
        verdict = Verdict.WEAK_APPROX_FAILURE_CANDIDATE
        reason = "cube and non-cube residues with an explicit rational point"
    else:
        verdict = Verdict.INCONCLUSIVE
        reason = f"obstruction pattern {summary.value} without a decisive witness"

    logger.info(f"p={spec.p} ({a1},{d1},{a2},{d2}): {verdict.value}")
    return Classification(
        verdict=verdict,
        obstruction=obstruction,
        theorem_ii=theorem_ii,
        theorem_iii=theorem_iii,
        point=search_result,
        point_residue=point_residue,
        reason=reason,
    )


def shift_parameters(params: Params, p: int, shifts: Sequence[int]) -> Params:
    """(a1 + k1 p, d1 + k2 p, a2 + k3 p, d2 + k4 p)"""
    a1, d1, a2, d2 = (v + k * p for v, k in zip(params, shifts))
    return (a1, d1, a2, d2)


def equivalent_mod_p(params: Params, p: int) -> Tuple[int, ...]:
    """Key identifying the family of a parameter tuple"""
    return tuple(v % p for v in params)
