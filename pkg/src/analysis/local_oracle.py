"""
Desk-scale verification of local solvability

A smooth point of the reduction mod q lifts to a q-adic point by Hensel's
lemma, so an exhaustive scan of P^3(F_q) certifies X(Q_q) != {}. At q = p the
reduction is the union of three planes T3/T0 = s_i.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, primefactors, primerange, symbols

from src.analysis.modular_arithmetic import (
    inverse_mod,
    make_prime_spec,
    roots_of_defining_cubic,
)
from src.analysis.norm_form import evaluate_form, partial_derivative
from src.config.config import config
from src.core.exceptions import (
    DegenerateLeadingCoefficient,
    InputError,
    ReductionMismatch,
)
from src.models.surface_models import QUATERNARY_MONOMIALS, Exponents, QuaternaryCubic
from src.utils.worker_pool import ordered_map

logger = logging.getLogger(__name__)

Witness = Tuple[int, int, int, int]

_T = symbols("T")


class LocalStatus(str, Enum):
    CERTIFIED_SMOOTH_POINT = "CERTIFIED_SMOOTH_POINT"
    GOOD_REDUCTION_AUTOMATIC = "GOOD_REDUCTION_AUTOMATIC"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class PlaneDecomposition:
    """The reduction at p as planes T3 = s T0 over the algebraic closure"""

    p: int
    slopes: Tuple[Tuple[int, int], ...]  # (s, multiplicity), s in F_p
    remainder_degree: int
    # degree of the extension of F_p over which all three planes are defined
    splitting_field_degree: int
    degenerate: bool = False


@dataclass(frozen=True)
class LocalEntry:
    """Local solvability evidence at one prime q"""

    q: int
    status: LocalStatus
    witness: Optional[Witness] = None


@dataclass(frozen=True)
class LocalReport:
    """Per-prime local evidence for one surface"""

    p: int
    params: Tuple[int, int, int, int]
    q_max: int
    scan_cap: int
    entries: Tuple[LocalEntry, ...]
    p_entry: PlaneDecomposition
    bad_prime_candidates: Tuple[int, ...]
    real_place_solvable: bool = True
    notes: List[str] = field(default_factory=list)

    @property
    def inconclusive_primes(self) -> List[int]:
        return [e.q for e in self.entries if e.status == LocalStatus.INCONCLUSIVE]

    def entry(self, q: int) -> Optional[LocalEntry]:
        for e in self.entries:
            if e.q == q:
                return e
        return None


def _expected_reduction(p: int, params: Sequence[int]) -> Dict[Exponents, int]:
    """T3 (a1 T0 + d1 T3)(a2 T0 + d2 T3) - T0^3 mod p"""
    a1, d1, a2, d2 = params
    expected = {m: 0 for m in QUATERNARY_MONOMIALS}
    expected[(3, 0, 0, 0)] = -1 % p
    expected[(2, 0, 0, 1)] = (a1 * a2) % p
    expected[(1, 0, 0, 2)] = (a1 * d2 + a2 * d1) % p
    expected[(0, 0, 0, 3)] = (d1 * d2) % p
    return expected


def reduction_structure_at_p(form: QuaternaryCubic) -> PlaneDecomposition:
    """
    Check F mod p against T3(a1T0 + d1T3)(a2T0 + d2T3) - T0^3 and report the
    planes through the roots of g

    Args:
        form: a surface built by build_surface

    Returns:
        PlaneDecomposition with slopes and the field of definition
    """
    p = form.p
    expected = _expected_reduction(p, form.params)
    mismatches = [
        m for m in QUATERNARY_MONOMIALS if form.coefficient(m) % p != expected[m]
    ]
    if mismatches:
        raise ReductionMismatch(
            f"Surface mod {p} differs from the three-plane reduction at {mismatches}"
        )

    spec = make_prime_spec(p)
    try:
        roots = roots_of_defining_cubic(spec, *form.params)
    except DegenerateLeadingCoefficient:
        logger.warning(f"p={p} divides d1*d2; reduction is not three planes")
        return PlaneDecomposition(
            p=p, slopes=(), remainder_degree=0, splitting_field_degree=0, degenerate=True
        )

    remainder = roots.irreducible_remainder_degree
    return PlaneDecomposition(
        p=p,
        slopes=roots.roots,
        remainder_degree=remainder,
        splitting_field_degree=max(1, remainder),
    )


def _evaluate_mod(
    coefficients: Dict[Exponents, int], columns: Sequence, q: int, shape
) -> np.ndarray:
    total = np.zeros(shape, dtype=np.int64)
    for exps, c in coefficients.items():
        term = np.full(shape, c % q, dtype=np.int64)
        for col, e in zip(columns, exps):
            if e:
                term = (term * (col**e % q)) % q
        total = (total + term) % q
    return total


def _charts(q: int):
    """Slices of P^3(F_q) in canonical order: leading nonzero coordinate 1"""
    grid2 = (np.arange(q, dtype=np.int64)[:, None], np.arange(q, dtype=np.int64)[None, :])
    line = np.arange(q, dtype=np.int64)
    for x1 in range(q):
        yield (1, x1, grid2[0], grid2[1]), (q, q)
    yield (0, 1, grid2[0], grid2[1]), (q, q)
    yield (0, 0, 1, line), (q,)
    yield (0, 0, 0, 1), (1,)


def smooth_point_mod_q(form: QuaternaryCubic, q: int) -> Optional[Witness]:
    """
    First smooth F_q-point of the reduction of F, scanning all of P^3(F_q)

    Args:
        form: the surface
        q: a prime

    Returns:
        A point with F = 0 and some partial derivative nonzero mod q, or None
    """
    coeffs = form.reduced_mod(q)
    gradient = [
        {m: c % q for m, c in partial_derivative(coeffs, i).items() if c % q}
        for i in range(4)
    ]

    for columns, shape in _charts(q):
        value = _evaluate_mod(coeffs, columns, q, shape)
        on_surface = value == 0
        if not on_surface.any():
            continue
        smooth = np.zeros(shape, dtype=bool)
        for partial in gradient:
            smooth |= _evaluate_mod(partial, columns, q, shape) != 0
        hits = np.argwhere(on_surface & smooth)
        if hits.size == 0:
            continue
        index = tuple(hits[0])
        point = tuple(
            int(np.broadcast_to(col, shape)[index]) if isinstance(col, np.ndarray) else col
            for col in columns
        )
        logger.debug(f"Smooth point mod {q}: {point}")
        return point  # type: ignore[return-value]
    return None


def hensel_lift(form: QuaternaryCubic, witness: Sequence[int], q: int) -> Witness:
    """
    Lift a smooth point mod q to an integer point with F = 0 mod q^2

    Solves F(w) + q t dF/dT_j(w) = 0 mod q^2 along the first coordinate j
    whose partial derivative is a unit mod q.
    """
    w = [int(x) for x in witness]
    value = evaluate_form(form, w)
    if value % q:
        raise InputError(f"{tuple(w)} is not on the surface mod {q}")
    for j in range(4):
        partial = partial_derivative(form.coefficients, j)
        slope = sum(
            c * prod(t**e for t, e in zip(w, exps)) for exps, c in partial.items()
        )
        if slope % q:
            t = (-(value // q) * inverse_mod(slope, q)) % q
            w[j] += q * t
            return tuple(w)  # type: ignore[return-value]
    raise InputError(f"{tuple(w)} is a singular point mod {q}")


def bad_prime_candidates(form: QuaternaryCubic) -> Tuple[int, ...]:
    """
    Primes dividing p * d1 * d2 * a1 * a2 * e3 * disc(g)

    Every prime of bad reduction lies in this set; zero factors are skipped.
    """
    a1, d1, a2, d2 = form.params
    e3 = -form.coefficient((0, 3, 0, 0))
    g = Poly(d1 * d2 * _T**3 + (a1 * d2 + a2 * d1) * _T**2 + a1 * a2 * _T - 1, _T)
    disc = int(g.discriminant()) if g.degree() >= 2 else 0

    primes = set()
    for factor in (form.p, d1, d2, a1, a2, e3, disc):
        if factor:
            primes.update(primefactors(abs(factor)))
    return tuple(sorted(primes))


def _scan_worker(args) -> LocalEntry:
    form, q = args
    witness = smooth_point_mod_q(form, q)
    if witness is None:
        return LocalEntry(q=q, status=LocalStatus.INCONCLUSIVE)
    return LocalEntry(q=q, status=LocalStatus.CERTIFIED_SMOOTH_POINT, witness=witness)


def local_points_report(
    form: QuaternaryCubic,
    q_max: Optional[int] = None,
    scan_cap: Optional[int] = None,
    workers: Optional[int] = None,
) -> LocalReport:
    """
    Local solvability evidence for every prime q <= q_max

    Args:
        form: the surface
        q_max: largest prime to report (>= 2)
        scan_cap: largest prime for which P^3(F_q) is scanned exhaustively
        workers: parallel workers for the per-prime scans

    Returns:
        LocalReport ordered by prime
    """
    q_max = config.local.default_q_max if q_max is None else q_max
    scan_cap = config.local.scan_cap if scan_cap is None else scan_cap
    workers = config.local.workers if workers is None else workers
    if q_max < 2:
        raise InputError(f"q_max must be at least 2, got {q_max}")

    primes = [int(q) for q in primerange(2, q_max + 1)]
    scanned = [q for q in primes if q <= scan_cap]
    bad = bad_prime_candidates(form)

    logger.info(
        f"Local scan p={form.p} params={form.params}: {len(scanned)} prime(s) "
        f"up to {min(q_max, scan_cap)}"
    )
    entries = ordered_map(_scan_worker, [(form, q) for q in scanned], workers=workers)
    for q in primes:
        if q > scan_cap:
            status = (
                LocalStatus.INCONCLUSIVE if q in bad else LocalStatus.GOOD_REDUCTION_AUTOMATIC
            )
            entries.append(LocalEntry(q=q, status=status))

    notes = [
        "real place: X(R) is nonempty",
        f"primes > {q_max} outside {list(bad)} have good reduction and carry points",
    ]
    report = LocalReport(
        p=form.p,
        params=form.params,
        q_max=q_max,
        scan_cap=scan_cap,
        entries=tuple(entries),
        p_entry=reduction_structure_at_p(form),
        bad_prime_candidates=bad,
        notes=notes,
    )
    if report.inconclusive_primes:
        logger.warning(f"No certificate at q in {report.inconclusive_primes}")
    return report
