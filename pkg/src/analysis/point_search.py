"""
Brute-force search for primitive rational points of bounded height

For every surface built here, the T3-carrying part of F only involves T0 and
T3, so F(t) = h_{t0}(t3) - N(t0, t1, t2). For fixed t0 the norm values of the
whole (t1, t2) grid are computed in one vectorized batch and matched against
the table of h_{t0}(t3) over |t3| <= H. This solves for t3 exactly and costs
O(H^3) instead of enumerating all four coordinates.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.analysis.modular_arithmetic import (
    inverse_mod,
    is_cube,
    make_prime_spec,
    roots_of_defining_cubic,
)
from src.analysis.norm_form import evaluate_form
from src.config.config import config
from src.core.exceptions import (
    InputError,
    InvariantViolation,
    NonUnitCoordinate,
    UnsupportedForm,
)
from src.models.surface_models import Exponents, ProjectivePoint, QuaternaryCubic
from src.utils.worker_pool import ordered_map

logger = logging.getLogger(__name__)

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class ResidueCheck:
    """Residue data of a rational point at p"""

    s: int
    value: int
    is_cube: bool


def _split_form(
    form: QuaternaryCubic,
) -> Tuple[Dict[Tuple[int, int], int], Dict[Exponents, int]]:
    """Separate the T3-carrying part (as {(i, j): c} for T0^i T3^j) from N"""
    t3_part: Dict[Tuple[int, int], int] = {}
    norm_part: Dict[Exponents, int] = {}
    for (i, j, k, l), c in form.coefficients.items():
        if c == 0:
            continue
        if l == 0:
            norm_part[(i, j, k)] = -c
        elif j == 0 and k == 0:
            t3_part[(i, l)] = c
        else:
            raise UnsupportedForm(
                f"Monomial T0^{i} T1^{j} T2^{k} T3^{l} mixes T3 with T1/T2"
            )
    return t3_part, norm_part


def _norm_grid(
    norm_part: Dict[Exponents, int], t0: int, axis: np.ndarray, exact: bool
) -> np.ndarray:
    """N(t0, t1, t2) for every (t1, t2) in axis x axis"""
    t1 = axis[:, None]
    t2 = axis[None, :]
    if exact:
        t1 = t1.astype(object)
        t2 = t2.astype(object)
    total = np.zeros((axis.size, axis.size), dtype=object if exact else np.int64)
    for (i, j, k), c in norm_part.items():
        total = total + (c * t0**i) * (t1**j) * (t2**k)
    return total


def _search_slice(
    form: QuaternaryCubic, height: int, t0: int
) -> List[Tuple[int, int, int, int]]:
    """All points with this t0 (canonical sign and primitivity applied later)"""
    t3_part, norm_part = _split_form(form)

    # h(t3) for |t3| <= H, inverted into value -> [t3]
    table: Dict[int, List[int]] = {}
    for t3 in range(-height, height + 1):
        value = sum(c * t0**i * t3**j for (i, j), c in t3_part.items())
        table.setdefault(value, []).append(t3)

    bound = (
        sum(abs(c) for c in norm_part.values()) + sum(abs(c) for c in t3_part.values())
    ) * height**3
    exact = bound >= _INT64_SAFE
    axis = np.arange(-height, height + 1, dtype=np.int64)
    grid = _norm_grid(norm_part, t0, axis, exact)

    keys = np.array(list(table), dtype=object if exact else np.int64)
    hits = np.argwhere(np.isin(grid, keys))

    found = []
    for a, b in hits:
        t1, t2 = int(axis[a]), int(axis[b])
        for t3 in table[int(grid[a, b])]:
            found.append((t0, t1, t2, t3))
    return found


def _search_worker(args) -> List[Tuple[int, int, int, int]]:
    form, height, t0 = args
    return _search_slice(form, height, t0)


def _is_canonical(coords: Sequence[int]) -> bool:
    if not any(coords):
        return False
    first = next(c for c in coords if c)
    g = 0
    for c in coords:
        g = gcd(g, c)
    return first > 0 and g == 1


def search_points(
    form: QuaternaryCubic, height: int, workers: Optional[int] = None
) -> List[ProjectivePoint]:
    """
    All primitive canonical points with max |t_i| <= height on F = 0

    Args:
        form: the surface
        height: naive height bound (>= 1)
        workers: parallel workers for the t0 slices

    Returns:
        Points sorted by height, then lexicographically
    """
    if height < 1:
        raise InputError(f"Height bound must be at least 1, got {height}")
    workers = config.search.workers if workers is None else workers
    _split_form(form)

    logger.info(
        f"Searching p={form.p} params={form.params} up to height {height} "
        f"({workers} worker(s))"
    )
    # canonical points have t0 >= 0
    tasks = [(form, height, t0) for t0 in range(0, height + 1)]
    slices = ordered_map(_search_worker, tasks, workers=workers)

    points = []
    for candidates in slices:
        for coords in candidates:
            if not _is_canonical(coords):
                continue
            if evaluate_form(form, coords) != 0:
                raise InvariantViolation(f"Search returned non-zero at {coords}")
            points.append(ProjectivePoint(coords))

    points.sort(key=ProjectivePoint.sort_key)
    logger.info(f"Found {len(points)} point(s) with height <= {height}")
    return points


def residue_check(
    point: ProjectivePoint, p: int, params: Sequence[int]
) -> ResidueCheck:
    """
    The slope s = t3/t0 mod p of a rational point and the cubic character of
    (a1 + d1 s)/s

    Args:
        point: primitive point on the surface
        p: the prime of the surface
        params: (a1, d1, a2, d2)

    Returns:
        ResidueCheck(s, value, is_cube)
    """
    t0, _, _, t3 = point.coords
    if t0 % p == 0 or t3 % p == 0:
        raise NonUnitCoordinate(
            f"Point {point} has t0 or t3 divisible by p={p}; "
            "no p-adic point reduces to the line T0 = T3 = 0"
        )
    spec = make_prime_spec(p)
    a1, d1, a2, d2 = params
    s = (t3 * inverse_mod(t0, p)) % p

    roots = roots_of_defining_cubic(spec, a1, d1, a2, d2)
    if roots.multiplicity(s) == 0:
        raise InvariantViolation(f"Slope {s} of {point} is not a root of g mod {p}")

    value = ((a1 + d1 * s) * inverse_mod(s, p)) % p
    return ResidueCheck(s=s, value=value, is_cube=is_cube(value, spec))


def format_points(points: Iterable[ProjectivePoint]) -> str:
    """Plain-text listing, one space-separated point per line"""
    return "\n".join(" ".join(str(c) for c in pt.coords) for pt in points)
