"""
Machine-readable certificates for classified surfaces

Every integer that can grow with the input is written as a decimal string.
The body carries no timestamps, so identical inputs give byte-identical JSON.
"""

import json
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence

from src.analysis.criteria import Classification, HypothesisChecklist, RootValue
from src.analysis.lattice import LatticeReduction
from src.analysis.local_oracle import LocalReport
from src.analysis.norm_form import monomial_label, surface_to_dict
from src.analysis.point_search import ResidueCheck
from src.config.config import config
from src.core.exceptions import InputError
from src.models.surface_models import (
    TERNARY_MONOMIALS,
    ProjectivePoint,
    QuaternaryCubic,
    SurfaceInput,
    ThetaData,
)

logger = logging.getLogger(__name__)

CERTIFICATE_KEYS = (
    "input",
    "theta",
    "surface",
    "obstruction",
    "hypotheses",
    "local",
    "points",
    "lattice",
    "verdict",
    "version",
)


@dataclass
class Certificate:
    """JSON-ready evidence for one (p, a1, d1, a2, d2)"""

    input: Dict[str, Any]
    theta: Dict[str, Any]
    surface: Dict[str, Any]
    obstruction: Optional[Dict[str, Any]]
    hypotheses: Dict[str, Any]
    local: Optional[Dict[str, Any]]
    points: Dict[str, Any]
    lattice: Optional[Dict[str, Any]]
    verdict: Dict[str, str]
    version: str

    @property
    def verdict_value(self) -> str:
        return self.verdict["value"]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Certificate":
        missing = [key for key in CERTIFICATE_KEYS if key not in data]
        if missing:
            raise InputError(f"Certificate is missing keys: {missing}")
        return cls(**{key: data[key] for key in CERTIFICATE_KEYS})


def _int_list(values: Sequence[int]) -> List[str]:
    return [str(v) for v in values]


def input_to_dict(surface_input: SurfaceInput) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "p": surface_input.p,
        "a1": str(surface_input.a1),
        "d1": str(surface_input.d1),
        "a2": str(surface_input.a2),
        "d2": str(surface_input.d2),
    }
    if surface_input.label:
        data["label"] = surface_input.label
    return data


def theta_to_dict(theta: ThetaData) -> Dict[str, Any]:
    return {
        "p": theta.p,
        "power_sums": _int_list(theta.power_sums),
        "e1": str(theta.e1),
        "e2": str(theta.e2),
        "e3": str(theta.e3),
        "min_poly": _int_list(theta.min_poly),
    }


def _root_values(values: Sequence[RootValue]) -> List[Dict[str, Any]]:
    return [{"s": v.s, "value": v.value, "is_cube": v.is_cube} for v in values]


def _checklist(checklist: HypothesisChecklist) -> Dict[str, Any]:
    return {
        "satisfied": checklist.satisfied,
        "items": dict(checklist.items),
        "notes": dict(checklist.notes),
    }


def obstruction_to_dict(classification: Classification) -> Optional[Dict[str, Any]]:
    report = classification.obstruction
    if report is None:
        return None
    return {
        "roots": [
            {"s": s, "multiplicity": m} for s, m in report.roots_in_fp.roots
        ],
        "irreducible_remainder_degree": report.roots_in_fp.irreducible_remainder_degree,
        "values": _root_values(report.values),
        "symmetric_values": _root_values(report.symmetric_values),
        "summary": report.summary.value,
    }


def local_report_to_dict(report: LocalReport) -> Dict[str, Any]:
    """Per-prime statuses with witnesses, the p-adic plane data and notes"""
    plane = report.p_entry
    return {
        "q_max": report.q_max,
        "scan_cap": report.scan_cap,
        "entries": [
            {
                "q": e.q,
                "status": e.status.value,
                "witness": list(e.witness) if e.witness is not None else None,
            }
            for e in report.entries
        ],
        "p_entry": {
            "p": plane.p,
            "slopes": [{"s": s, "multiplicity": m} for s, m in plane.slopes],
            "remainder_degree": plane.remainder_degree,
            "splitting_field_degree": plane.splitting_field_degree,
            "degenerate": plane.degenerate,
        },
        "bad_prime_candidates": list(report.bad_prime_candidates),
        "real_place_solvable": report.real_place_solvable,
        "inconclusive_primes": report.inconclusive_primes,
        "notes": list(report.notes),
    }


def points_to_dict(
    points: Sequence[ProjectivePoint],
    height: int,
    residues: Sequence[Optional[ResidueCheck]] = (),
) -> Dict[str, Any]:
    found = []
    for i, point in enumerate(points):
        entry: Dict[str, Any] = {"coords": _int_list(point.coords)}
        residue = residues[i] if i < len(residues) else None
        if residue is not None:
            entry["residue"] = {
                "s": residue.s,
                "value": residue.value,
                "is_cube": residue.is_cube,
            }
        found.append(entry)
    return {"height": height, "count": len(found), "found": found}


def lattice_to_dict(reduction: LatticeReduction) -> Dict[str, Any]:
    return {
        "gram": [_int_list(row) for row in reduction.gram.rows()],
        "transform": [_int_list(row) for row in reduction.transform.rows()],
        "reduced_gram": [_int_list(row) for row in reduction.reduced_gram.rows()],
        "substitution": reduction.substitution,
        "reduced_norm_form": {
            monomial_label(m): str(reduction.reduced_form.coefficient(m))
            for m in TERNARY_MONOMIALS
        },
    }


def build_certificate(
    surface_input: SurfaceInput,
    theta: ThetaData,
    surface: QuaternaryCubic,
    classification: Classification,
    points: Sequence[ProjectivePoint],
    height: int,
    residues: Sequence[Optional[ResidueCheck]] = (),
    local_report: Optional[LocalReport] = None,
    reduction: Optional[LatticeReduction] = None,
) -> Certificate:
    """Assemble every piece of evidence for one surface"""
    certificate = Certificate(
        input=input_to_dict(surface_input),
        theta=theta_to_dict(theta),
        surface=surface_to_dict(surface),
        obstruction=obstruction_to_dict(classification),
        hypotheses={
            "obstruction": _checklist(classification.theorem_ii),
            "local_solvability": _checklist(classification.theorem_iii),
        },
        local=local_report_to_dict(local_report) if local_report is not None else None,
        points=points_to_dict(points, height, residues),
        lattice=lattice_to_dict(reduction) if reduction is not None else None,
        verdict={
            "value": classification.verdict.value,
            "reason": classification.reason,
        },
        version=config.version,
    )
    logger.debug(
        f"Certificate p={surface_input.p} {surface_input.params}: "
        f"{certificate.verdict_value}"
    )
    return certificate


def emit_certificate(certificate: Certificate) -> str:
    return json.dumps(certificate.to_dict(), indent=2, sort_keys=True)


def parse_certificate(text: str) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"Certificate is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise InputError("Certificate must be a JSON object")
    return Certificate.from_dict(data)
