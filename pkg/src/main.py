"""
Hasse Surface Workbench
Command-line entry point
"""

import argparse
import json
import logging
import sys
from itertools import product
from pathlib import Path
from typing import Iterator, List, Optional, Set, Tuple

from src.analysis.criteria import (
    Classification,
    Verdict,
    check_theorem_ii_hypotheses,
    classify,
    equivalent_mod_p,
)
from src.analysis.cyclotomic import compute_theta_data
from src.analysis.lattice import reduce_norm_form
from src.analysis.local_oracle import LocalReport, LocalStatus, local_points_report
from src.analysis.modular_arithmetic import make_prime_spec
from src.analysis.norm_form import build_surface, format_form, monomial_label
from src.analysis.point_search import format_points, residue_check, search_points
from src.config.config import config
from src.core.exceptions import HasseWorkbenchError, InputError
from src.models.surface_models import (
    QUATERNARY_MONOMIALS,
    Params,
    ProjectivePoint,
    SurfaceInput,
)
from src.reports.certificate import (
    Certificate,
    build_certificate,
    emit_certificate,
    local_report_to_dict,
)
from src.utils.worker_pool import ordered_map

EXIT_COUNTEREXAMPLE = 0
EXIT_INTERNAL_ERROR = 1
EXIT_INPUT_ERROR = 2
EXIT_OTHER_VERDICT = 3

logger = logging.getLogger(__name__)


def setup_logging(level: Optional[str] = None):
    """Setup logging configuration; stdout is reserved for results"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.log_file:
        Path(config.log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(config.log_file))

    logging.basicConfig(
        level=getattr(logging, (level or config.log_level).upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )


def exit_code_for(verdict: str) -> int:
    if verdict == Verdict.HASSE_COUNTEREXAMPLE.value:
        return EXIT_COUNTEREXAMPLE
    return EXIT_OTHER_VERDICT


def _scan_worker(args) -> Tuple[Params, str]:
    """Obstruction-only verdict for one tuple of a scan"""
    p, params = args
    classification = classify(make_prime_spec(p), *params)
    return params, classification.verdict.value


class HasseWorkbench:
    """
    Main application class for the Hasse Surface Workbench
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers
        self.logger = logging.getLogger(__name__)

    def construct(self, p: int, params: Params):
        spec = make_prime_spec(p)
        theta = compute_theta_data(spec)
        return theta, build_surface(theta, *params)

    def search(self, p: int, params: Params, height: int) -> List[ProjectivePoint]:
        _, surface = self.construct(p, params)
        return search_points(surface, height, workers=self.workers)

    def local(self, p: int, params: Params, q_max: int) -> LocalReport:
        _, surface = self.construct(p, params)
        return local_points_report(surface, q_max=q_max, workers=self.workers)

    def classify(
        self,
        p: int,
        params: Params,
        height: Optional[int] = None,
        q_max: Optional[int] = None,
        label: Optional[str] = None,
    ) -> Certificate:
        """
        Run the obstruction, the local oracle and the point search on one
        surface and assemble the certificate

        Args:
            p: prime congruent to 1 mod 3
            params: (a1, d1, a2, d2)
            height: point search bound
            q_max: largest prime for the local oracle

        Returns:
            Certificate whose verdict is criteria.classify's verdict
        """
        height = config.search.default_height if height is None else height
        q_max = config.local.default_q_max if q_max is None else q_max
        spec = make_prime_spec(p)
        theta = compute_theta_data(spec)
        surface = build_surface(theta, *params)

        self.logger.info(f"Classifying p={p} params={params}")
        points = search_points(surface, height, workers=self.workers)

        residues = []
        if check_theorem_ii_hypotheses(spec, *params).satisfied:
            residues = [residue_check(pt, p, params) for pt in points]
        witness = points[0] if points else None
        classification: Classification = classify(spec, *params, search_result=witness)

        local_report = local_points_report(surface, q_max=q_max, workers=self.workers)
        reduction = reduce_norm_form(theta)

        return build_certificate(
            surface_input=SurfaceInput(p, *params, label=label),
            theta=theta,
            surface=surface,
            classification=classification,
            points=points,
            height=height,
            residues=residues,
            local_report=local_report,
            reduction=reduction,
        )

    def iter_scan(
        self,
        p: int,
        value_range: int,
        limit: Optional[int] = None,
        dedup: bool = False,
        height: Optional[int] = None,
        q_max: Optional[int] = None,
    ) -> Iterator[Certificate]:
        """
        Classify every (a1, d1, a2, d2) in [1, R]^4 in lexicographic order and
        yield a certificate for each counterexample as soon as it is built
        """
        spec = make_prime_spec(p)
        compute_theta_data(spec)

        tuples = [
            params
            for params in product(range(1, value_range + 1), repeat=4)
            if check_theorem_ii_hypotheses(spec, *params).satisfied
        ]
        self.logger.info(f"Scanning p={p}: {len(tuples)} tuple(s) in [1, {value_range}]^4")
        verdicts = ordered_map(
            _scan_worker, [(p, params) for params in tuples], workers=self.workers or 1
        )

        emitted = 0
        seen: Set[Tuple[int, ...]] = set()
        for params, verdict in verdicts:
            if verdict != Verdict.HASSE_COUNTEREXAMPLE.value:
                continue
            key = equivalent_mod_p(params, p)
            if dedup and key in seen:
                self.logger.debug(f"Skipping {params}: congruent to an emitted tuple")
                continue
            seen.add(key)
            yield self.classify(p, params, height=height, q_max=q_max)
            emitted += 1
            if limit is not None and emitted >= limit:
                break

        self.logger.info(f"Scan p={p}: {emitted} counterexample(s)")

    def scan(self, p: int, value_range: int, **kwargs) -> List[Certificate]:
        return list(self.iter_scan(p, value_range, **kwargs))


def _params(args: argparse.Namespace) -> Params:
    return (args.a1, args.d1, args.a2, args.d2)


def _write_json(path: str, text: str):
    if path == "-":
        print(text)
        return
    Path(path).write_text(text + "\n")
    logger.info(f"Wrote {path}")


def _print_certificate_summary(certificate: Certificate):
    data = certificate.input
    print(
        f"\n=== p={data['p']} (a1, d1, a2, d2) = "
        f"({data['a1']}, {data['d1']}, {data['a2']}, {data['d2']}) ==="
    )
    obstruction = certificate.obstruction
    if obstruction is not None:
        for v in obstruction["values"]:
            kind = "cube" if v["is_cube"] else "non-cube"
            print(f"  root s={v['s']}: (a1 + d1 s)/s = {v['value']} ({kind})")
        print(f"  obstruction: {obstruction['summary']}")
    for name, checklist in certificate.hypotheses.items():
        print(f"  {name} hypotheses: {'met' if checklist['satisfied'] else 'not met'}")
    if certificate.local is not None:
        pending = certificate.local["inconclusive_primes"]
        print(
            f"  local: q <= {certificate.local['q_max']}, "
            f"inconclusive at {pending if pending else 'none'}"
        )
    points = certificate.points
    print(f"  points up to height {points['height']}: {points['count']}")
    for entry in points["found"][:5]:
        print(f"    ({' : '.join(entry['coords'])})")
    print(f"  verdict: {certificate.verdict['value']}")
    print(f"  {certificate.verdict['reason']}")


def _handle_construct(workbench: HasseWorkbench, args: argparse.Namespace):
    """Handles the 'construct' command"""
    theta, surface = workbench.construct(args.p, _params(args))
    print(f"p = {args.p}, (e1, e2, e3) = ({theta.e1}, {theta.e2}, {theta.e3})")
    for m in QUATERNARY_MONOMIALS:
        print(f"{monomial_label(m)} {surface.coefficient(m)}")
    print(f"\nF = {format_form(surface.coefficients)}")

    if args.reduced:
        reduction = reduce_norm_form(theta)
        print(f"\nReduced norm form ({reduction.substitution}):")
        print(format_form(reduction.reduced_form.coefficients, primes=("T1", "T2")))
    return 0


def _handle_classify(workbench: HasseWorkbench, args: argparse.Namespace):
    """Handles the 'classify' command"""
    certificate = workbench.classify(
        args.p, _params(args), height=args.height, q_max=args.qmax, label=args.label
    )
    if args.json:
        _write_json(args.json, emit_certificate(certificate))
    if args.json != "-":
        _print_certificate_summary(certificate)
    return exit_code_for(certificate.verdict_value)


def _handle_scan(workbench: HasseWorkbench, args: argparse.Namespace):
    """Handles the 'scan' command"""
    certificates = []
    for certificate in workbench.iter_scan(
        args.p,
        args.range,
        limit=args.limit,
        dedup=args.dedup,
        height=args.height,
        q_max=args.qmax,
    ):
        certificates.append(certificate)
        if args.json != "-":
            data = certificate.input
            print(f"{data['a1']} {data['d1']} {data['a2']} {data['d2']}", flush=True)

    if args.json:
        text = "[\n" + ",\n".join(emit_certificate(c) for c in certificates) + "\n]"
        _write_json(args.json, text)
    if args.json != "-":
        print(f"# {len(certificates)} counterexample(s) for p={args.p}")
    return 0


def _handle_local(workbench: HasseWorkbench, args: argparse.Namespace):
    """Handles the 'local' command"""
    q_max = config.local.default_q_max if args.qmax is None else args.qmax
    report = workbench.local(args.p, _params(args), q_max)
    if args.json:
        text = json.dumps(local_report_to_dict(report), indent=2, sort_keys=True)
        _write_json(args.json, text)
        if args.json == "-":
            return 0

    print(f"\n=== Local solvability, p={args.p}, params={_params(args)} ===")
    for entry in report.entries:
        witness = f" witness {entry.witness}" if entry.witness else ""
        print(f"  q={entry.q}: {entry.status.value}{witness}")
    plane = report.p_entry
    if plane.degenerate:
        print(f"  q={args.p}: degenerate reduction")
    else:
        print(
            f"  q={args.p}: planes T3 = s T0 at {plane.slopes}, "
            f"defined over F_{args.p}^{plane.splitting_field_degree}"
        )
    print(f"  bad prime candidates: {list(report.bad_prime_candidates)}")
    for note in report.notes:
        print(f"  {note}")
    certified = sum(
        1 for e in report.entries if e.status != LocalStatus.INCONCLUSIVE
    )
    print(f"  {certified}/{len(report.entries)} prime(s) certified")
    return 0


def _handle_search(workbench: HasseWorkbench, args: argparse.Namespace):
    """Handles the 'search' command"""
    height = config.search.default_height if args.height is None else args.height
    points = workbench.search(args.p, _params(args), height)
    if args.plain:
        if points:
            print(format_points(points))
        return 0
    print(f"\n=== Points up to height {height}, p={args.p}, params={_params(args)} ===")
    for point in points:
        print(f"  {point}")
    print(f"  {len(points)} point(s)")
    return 0


def _handle_reduce(workbench: HasseWorkbench, args: argparse.Namespace):
    """Handles the 'reduce' command"""
    theta = compute_theta_data(make_prime_spec(args.p))
    reduction = reduce_norm_form(theta)
    print(f"\n=== Norm form reduction, p={args.p} ===")
    print(f"Gram matrix: {reduction.gram.rows()}")
    print(f"Transform: {reduction.transform.rows()}")
    print(f"Reduced Gram matrix: {reduction.reduced_gram.rows()}")
    print(f"Substitution: {reduction.substitution}")
    reduced = format_form(reduction.reduced_form.coefficients, primes=("T1", "T2"))
    print(f"Reduced norm form: {reduced}")
    return 0


def _add_surface_arguments(subparser: argparse.ArgumentParser):
    subparser.add_argument("p", type=int, help="Prime congruent to 1 mod 3")
    for name in ("a1", "d1", "a2", "d2"):
        subparser.add_argument(name, type=int, help=f"Surface parameter {name}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=config.project_name)
    parser.add_argument("--quiet", "-q", action="store_true", help="Only log warnings")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log debug detail")
    parser.add_argument(
        "--workers", "-w", type=int, default=None, help="Worker processes"
    )

    command_parsers = parser.add_subparsers(dest="command", required=True)

    construct_parser = command_parsers.add_parser(
        "construct", help="Print the coefficients of the surface"
    )
    _add_surface_arguments(construct_parser)
    construct_parser.add_argument(
        "--reduced", action="store_true", help="Also print the reduced norm form"
    )

    classify_parser = command_parsers.add_parser(
        "classify", help="Classify a surface and emit a certificate"
    )
    _add_surface_arguments(classify_parser)
    classify_parser.add_argument("--height", type=int, default=None, help="Search height")
    classify_parser.add_argument("--qmax", type=int, default=None, help="Largest local prime")
    classify_parser.add_argument("--json", default=None, help="Certificate path, '-' for stdout")
    classify_parser.add_argument(
        "--label", default=None, help="Name recorded in the certificate input"
    )

    scan_parser = command_parsers.add_parser(
        "scan", help="Stream counterexamples over a parameter box"
    )
    scan_parser.add_argument("p", type=int, help="Prime congruent to 1 mod 3")
    scan_parser.add_argument(
        "--range", "-r", type=int, default=config.scan.default_range, help="Parameter bound R"
    )
    scan_parser.add_argument(
        "--limit", "-n", type=int, default=config.scan.default_limit, help="Stop after N"
    )
    scan_parser.add_argument(
        "--dedup", action="store_true", help="Skip tuples congruent mod p to an emitted one"
    )
    scan_parser.add_argument("--height", type=int, default=None, help="Search height")
    scan_parser.add_argument("--qmax", type=int, default=None, help="Largest local prime")
    scan_parser.add_argument("--json", default=None, help="Certificates path, '-' for stdout")

    local_parser = command_parsers.add_parser(
        "local", help="Certify local points prime by prime"
    )
    _add_surface_arguments(local_parser)
    local_parser.add_argument("--qmax", type=int, default=None, help="Largest prime")
    local_parser.add_argument("--json", default=None, help="Report path, '-' for stdout")

    search_parser = command_parsers.add_parser(
        "search", help="Search rational points of bounded height"
    )
    _add_surface_arguments(search_parser)
    search_parser.add_argument("--height", type=int, default=None, help="Search height")
    search_parser.add_argument(
        "--plain", action="store_true", help="One space-separated point per line"
    )

    reduce_parser = command_parsers.add_parser(
        "reduce", help="Reduce the norm form lattice"
    )
    reduce_parser.add_argument("p", type=int, help="Prime congruent to 1 mod 3")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main command-line interface"""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = None
    if args.quiet:
        level = "WARNING"
    elif args.verbose:
        level = "DEBUG"
    setup_logging(level)

    workbench = HasseWorkbench(workers=args.workers)

    handlers = {
        "construct": _handle_construct,
        "classify": _handle_classify,
        "scan": _handle_scan,
        "local": _handle_local,
        "search": _handle_search,
        "reduce": _handle_reduce,
    }

    try:
        handler = handlers.get(args.command)
        if handler:
            return handler(workbench, args)
        print(f"Error: Unknown command '{args.command}'", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except InputError as e:
        logger.error(f"{args.command}: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except HasseWorkbenchError as e:
        logger.error(f"{args.command}: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR
    except Exception as e:
        logger.exception(f"Unexpected error in {args.command}: {e}")
        raise


if __name__ == "__main__":
    sys.exit(main())
