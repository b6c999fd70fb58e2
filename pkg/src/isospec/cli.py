"""Command line entry point: ``isospec <subcommand> ...``.

Exit status is 0 when every verdict passes or is skipped for a violated
hypothesis, 1 when a verdict fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .domains import parse_domain
from .errors import DegenerateDomainError, GenerationError
from .experiments import hks_sweep, lambda1_report, rearrange_check, report_write, rfk_sweep
from .geometry import Manifold
from .kernels import parse_kernel

OUTPUT_DIR_ENV = "ISOSPEC_OUTPUT_DIR"

log = logging.getLogger("isospec")


def _separations(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad separation list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isospec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, manifold=True):
        if manifold:
            p.add_argument("--manifold", choices=["sphere", "hyperbolic", "euclidean"], required=True)
            p.add_argument("--dim", type=int, default=2)
        p.add_argument("--kernel", required=True, help="riesz:alpha=1.0 | exp:beta=1.0 | const:c=1.0")
        p.add_argument("--out", type=Path, help=f"report path (default: ${OUTPUT_DIR_ENV}/<command>.<format>)")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("lambda1", help="leading eigenpairs of one domain")
    common(p)
    p.add_argument("--domain", required=True,
                   help="ball:radius=R | balls:radius=R,separation=L | perturbed:radius=R,amplitude=E,mode=K")
    p.add_argument("--nodes", type=int, default=2048)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("rfk-sweep", help="ball versus random equal-measure domains")
    common(p)
    p.add_argument("--measure", type=float, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slack", type=float, default=0.02)
    p.add_argument("--nodes", type=int, default=1500, help="nodes per random domain")

    p = sub.add_parser("hks-sweep", help="two identical balls drifting apart (hyperbolic plane)")
    common(p, manifold=False)
    p.add_argument("--manifold", choices=["hyperbolic", "euclidean"], default="hyperbolic")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--half-measure", type=float, required=True)
    p.add_argument("--separations", type=_separations, default=[2.0, 4.0, 6.0, 8.0])
    p.add_argument("--nodes-per-ball", type=int, default=600)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coupling-tol", type=float, default=0.01)

    p = sub.add_parser("rearrange-check", help="double integral under rearrangement")
    common(p)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slack", type=float, default=0.02)
    p.add_argument("--nodes", type=int, default=1200)
    return parser


def run(args) -> int:
    m = Manifold(args.manifold, args.dim)
    k = parse_kernel(args.kernel, dim=m.dim)
    if args.command == "lambda1":
        report = lambda1_report(m, k, parse_domain(m, args.domain), nodes=args.nodes, seed=args.seed)
    elif args.command == "rfk-sweep":
        report = rfk_sweep(m, k, args.measure, args.trials, args.seed, slack=args.slack,
                           region_nodes=args.nodes)
    elif args.command == "hks-sweep":
        report = hks_sweep(k, args.half_measure, args.separations, args.nodes_per_ball,
                           seed=args.seed, manifold=m, coupling_tol=args.coupling_tol)
    else:
        report = rearrange_check(m, k, args.trials, args.seed, slack=args.slack,
                                 region_nodes=args.nodes)

    out = args.out
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = Path(os.environ[OUTPUT_DIR_ENV]) / f"{args.command}.{args.format}"
    if out is not None:
        report_write(report, out, args.format)
        log.info("report written to %s", out)
    for v in report.verdicts:
        print(f"{v.status.upper():4s}  {v.claim}  margin={v.margin:.3e}  {v.note}".rstrip())
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return run(args)
    except (ValueError, GenerationError, DegenerateDomainError) as exc:
        print(f"isospec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
