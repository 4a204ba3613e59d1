import argparse
import sys

from wienerflow.runner import EXIT_USAGE, run_sync
from wienerflow.verification import SUITES


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Run config (JSON); defaults apply to anything missing")
    parser.add_argument("--seed", type=_seed, help="Overrides batch.seed")
    parser.add_argument("--out", help="Directory for report.json and tables")
    parser.add_argument(
        "--format",
        choices=["json", "csv"],
        default="json",
        help="csv also writes plot-ready tables (default: json)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wienerflow",
        description="Malliavin calculus on Gaussian space: exact chaos algebra, flows and their densities",
    )
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    verify_parser = subparsers.add_parser("verify", help="Run a verification suite")
    verify_parser.add_argument("suite", nargs="?", help=f"One of: {', '.join(SUITES)}")
    _add_common(verify_parser)

    hodge_parser = subparsers.add_parser("hodge", help="Decompose a chaos field file")
    hodge_parser.add_argument("field_file", help="Field document (JSON)")
    _add_common(hodge_parser)

    flow_parser = subparsers.add_parser("flow", help="Simulate the flow of the configured field")
    _add_common(flow_parser)

    pde_parser = subparsers.add_parser("pde", help="Transport equation residuals")
    _add_common(pde_parser)

    demo_parser = subparsers.add_parser("demo", help="Hermite series counterexample")
    demo_parser.add_argument("name", nargs="?", default="counterexample", choices=["counterexample"])
    _add_common(demo_parser)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help
        return int(e.code or 0)

    if args.command is None:
        # Default: show help
        parser.print_help()
        return EXIT_USAGE

    target = getattr(args, "suite", None) or getattr(args, "field_file", None)
    return run_sync(
        args.command,
        target=target,
        config_path=args.config,
        seed=args.seed,
        out=args.out,
        fmt=args.format,
    )


if __name__ == "__main__":
    sys.exit(main())
