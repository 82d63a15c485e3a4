"""Command-line entry point: ``weylext <scenario> [--config PATH] [--out DIR] ...``.

Exit codes: 0 when every declared tolerance is met, 1 on a tolerance
failure, 2 on usage or config errors.  ``WEYLEXT_OUT`` overrides ``--out``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from ._version import __version__
from .errors import ConfigError
from .io import dumps, export_matrix, write_json, write_text
from .scenarios import DEFAULTS, SCENARIOS, run

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_HELP = {
    "ho-spectrum": "harmonic oscillator eigenvalues against 2j+1",
    "landau": "Landau operator spectrum by two routes",
    "bopp": "Bopp operator spectrum and closed-form intertwiners",
    "covariance": "symplectic covariance for random free matrices",
    "intertwine-check": "Gram, transfer and intertwining residuals",
    "shubin": "sampled Shubin-class diagnostics",
    "witness": "non-decaying kernel element and kernel coherence",
}


def _seed(text: str) -> int:
    val = int(text)
    if not 0 <= val < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return val


def _positive(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylext",
                                     description="Weyl calculus extension scenarios.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SCENARIOS:
        p = sub.add_parser(name, help=_HELP[name], description=_HELP[name])
        p.add_argument("--config", type=Path, default=None,
                       help="JSON config; missing keys take defaults")
        p.add_argument("--out", type=Path, default=Path("out"),
                       help="output directory (WEYLEXT_OUT overrides)")
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--jobs", type=_positive, default=1,
                       help="threads for independent scenario steps")
        p.add_argument("--dump-matrices", action="store_true",
                       help="also write operator matrices as column-major complex128")
        p.add_argument("--print-defaults", action="store_true",
                       help="print the default config and exit")
    return parser


def _load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.print_defaults:
        sys.stdout.write(dumps(DEFAULTS[args.command]))
        return EXIT_OK
    out = Path(os.environ.get("WEYLEXT_OUT") or args.out)
    try:
        result = run(args.command, _load_config(args.config), seed=args.seed, jobs=args.jobs)
    except ConfigError as exc:
        print(f"weylext {args.command}: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    stem = args.command.replace("-", "_")
    write_json(out / f"{stem}.json", result.report)
    for fname, text in sorted(result.tables.items()):
        write_text(out / fname, text)
    if args.dump_matrices:
        for key, M in sorted(result.matrices.items()):
            export_matrix(out / "matrices" / f"{key}.bin", M)
    failed = [c["name"] for c in result.report["checks"] if not c["passed"]]
    status = "PASS" if result.passed else "FAIL"
    print(f"{args.command}: {status} ({len(result.report['checks']) - len(failed)}/"
          f"{len(result.report['checks'])} checks) -> {out}")
    for name in failed:
        print(f"  failed: {name}", file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
