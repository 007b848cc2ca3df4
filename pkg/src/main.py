"""
polya-carlson - Main entry point
Batch command line for the rationality toolkit
"""

import argparse
import logging
import sys
import os
from typing import Any, Dict, List, Optional

# Add src to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import config, get_app_info, is_debug_mode
from commands import COMMANDS, RunConfig
from utils.error_handler import (
    AppError, ValidationError, format_error_for_user, log_error, logger, setup_logging,
)
from utils.report_helpers import get_report_writer
from utils.series_io import SCHEMA_HELP

EXIT_OK = 0
EXIT_ANALYSIS = 1
EXIT_USAGE = 2

CSV_HELP = """CSV columns (written beside the JSON report, same file stem):
  kronecker      n, A_n, is_zero
  criterion      m, is_zero, degree, sup_bound
  capacity       n, d_n, tau_upper, monotone_flag
  iota-check     n, d_n, tau_upper, monotone_flag
  contour-bound  m, bound (m, rho_bound, d_next, size_specific_bound without rho)
  dfinite        n, a_n (univariate) or the criterion columns (bivariate)
  symcheck       v, real, imag
"""


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per analysis and shared knobs"""
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--input", help="JSON spec file, or inline JSON starting with { or [")
    shared.add_argument("--output", help="JSON report path (default <report_dir>/<command>.json)")
    shared.add_argument("--N", type=int, help="truncation order")
    shared.add_argument("--n", type=int, default=1, help="restriction exponent (w = z^n)")
    shared.add_argument("--m-lo", dest="m_lo", type=int, default=1)
    shared.add_argument("--m-hi", dest="m_hi", type=int, default=4)
    shared.add_argument("--n-max", dest="n_max", type=int, default=40)
    shared.add_argument("--seed", type=int)
    shared.add_argument("--density", type=float, help="contour sample points per unit length")
    shared.add_argument("--tol", type=float, help="quadrature tolerance")
    shared.add_argument("--degree", type=int, help="degree bound (reconstruct) or window hint (kronecker)")
    shared.add_argument("--n-lo", dest="n_lo", type=int)
    shared.add_argument("--n-hi", dest="n_hi", type=int)
    shared.add_argument("--margin", type=float, help="capacity certificate margin below 1")

    parser = argparse.ArgumentParser(
        prog="polya-carlson",
        description="Exact and numerical rationality tests for integer power series",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[shared], epilog=CSV_HELP,
                              formatter_class=argparse.RawDescriptionHelpFormatter)
    return parser


def _base_report(run: Optional[RunConfig], command: str) -> Dict[str, Any]:
    return {
        'command': command,
        'app': get_app_info(),
        'run_config': run.to_dict() if run else None,
        'config': config.as_dict(),
    }


def _argument_error_report(argv: List[str], code: int) -> None:
    """Minimal usage-error report when argparse rejects the arguments but --output is readable"""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--output")
    try:
        known, _ = pre.parse_known_args(argv)
    except SystemExit:
        return
    if not known.output:
        return
    command = next((a for a in argv if a in COMMANDS), None)
    report = _base_report(None, command)
    report.update({
        'status': 'usage_error',
        'error': {'error_code': 'UsageError', 'message': 'Ugyldige argumenter',
                  'details': {'argv': list(argv), 'exit_code': code}},
    })
    try:
        get_report_writer(known.output, command or "usage").write_json(report)
    except AppError as e:
        logger.error(f"Kunne ikke skrive rapport: {e}")


def run(argv: Optional[List[str]] = None) -> int:
    """
    Kjør én underkommando og skriv rapport

    Args:
        argv: Argumenter uten programnavn

    Returns:
        Exit-kode: 0 suksess, 1 analysefeil, 2 bruksfeil
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        if e.code == 0:
            return EXIT_OK
        _argument_error_report(argv, EXIT_USAGE)
        return EXIT_USAGE

    if not config.validate_config():
        logger.warning("Konfigurasjonen har verdier utenfor gyldig område")
    writer = get_report_writer(args.output, args.command)
    report = _base_report(None, args.command)
    try:
        run_config = RunConfig.from_args(args)
        report = _base_report(run_config, args.command)
        run_config.validate()
        result = COMMANDS[args.command](run_config)
        report.update({'status': 'ok', 'result': result.report})
        writer.write_json(report)
        writer.write_csv(result.frame)
        return EXIT_OK
    except ValidationError as e:
        print(format_error_for_user(e), file=sys.stderr)
        print(SCHEMA_HELP, file=sys.stderr)
        code = EXIT_USAGE
        report.update({'status': 'usage_error', 'error': e.to_dict()})
    except AppError as e:
        log_error(e, context=args.command)
        print(format_error_for_user(e), file=sys.stderr)
        code = EXIT_ANALYSIS
        report.update({'status': 'analysis_error', 'error': e.to_dict()})

    try:
        writer.write_json(report)
    except AppError as e:
        logger.error(f"Kunne ikke skrive rapport: {e}")
    return code


def main():
    """Main application entry point"""
    setup_logging(logging.DEBUG if is_debug_mode() else logging.INFO)
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
