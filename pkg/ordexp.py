"""
Command-line entry point for ordered exponential location estimation under Linex loss.

    python ordexp.py constants --n 2,5,10 --p=-1,1
    python ordexp.py table --tables 1,4 --reps 50000
    python ordexp.py risk --scenario ordered-scale --k 2 --n 5,5 --sigma 1,2 --p 1 --estimator baee,mle
    python ordexp.py verify --level fast
"""

import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path

import pandas as pd

# Add project root to path
sys.path.append(str(Path(__file__).parent))
from config import LOG_CONFIG, VERIFY_CONFIG
from cli.commands import cmd_constants, cmd_risk, cmd_table, cmd_verify
from cli.results_writer import ResultsWriter
from cli.run_config import (
    load_run_config,
    parse_int_list,
    parse_p_values,
    parse_size_pairs,
    resolve_config,
)
from model.errors import OrdExpError, ResultsIOError, ValidationError

logger = logging.getLogger('ordexp')

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2
EXIT_IO = 3


def configure_logging():
    """File log under LOG_CONFIG['log_dir'] plus console output."""
    log_dir = Path(__file__).parent / LOG_CONFIG['log_dir']
    log_dir.mkdir(exist_ok=True)

    logging.basicConfig(
        level=getattr(logging, LOG_CONFIG['level']),
        format=LOG_CONFIG['format'],
        handlers=[
            logging.FileHandler(log_dir / 'ordexp.log'),
            logging.StreamHandler()
        ]
    )


class _Parser(argparse.ArgumentParser):
    """Argument errors are validation errors, so they exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(description='Order-restricted exponential location estimators under Linex loss')
    sub = parser.add_subparsers(dest='command', required=True)

    constants = sub.add_parser('constants', help='Closed-form constants next to oracle argmins')
    constants.add_argument('--n', default='2,3,5,10,20,30', help='Comma-separated sample sizes')
    constants.add_argument('--p', default=','.join(str(p) for p in VERIFY_CONFIG['p_grid']),
                           help='Comma-separated Linex p values')
    constants.add_argument('--sigma', type=float, default=1.5, help='Known scale used for the alpha0 columns')
    constants.add_argument('--out-dir', dest='out_dir', help='Also write constants.csv here')

    table = sub.add_parser('table', help='Reproduce built-in risk-improvement tables')
    table.add_argument('--config', help='Flat key=value run file')
    table.add_argument('--tables', help='Comma-separated table ids (1-13, 15)')
    table.add_argument('--reps', help='Monte Carlo replications per cell')
    table.add_argument('--seed', help='Master seed')
    table.add_argument('--p', help='Override the table p columns')
    table.add_argument('--sizes', help="Override the sample-size pairs, e.g. '5,5;5,7'")
    table.add_argument('--out-dir', dest='out_dir', help='Output directory')
    table.add_argument('--threads', type=int, help='Worker threads (results do not depend on it)')

    risk = sub.add_parser('risk', help='Risk and PRI at a single scenario')
    risk.add_argument('--config', help='Flat key=value run file')
    for flag in ('scenario', 'scheme', 'k', 'n', 'mu', 'sigma', 'm', 'removals', 'records', 'p',
                 'reps', 'seed', 'target', 'estimator', 'variant', 'baseline'):
        risk.add_argument(f"--{flag}")
    risk.add_argument('--out-dir', dest='out_dir', help='Output directory')
    risk.add_argument('--threads', type=int, help='Worker threads (results do not depend on it)')

    verify = sub.add_parser('verify', help='Run the verification suites')
    verify.add_argument('--level', choices=['fast', 'full'], default='fast')
    verify.add_argument('--seed', type=int, help='Master seed')
    verify.add_argument('--out-dir', dest='out_dir', help='Where verify_report.json is written')
    verify.add_argument('--threads', type=int, help='Worker threads')

    return parser


def _flag_values(args: argparse.Namespace) -> dict:
    return {key: value for key, value in vars(args).items()
            if key not in ('command', 'config', 'threads', 'sizes') and value is not None}


def run_constants(args) -> int:
    df = cmd_constants(parse_int_list(args.n, 'n'), parse_p_values(args.p), args.sigma)
    with pd.option_context('display.max_rows', None, 'display.width', 200):
        print(df.to_string(index=False))
    if args.out_dir:
        ResultsWriter(args.out_dir).write_results('constants', df)
    return EXIT_OK


def run_table(args) -> int:
    config = resolve_config(load_run_config(args.config), _flag_values(args))
    if not config.tables:
        raise ValidationError.from_message("at least one table id is required (--tables or tables=)")

    manifest = cmd_table(config.tables, config.reps, config.seed, config.p,
                         parse_size_pairs(args.sizes), config.out_dir, args.threads, config=config)
    if manifest.failed_cells:
        logger.error(f"❌ {manifest.failed_cells} table cells failed")
        return EXIT_VALIDATION
    return EXIT_OK


def run_risk(args) -> int:
    config = resolve_config(load_run_config(args.config), _flag_values(args))
    df, _ = cmd_risk(config, threads=args.threads)
    with pd.option_context('display.width', 200):
        print(df[['p', 'target', 'estimator', 'baseline', 'risk', 'se', 'pri']].to_string(index=False))
    return EXIT_OK


def run_verify(args) -> int:
    results, passed = cmd_verify(args.level, out_dir=args.out_dir, seed=args.seed, threads=args.threads)
    for result in results:
        for failure in result.failures:
            logger.error(f"❌ [{result.name}] {failure}")
    return EXIT_OK if passed else EXIT_VERIFICATION


COMMANDS = {
    'constants': run_constants,
    'table': run_table,
    'risk': run_risk,
    'verify': run_verify,
}


def main(argv=None) -> int:
    """Main entry point with command line arguments."""
    args = build_parser().parse_args(argv)
    start_time = datetime.now()
    logger.info(f"🎯 Command: {args.command}")

    try:
        code = COMMANDS[args.command](args)
    except ValidationError as e:
        logger.error(f"❌ Invalid configuration: {e}")
        code = EXIT_VALIDATION
    except (ResultsIOError, OSError) as e:
        logger.error(f"❌ I/O error: {e}")
        code = EXIT_IO
    except (OrdExpError, ValueError, KeyError) as e:
        logger.error(f"❌ {args.command} failed: {e}")
        code = EXIT_VALIDATION

    logger.info("=" * 60)
    status = "✅ SUCCESS" if code == EXIT_OK else f"❌ FAILED (exit {code})"
    logger.info(f"📊 {args.command.upper()}: {status} in {datetime.now() - start_time}")
    return code


if __name__ == "__main__":
    configure_logging()
    sys.exit(main())
