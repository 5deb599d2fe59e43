#!/usr/bin/env python3
"""
Command-line front end for the mismatched LRT exponent toolkit
"""

import argparse
import csv
import io
import json
import re
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from mlrt.config import config
from mlrt.exceptions import ConfigurationError, ValidationError
from mlrt.models.experiment import GAMMA_AUTO_BAYES, GAMMA_AUTO_STEIN, OUTPUT_FORMATS
from mlrt.models.experiment import CommandReport, ExperimentConfig
from mlrt.services.experiment_orchestrator import ExperimentOrchestrator
from mlrt.utils.error_handlers import EXIT_OK, handle_cli_errors
from mlrt.utils.logging_setup import configure_logging
from mlrt.validators.config_validator import ExperimentConfigValidator

COMMANDS = {
    'exponents': ('cmd_exponents', 'Matched primal/dual exponents and achievers'),
    'mismatched': ('cmd_mismatched', 'Mismatched exponents and tilt conditions'),
    'stein': ('cmd_stein', 'Stein threshold/exponent per n, optional Monte Carlo'),
    'worst-case': ('cmd_worst_case', 'Least-favorable exponents per hypothesis and radius'),
    'sensitivity': ('cmd_sensitivity', 'Sensitivity coefficients and monotonicity scan'),
    'bayes-sweep': ('cmd_bayes_sweep', 'Worst-case Bayes exponent sweep over R (plot-ready CSV)'),
}


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _gamma(text: str):
    if text in (GAMMA_AUTO_BAYES, GAMMA_AUTO_STEIN):
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"gamma must be a number, '{GAMMA_AUTO_BAYES}' or '{GAMMA_AUTO_STEIN}'")


# flag destination -> configuration field
OVERRIDES = {
    'p1': 'p1', 'p2': 'p2', 'phat1': 'p_hat1', 'phat2': 'p_hat2', 'gamma': 'gamma',
    'radii': 'radii', 'epsilon': 'epsilon', 'n': 'n_list', 'seed': 'seed', 'trials': 'trials',
    'scan_points': 'scan_points', 'format': 'output_format',
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per report"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', '-c', help="JSON configuration file ('-' for stdin)")
    common.add_argument('--p1', type=_float_list, help='Generating distribution 1, e.g. 0.9,0.1')
    common.add_argument('--p2', type=_float_list, help='Generating distribution 2')
    common.add_argument('--phat1', type=_float_list, help='Test distribution 1')
    common.add_argument('--phat2', type=_float_list, help='Test distribution 2')
    common.add_argument('--gamma', type=_gamma,
                        help=f"Threshold in nats, '{GAMMA_AUTO_BAYES}' or '{GAMMA_AUTO_STEIN}'")
    common.add_argument('--radii', type=_float_list, help='Ascending ball radii in nats')
    common.add_argument('--epsilon', type=float, help='Type-I error target in (0, 1/2)')
    common.add_argument('--n', type=_int_list, help='Block lengths, e.g. 100,200,500')
    common.add_argument('--seed', type=int, help='Monte Carlo seed')
    common.add_argument('--trials', type=int, help='Monte Carlo trials (0 disables)')
    common.add_argument('--scan-points', dest='scan_points', type=int,
                        help='Threshold grid size of the sensitivity scan')
    common.add_argument('--format', choices=OUTPUT_FORMATS, help='Output format (default csv)')
    common.add_argument('--out', '-o', help='Output file (default stdout)')

    parser = argparse.ArgumentParser(
        prog='mlrt',
        description="Error exponents of matched and mismatched likelihood ratio tests",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Matched exponents at the equal-slope threshold
  mlrt exponents --p1 0.9,0.1 --p2 0.2,0.8 --gamma -0.0706698

  # Mismatched test against true distributions
  mlrt mismatched --p1 0.9,0.1 --p2 0.2,0.8 --phat1 0.8,0.2 --phat2 0.3,0.7 --gamma 0

  # Stein threshold with Monte Carlo validation
  mlrt stein --p1 0.9,0.1 --p2 0.2,0.8 --epsilon 0.1 --n 2000 --trials 100000 --seed 7

  # Worst-case Bayes exponent sweep
  mlrt bayes-sweep --format csv --out bayes_sweep.csv

Exit codes: 0 success, 2 configuration error, 3 solver error, 4 infeasible problem.
        """
    )
    subparsers = parser.add_subparsers(dest='command', help='Available commands')
    for name, (_, help_text) in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=help_text)
    return parser


def _line_of(source: str, key: str) -> Optional[int]:
    pattern = re.compile(r'"' + re.escape(key) + r'"\s*:')
    for number, line in enumerate(source.splitlines(), start=1):
        if pattern.search(line):
            return number
    return None


def load_config(path: Optional[str], overrides: Dict[str, Any]) -> ExperimentConfig:
    """Read the JSON document, apply flag overrides and validate.

    Field errors in the document are reported with the line of the offending key.
    """
    source = ''
    data: Dict[str, Any] = {}
    if path:
        try:
            source = sys.stdin.read() if path == '-' else Path(path).read_text(encoding='utf-8')
        except OSError as e:
            raise ConfigurationError(f"cannot read config '{path}': {e.strerror}",
                                     config_key='config')
        try:
            data = json.loads(source)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"line {e.lineno}: invalid JSON ({e.msg})", line=e.lineno)
        if not isinstance(data, dict):
            raise ConfigurationError("line 1: configuration must be a JSON object", line=1)

    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        ExperimentConfigValidator().validate(data)
    except ValidationError as e:
        from_document = e.field is not None and overrides.get(e.field) is None
        line = _line_of(source, e.field) if from_document else None
        message = f"line {line}: {e.message}" if line else e.message
        raise ConfigurationError(message, config_key=e.field, line=line)
    return ExperimentConfig.from_dict(data)


def _cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ';'.join(_cell(v) for v in value)
    return str(value)


def render(report: CommandReport, fmt: str) -> str:
    """CSV (header plus rows, LF endings) or JSON (the full report)"""
    if fmt == 'json':
        return json.dumps(report.to_dict(), indent=2) + '\n'
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_cell(row.get(column)) for column in report.columns])
    return buffer.getvalue()


def read_report(path: str) -> CommandReport:
    """Load a JSON report written by render()"""
    return CommandReport.from_dict(json.loads(Path(path).read_text(encoding='utf-8')))


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)


@handle_cli_errors
def main(argv: Optional[List[str]] = None,
         orchestrator_factory: Callable[[], ExperimentOrchestrator] = ExperimentOrchestrator
         ) -> int:
    """Main CLI entry point"""
    configure_logging(config)
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return 1

    overrides = {field: getattr(args, dest) for dest, field in OVERRIDES.items()}
    cfg = load_config(args.config, overrides)

    method_name, _ = COMMANDS[args.command]
    report = getattr(orchestrator_factory(), method_name)(cfg)
    _write(render(report, cfg.output_format), args.out)
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == '__main__':
    run()
