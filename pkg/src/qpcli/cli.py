#!/usr/bin/env python3
"""
cli.py

Command-line interface for quasipath scenarios.

Usage:
    quasipath eval --scenario S --curve C       -- Print S(curve)
    quasipath minimize --scenario S --out DIR   -- Minimum action curve (CSV + JSON)
    quasipath criteria --scenario S --out DIR   -- Existence verdicts (CSV + JSON)
    quasipath verify --scenario S --out DIR     -- Property suites

Every command writes report.json and ledger.json into the output
directory. Exit status 0 means every check passed, 1 a failed check or a
numerical failure, 2 a bad scenario or bad arguments.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.qpcore import ConfigError, LedgerIntegrityError, QuasipathError
from src.qpcriteria import classify_points, summarize, write_verdicts_csv, write_verdicts_json
from src.qpcurves import curve_length, read_curve_csv
from src.qpfunctional import geometric_action
from src.qpledger import ReportLedger, write_json
from src.qpminimize import minimize, write_minimize_result
from src.qpscenario import (
    ExportFormat,
    ScenarioExporter,
    ScenarioRuntime,
    build_criteria_context,
    build_initial_curve,
    build_problem,
    build_runner_config,
    build_runtime,
    build_verify_context,
    criteria_points,
    load_scenario,
)
from src.qpverify import EventLevel, LogHandler, SuiteRunner

logger = logging.getLogger('quasipath')

COMMANDS = ('eval', 'minimize', 'criteria', 'verify')
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def run_eval(rt: ScenarioRuntime, args: argparse.Namespace, ledger: ReportLedger) -> Dict[str, Any]:
    """Geometric action of the curve given by --curve"""
    if not args.curve:
        raise ConfigError("eval needs --curve")
    c = read_curve_csv(args.curve, dim=rt.dim)
    value = geometric_action(rt.action, c)
    print(repr(value))
    report = {'action': value, 'nodes': len(c), 'length': curve_length(c), 'curve': str(args.curve),
              'variant': rt.action.name, 'passed': True}
    ledger.append('eval', report)
    return report


def run_minimize(rt: ScenarioRuntime, args: argparse.Namespace, ledger: ReportLedger) -> Dict[str, Any]:
    """Relax the scenario problem and write <name>.csv / <name>.json"""
    problem = build_problem(rt, args.nodes, args.tol)
    initial = build_initial_curve(rt, args.curve)
    result = minimize(problem, initial, f=rt.field, threads=rt.threads)
    write_minimize_result(result, args.out, stem=rt.scenario.name, extra={'scenario': rt.scenario.name})
    if not result.converged:
        logger.warning("Minimizer stopped without converging: %s", result.stop_reason)
    if result.nonexistence_suspected:
        logger.warning("Winding keeps growing: non-existence of a minimizer suspected")
    report = dict(result.to_dict(), problem=problem.to_dict(), passed=bool(result.monotone))
    ledger.append('minimize', report, passed=report['passed'])
    print(f"S = {result.action_value!r} ({result.stop_reason}, {result.iterations} iterations)")
    return report


def run_criteria(rt: ScenarioRuntime, args: argparse.Namespace, ledger: ReportLedger) -> Dict[str, Any]:
    """Classify grid and listed points; write verdicts.csv / verdicts.json"""
    ctx = build_criteria_context(rt)
    context_entry = ledger.append('criteria.context', ctx.to_dict())
    verdicts = classify_points(ctx, criteria_points(rt), rt.threads)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_verdicts_csv(verdicts, out / 'verdicts.csv')
    write_verdicts_json(verdicts, out / 'verdicts.json', context=ctx.to_dict())
    summary = summarize(verdicts)
    required = rt.scenario.criteria.min_coverage
    passed = required is None or summary.coverage >= required
    report = dict(summary.to_dict(), min_coverage=required, seed=rt.seed, passed=passed)
    ledger.append('criteria', report, passed=passed, parent_id=context_entry.entry_id)
    print(f"{summary.covered}/{summary.total} points covered ({summary.coverage:.1%}); {summary.by_verdict}")
    return report


def run_verify(rt: ScenarioRuntime, args: argparse.Namespace, ledger: ReportLedger) -> Dict[str, Any]:
    """Run the scenario's property suites"""
    config = build_runner_config(rt.scenario)
    config.handlers.append(LogHandler(min_level=EventLevel.WARNING))
    runner = SuiteRunner(config, ledger=ledger)
    report = runner.run(build_verify_context(rt, args.nodes, args.tol))
    for summary in report.suites:
        print(f"{'PASS' if summary.passed else 'FAIL'}  {summary.name}  {summary.counts}")
    return report.to_dict()


HANDLERS = {'eval': run_eval, 'minimize': run_minimize, 'criteria': run_criteria, 'verify': run_verify}


def run(command: str, args: argparse.Namespace) -> int:
    """
    Execute one command; returns the exit status

    Raises:
        QuasipathError: Scenario, solver or suite failures (mapped by main)
    """
    if command not in HANDLERS:
        raise ConfigError(f"Unknown command '{command}'; expected one of {COMMANDS}")
    scenario = load_scenario(args.scenario)
    rt = build_runtime(scenario, seed=args.seed, threads=args.threads)
    out = Path(args.out) if args.out else Path('out') / scenario.name
    args.out = out

    ledger = ReportLedger()
    ledger.append('scenario', {'name': scenario.name, 'command': command, 'seed': rt.seed,
                               'overrides': {'nodes': args.nodes, 'tol': args.tol}})
    report = HANDLERS[command](rt, args, ledger)
    passed = bool(report.get('passed', False))

    if not ledger.verify_integrity():
        raise LedgerIntegrityError(f"{command}: report ledger failed its integrity check")
    last = ledger.get_all()[-1]

    out.mkdir(parents=True, exist_ok=True)
    ScenarioExporter.export_to_file(scenario, out / 'scenario.json', ExportFormat.JSON)
    write_json({'command': command, 'scenario': scenario.name, 'seed': rt.seed, 'passed': passed,
                'report': report,
                'ledger': {'root': ledger.root(), 'entry_id': last.entry_id,
                           'proof': ledger.proof(last.entry_id).to_dict()}}, out / 'report.json')
    ledger_path = ledger.write(out / 'ledger.json')
    stored = ReportLedger.read(ledger_path)
    if stored.root() != ledger.root() or not stored.verify_integrity():
        raise LedgerIntegrityError(f"{ledger_path}: written ledger does not reproduce root {ledger.root()[:16]}")
    logger.info("%s: %s (ledger root %s)", command, 'passed' if passed else 'FAILED', ledger.root()[:16])
    return EXIT_OK if passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='quasipath',
        description="quasipath: geometric minimum action curves and their existence criteria",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m src.qpcli minimize --scenario scenarios/double_well.yaml --out out/dw
  python -m src.qpcli eval --scenario scenarios/double_well.yaml --curve out/dw/double_well.csv
  python -m src.qpcli criteria --scenario scenarios/double_well.yaml --out out/dw
  python -m src.qpcli verify --scenario scenarios/limit_cycle.yaml --out out/lc --seed 7

Environment:
  QUASIPATH_THREADS   worker count for data-parallel sweeps (default 1)
        """
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command, help_text in (('eval', 'Print the geometric action of a curve'),
                               ('minimize', 'Compute a minimum action curve'),
                               ('criteria', 'Classify points by the existence criteria'),
                               ('verify', 'Run the property suites')):
        sub = subparsers.add_parser(command, help=help_text)
        sub.add_argument('--scenario', required=True, help='Scenario file (YAML, or JSON by suffix)')
        sub.add_argument('--out', default=None, help='Output directory (default: out/<scenario name>)')
        sub.add_argument('--nodes', type=int, default=None, help='Override problem.nodes')
        sub.add_argument('--seed', type=int, default=None, help='Override run.seed')
        sub.add_argument('--tol', type=float, default=None, help='Override problem.tol_S')
        sub.add_argument('--threads', type=int, default=None, help='Override run.threads')
        sub.add_argument('--curve', default=None, help='Curve CSV (eval: required; minimize: seed curve)')
        sub.add_argument('--log-level', default='WARNING',
                         choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'), help='Logging level')
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    try:
        return run(args.command, args)
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return 130
    except (ConfigError, OSError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG
    except QuasipathError as e:
        logger.error("%s: %s", type(e).__name__, e)
        logger.debug("Traceback", exc_info=True)
        return EXIT_FAILED


__all__: List[str] = ['COMMANDS', 'EXIT_OK', 'EXIT_FAILED', 'EXIT_CONFIG', 'build_parser', 'run', 'main']


if __name__ == '__main__':
    sys.exit(main())
