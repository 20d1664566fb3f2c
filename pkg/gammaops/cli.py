"""
Command-line entry point for gammaops experiments.

Every subcommand builds an ExperimentConfig (defaults, then the optional
JSON config file, then flags) and hands it to `run`, which writes a CSV
plus a `.meta.json` sidecar or prints a human-readable table.

Exit codes: 0 success, 2 config/usage error, 3 constraint violation,
4 numeric failure, 5 asserted bound violation.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import click
import pandas as pd
from pydantic import ValidationError

from gammaops.config import create_directories, get_config
from gammaops.exceptions import BoundViolationError, GammaOpsError, MomentUndefinedError
from gammaops.extensions import init_extensions
from gammaops.models.builtins import builtin_ids, get_builtin
from gammaops.schemas.experiment import Command, ExperimentConfig, OperatorKind, OutputFormat
from gammaops.schemas.operator import OperatorParams, QuadratureConfig, SpecialKind, SplitPolicy
from gammaops.services.export_service import (
    AUDIT_COLUMNS,
    BOUNDS_COLUMNS,
    EVAL_COLUMNS,
    MOMENTS_COLUMNS,
    ORDER_COLUMNS,
    VORONOVSKAJA_COLUMNS,
    ExportService,
)
from gammaops.services.moment_service import MomentService
from gammaops.services.operator_service import OperatorService
from gammaops.services.verification_service import VerificationService
from gammaops.utils.extrapolation import doubling_ladder

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VIOLATION = BoundViolationError.exit_code

# orders whose published closed forms must match the oracle
ASSERTED_AUDIT_ORDERS = (0, 1, 2)


def parse_int_list(text: str) -> List[int]:
    """
    Parse '5', '1,2,3', '0..4' (inclusive range) or '25:400' (doubling ladder).

    Items may be mixed: '1,3..5' -> [1, 3, 4, 5].
    """
    text = str(text).strip()
    if ':' in text:
        start, stop = text.split(':', 1)
        return doubling_ladder(int(start), int(stop))
    values: List[int] = []
    for item in text.split(','):
        item = item.strip()
        if not item:
            continue
        if '..' in item:
            lo, hi = item.split('..', 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f'empty range {item}')
            values.extend(range(lo, hi + 1))
        else:
            values.append(int(item))
    if not values:
        raise ValueError('no values given')
    return values


class IntListType(click.ParamType):
    """click type for parse_int_list."""
    name = 'INTS'

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            return parse_int_list(value)
        except (ValueError, GammaOpsError) as e:
            self.fail(f'{value!r} is not an integer list, range a..b or ladder a:b ({e})', param, ctx)


class FloatListType(click.ParamType):
    """Comma-separated floats."""
    name = 'FLOATS'

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            return [float(item) for item in str(value).split(',') if item.strip()]
        except ValueError:
            self.fail(f'{value!r} is not a comma-separated list of numbers', param, ctx)


class StrListType(click.ParamType):
    """Comma-separated identifiers."""
    name = 'IDS'

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        return [item.strip() for item in str(value).split(',') if item.strip()]


INTS = IntListType()
FLOATS = FloatListType()
IDS = StrListType()


@dataclass
class RunResult:
    """Output of one workflow before rendering."""
    frame: pd.DataFrame
    title: str
    exit_code: int = EXIT_OK
    summary: Dict[str, Any] = field(default_factory=dict)


def _check_moment_orders(params: List[OperatorParams], m_values: List[int]) -> None:
    """Every requested order must be defined for every (n, k, r) of the grid."""
    highest = max(m_values)
    for p in params:
        limit = min(p.max_raw_order, p.max_mstar_order)
        if highest > limit:
            raise MomentUndefinedError(
                f'moment order m={highest} is undefined for n={p.n}, k={p.k}, r={p.r}: '
                f'needs m <= n-k = {p.max_raw_order} and m <= n-r = {p.max_mstar_order}'
            )


def _moments(config: ExperimentConfig) -> RunResult:
    params = config.operator_params()
    m_values = sorted(set(config.m_values))
    _check_moment_orders(params, m_values)

    rows = []
    for p in params:
        for m in m_values:
            row = {'n': p.n, 'k': p.k, 'r': p.r, 'm': m}
            rows.append({**row, 'kind': 'raw', 'coefficient': MomentService.raw_moment(p.n, p.k, m)})
            rows.append({**row, 'kind': 'central', 'coefficient': MomentService.central_moment(p.n, p.k, m)})
            rows.append({**row, 'kind': 'mstar_raw', 'coefficient': MomentService.mstar_raw_moment(p.n, p.k, p.r, m)})
            rows.append({**row, 'kind': 'mstar_central', 'coefficient': MomentService.mstar_central_moment(p.n, p.k, p.r, m)})
            if m <= 4:
                rows.append({**row, 'kind': 'closed_form',
                             'coefficient': MomentService.closed_form_mstar_central(p.n, p.k, p.r, m)})
    return RunResult(ExportService.frame(rows, MOMENTS_COLUMNS), 'Exact moment coefficients (multiply by x^m)')


def _evaluate(config: ExperimentConfig) -> RunResult:
    q = config.quadrature
    operator = config.operator
    rows = []
    for p in config.operator_params():
        for function_id in config.function_ids:
            f = get_builtin(function_id)
            for x in sorted(set(config.x_values)):
                if operator == OperatorKind.M:
                    value = OperatorService.apply(p, f, x, q)
                elif operator == OperatorKind.derivative:
                    value = OperatorService.apply_derivative(p, f, x, q)
                elif operator == OperatorKind.mstar:
                    value = OperatorService.apply_mstar(p.n, p.k, p.r, f, x, q)
                elif operator == OperatorKind.G:
                    value = OperatorService.apply_gn(p.n, f, x, q)
                else:
                    kind = SpecialKind.F if operator == OperatorKind.F else SpecialKind.L
                    value = OperatorService.apply_special(kind, p.n, f, x, q)
                rows.append({'n': p.n, 'k': p.k, 'r': p.r, 'x': x, 'f': function_id,
                             'operator': operator.value, 'value': value})
    return RunResult(ExportService.frame(rows, EVAL_COLUMNS), f'Operator {operator.value} values')


def _voronovskaja(config: ExperimentConfig) -> RunResult:
    rows = []
    converged = {}
    for function_id in config.function_ids:
        f = get_builtin(function_id)
        for k in sorted(set(config.k_values)):
            for r in sorted(set(config.r_values)):
                for x in sorted(set(config.x_values)):
                    report = VerificationService.voronovskaja_sequence(
                        f, x, k, r, config.n_values, config.quadrature, config.tolerance,
                    )
                    if not report.converged:
                        logger.warning(
                            f'{function_id} k={k} r={r} x={x:g}: extrapolated {report.extrapolated:.6g} '
                            f'vs target {report.target:.6g} outside tolerance {report.tolerance:g}'
                        )
                    converged[f'{function_id}|k={k}|r={r}|x={x:g}'] = report.converged
                    rows.extend(ExportService.voronovskaja_rows(report))
    return RunResult(ExportService.frame(rows, VORONOVSKAJA_COLUMNS), 'Voronovskaja scaled deviations',
                     summary={'converged': converged})


def _bounds(config: ExperimentConfig) -> RunResult:
    reports = VerificationService.bound_grid(
        config.theorems, config.function_ids, config.n_values, config.k_values,
        config.r_values, config.x_values, config.quadrature,
    )
    violations = VerificationService.violations(reports)
    for report in violations:
        logger.error(
            f'{report.theorem} violated: f={report.function_id} n={report.n} k={report.k} '
            f'r={report.r} x={report.x:g} lhs={report.lhs:.6g} rhs={report.rhs:.6g}'
        )
    summary = {
        'reports': len(reports),
        'violations': len(violations),
        'max_empirical_C': max((r.empirical_C for r in reports if r.empirical_C is not None), default=None),
    }
    return RunResult(ExportService.frame(ExportService.bound_rows(reports), BOUNDS_COLUMNS), 'Error bound checks',
                     exit_code=EXIT_VIOLATION if violations else EXIT_OK, summary=summary)


def _order(config: ExperimentConfig) -> RunResult:
    rows = []
    passed = {}
    for m in sorted(set(config.m_values)):
        for k in sorted(set(config.k_values)):
            for r in sorted(set(config.r_values)):
                report = VerificationService.check_moment_order(m, k, r, config.n_values)
                passed[f'm={m}|k={k}|r={r}'] = report.passed
                rows.extend(ExportService.order_rows(report))
    return RunResult(ExportService.frame(rows, ORDER_COLUMNS), 'Scaled central moments', summary={'passed': passed})


def _audit(config: ExperimentConfig) -> RunResult:
    audit = MomentService.audit_closed_forms(config.n_values, config.k_values, config.r_values, config.m_values)
    rates = {m: audit.match_rate(m) for m in audit.orders}
    failed = [c for c in audit.mismatches if c.m in ASSERTED_AUDIT_ORDERS]
    return RunResult(ExportService.frame(ExportService.audit_rows(audit), AUDIT_COLUMNS),
                     'Closed forms versus binomial-sum oracle',
                     exit_code=EXIT_VIOLATION if failed else EXIT_OK,
                     summary={'match_rate': rates, 'mismatches': len(audit.mismatches)})


WORKFLOWS: Dict[Command, Callable[[ExperimentConfig], RunResult]] = {
    Command.moments: _moments,
    Command.eval: _evaluate,
    Command.voronovskaja: _voronovskaja,
    Command.bounds: _bounds,
    Command.order: _order,
    Command.audit: _audit,
}


def execute(config: ExperimentConfig) -> RunResult:
    """Run the workflow for config.command and return its table."""
    logger.info(f'Running {config.command.value}')
    # every (n, k, r) of the grid is validated before any computation
    config.operator_params()
    return WORKFLOWS[config.command](config)


def run(config: ExperimentConfig, app_config=None) -> int:
    """
    Execute an experiment and emit its output.

    Args:
        config: Validated experiment configuration
        app_config: Configuration class; defaults to get_config()

    Returns:
        Process exit status
    """
    app_config = app_config or get_config()
    try:
        result = execute(config)
    except GammaOpsError as e:
        logger.error(f'{config.command.value} failed: {e}')
        click.echo(f'Error: {e}', err=True)
        return e.exit_code

    if config.format == OutputFormat.human:
        click.echo(ExportService.render_human(result.frame, result.title))
        for key, value in result.summary.items():
            click.echo(f'{key}: {value}')
    else:
        path = config.output
        if path is None:
            create_directories(app_config)
            path = os.path.join(app_config.OUTPUT_DIR, f'{config.command.value}.csv')
        ExportService.write_csv(result.frame, path)
        ExportService.write_metadata(path, config.command.value, config.model_dump(mode='json'), result.summary)
        click.echo(path)
    return result.exit_code


def _load_config_file(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    with open(path, encoding='utf-8') as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise click.BadParameter('config file must hold a JSON object', param_hint='--config')
    return data


def _build_config(ctx: click.Context, command: Command, defaults: Dict[str, Any], flags: Dict[str, Any]) -> ExperimentConfig:
    """Defaults, then config file, then flags; exits with status 2 on invalid input."""
    obj = ctx.obj
    app_config = obj['app_config']
    try:
        file_values = _load_config_file(obj['config_path'])
    except (OSError, json.JSONDecodeError) as e:
        click.echo(f'Error: cannot read config file: {e}', err=True)
        ctx.exit(EXIT_CONFIG)

    values = {**defaults, **{key: value for key, value in file_values.items() if key != 'quadrature'}}
    values.update({key: value for key, value in flags.items() if value is not None})
    for key in ('output', 'format'):
        if obj.get(key) is not None:
            values[key] = obj[key]
    values['command'] = command

    try:
        quadrature = QuadratureConfig.from_config(app_config).model_dump()
        quadrature.update(file_values.get('quadrature', {}))
        quadrature.update({key: value for key, value in obj['quadrature'].items() if value is not None})
        values['quadrature'] = QuadratureConfig(**quadrature)
        return ExperimentConfig(**values)
    except ValidationError as e:
        logger.error(f'Invalid experiment configuration: {e}')
        click.echo(f'Error: invalid configuration:\n{e}', err=True)
        ctx.exit(EXIT_CONFIG)


def _dispatch(ctx: click.Context, command: Command, defaults: Dict[str, Any], **flags):
    config = _build_config(ctx, command, defaults, flags)
    ctx.exit(run(config, ctx.obj['app_config']))


@click.group()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='JSON experiment config; flags override its values')
@click.option('--output', type=click.Path(dir_okay=False), default=None,
              help='Output CSV path (default: $GAMMAOPS_OUTPUT_DIR/<command>.csv)')
@click.option('--format', 'output_format', type=click.Choice([f.value for f in OutputFormat]), default=None,
              help='csv (default) or human')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'], case_sensitive=False),
              default=None, help='Override GAMMAOPS_LOG_LEVEL')
@click.option('--env', 'env_name', type=click.Choice(['development', 'testing', 'production']), default=None,
              help='Configuration environment (default: $GAMMAOPS_ENV)')
@click.option('--node-budget', type=int, default=None, help='Quadrature node budget')
@click.option('--rel-tol', type=float, default=None, help='Quadrature relative tolerance')
@click.option('--abs-tol', type=float, default=None, help='Quadrature absolute tolerance')
@click.option('--split-policy', type=click.Choice([p.value for p in SplitPolicy]), default=None,
              help='Panel placement')
@click.pass_context
def main(ctx, config_path, output, output_format, log_level, env_name, node_budget, rel_tol, abs_tol, split_policy):
    """Generalized Gamma-type operators: moments, evaluation and verification."""
    app_config = get_config(env_name)
    init_extensions(app_config, log_level)
    ctx.ensure_object(dict)
    ctx.obj.update({
        'app_config': app_config,
        'config_path': config_path,
        'output': output,
        'format': output_format,
        'quadrature': {
            'node_budget': node_budget,
            'rel_tolerance': rel_tol,
            'abs_tolerance': abs_tol,
            'split_policy': split_policy,
        },
    })


@main.command()
@click.option('--n', 'n_values', type=INTS, default=None, help="n values, e.g. 5 or 5..10")
@click.option('--k', 'k_values', type=INTS, default=None)
@click.option('--r', 'r_values', type=INTS, default=None)
@click.option('--m', 'm_values', type=INTS, default=None, help='Moment orders, e.g. 0..4')
@click.pass_context
def moments(ctx, n_values, k_values, r_values, m_values):
    """Exact raw, central and closed-form moment coefficients."""
    _dispatch(ctx, Command.moments, {'m_values': [0, 1, 2, 3, 4]},
              n_values=n_values, k_values=k_values, r_values=r_values, m_values=m_values)


@main.command('eval')
@click.option('--f', 'function_ids', type=IDS, default=None, help=f"Function ids: {', '.join(builtin_ids())}")
@click.option('--n', 'n_values', type=INTS, default=None)
@click.option('--k', 'k_values', type=INTS, default=None)
@click.option('--r', 'r_values', type=INTS, default=None)
@click.option('--x', 'x_values', type=FLOATS, default=None, help='Evaluation points, e.g. 0.5,1,2')
@click.option('--operator', type=click.Choice([o.value for o in OperatorKind]), default=None)
@click.pass_context
def evaluate(ctx, function_ids, n_values, k_values, r_values, x_values, operator):
    """Evaluate an operator by quadrature."""
    _dispatch(ctx, Command.eval, {},
              function_ids=function_ids, n_values=n_values, k_values=k_values,
              r_values=r_values, x_values=x_values, operator=operator)


@main.command()
@click.option('--f', 'function_ids', type=IDS, default=None)
@click.option('--x', 'x_values', type=FLOATS, default=None)
@click.option('--k', 'k_values', type=INTS, default=None)
@click.option('--r', 'r_values', type=INTS, default=None)
@click.option('--ladder', 'n_values', type=INTS, default=None, help='Doubling ladder, e.g. 25:400')
@click.option('--tolerance', type=float, default=None, help='Allowed |extrapolated - target|')
@click.pass_context
def voronovskaja(ctx, function_ids, x_values, k_values, r_values, n_values, tolerance):
    """Scaled deviations along a doubling ladder and their extrapolated limit."""
    _dispatch(ctx, Command.voronovskaja, {'n_values': doubling_ladder(25, 400)},
              function_ids=function_ids, x_values=x_values, k_values=k_values,
              r_values=r_values, n_values=n_values, tolerance=tolerance)


@main.command()
@click.option('--f', 'function_ids', type=IDS, default=None)
@click.option('--n', 'n_values', type=INTS, default=None)
@click.option('--k', 'k_values', type=INTS, default=None)
@click.option('--r', 'r_values', type=INTS, default=None)
@click.option('--x', 'x_values', type=FLOATS, default=None)
@click.option('--theorem', 'theorems', type=IDS, default=None, help='first-modulus,second-modulus')
@click.pass_context
def bounds(ctx, function_ids, n_values, k_values, r_values, x_values, theorems):
    """First- and second-modulus error bound checks over a grid."""
    _dispatch(ctx, Command.bounds, {'function_ids': ['exp-neg', 't-over-1pt'], 'n_values': [10, 20, 50, 100, 200],
               'k_values': [1, 2], 'r_values': [0, 1], 'x_values': [0.5, 1.0, 2.0]},
              function_ids=function_ids, n_values=n_values, k_values=k_values,
              r_values=r_values, x_values=x_values, theorems=theorems)


@main.command()
@click.option('--m', 'm_values', type=INTS, default=None)
@click.option('--k', 'k_values', type=INTS, default=None)
@click.option('--r', 'r_values', type=INTS, default=None)
@click.option('--n', 'n_values', type=INTS, default=None, help='n values, e.g. 20:320')
@click.pass_context
def order(ctx, m_values, k_values, r_values, n_values):
    """Order of the central moments along an n-ladder."""
    _dispatch(ctx, Command.order, {'m_values': [2, 3, 4], 'n_values': doubling_ladder(20, 320)},
              m_values=m_values, k_values=k_values, r_values=r_values, n_values=n_values)


@main.command()
@click.option('--n', 'n_values', type=INTS, default=None)
@click.option('--k', 'k_values', type=INTS, default=None)
@click.option('--r', 'r_values', type=INTS, default=None)
@click.option('--m', 'm_values', type=INTS, default=None)
@click.pass_context
def audit(ctx, n_values, k_values, r_values, m_values):
    """Compare the published closed forms with the exact oracle."""
    _dispatch(ctx, Command.audit,
              {'n_values': list(range(5, 51)), 'k_values': [1, 2, 3, 4, 5],
               'r_values': [0, 1, 2, 3, 4, 5], 'm_values': [0, 1, 2, 3, 4]},
              n_values=n_values, k_values=k_values, r_values=r_values, m_values=m_values)


if __name__ == '__main__':
    main()
