"""
Table export.

Reports are flattened into one row per datum and written with pandas:
header row, no index, 17 significant digits for floats, rationals as
"p/q" strings. Run metadata goes to a JSON sidecar so data files stay
byte-identical across runs.
"""

import json
import logging
import os
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd

from gammaops.schemas.reports import BoundReport, ClosedFormAudit, OrderReport, VoronovskajaReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'

MOMENTS_COLUMNS = ['n', 'k', 'r', 'm', 'kind', 'coefficient']
EVAL_COLUMNS = ['n', 'k', 'r', 'x', 'f', 'operator', 'value']
VORONOVSKAJA_COLUMNS = ['n', 'k', 'r', 'x', 'f', 'E_n', 'target', 'extrapolated']
BOUNDS_COLUMNS = ['theorem', 'n', 'k', 'r', 'x', 'f', 'lhs', 'rhs', 'slack', 'holds', 'empirical_C']
ORDER_COLUMNS = ['m', 'k', 'r', 'n', 'scaled', 'ratio', 'passed']
AUDIT_COLUMNS = ['n', 'k', 'r', 'm', 'closed_form', 'oracle', 'match']


def _cell(value):
    if isinstance(value, Fraction):
        return str(value)
    return value


class ExportService:
    """Build DataFrames from reports and write them out."""

    @staticmethod
    def frame(rows: Iterable[Dict[str, Any]], columns: List[str]) -> pd.DataFrame:
        """DataFrame with a fixed column order; Fractions become 'p/q' strings."""
        records = [{column: _cell(row.get(column)) for column in columns} for row in rows]
        return pd.DataFrame(records, columns=columns)

    @staticmethod
    def voronovskaja_rows(report: VoronovskajaReport) -> List[Dict[str, Any]]:
        """One row per rung; target and extrapolated repeat on every row."""
        return [
            {
                'n': n, 'k': report.k, 'r': report.r, 'x': report.x, 'f': report.function_id,
                'E_n': e_n, 'target': report.target, 'extrapolated': report.extrapolated,
            }
            for n, e_n in zip(report.n_values, report.e_n)
        ]

    @staticmethod
    def bound_rows(reports: Iterable[BoundReport]) -> List[Dict[str, Any]]:
        return [
            {
                'theorem': report.theorem, 'n': report.n, 'k': report.k, 'r': report.r,
                'x': report.x, 'f': report.function_id, 'lhs': report.lhs, 'rhs': report.rhs,
                'slack': report.slack, 'holds': report.holds, 'empirical_C': report.empirical_C,
            }
            for report in sorted(reports, key=lambda report: report.sort_key)
        ]

    @staticmethod
    def order_rows(report: OrderReport) -> List[Dict[str, Any]]:
        """ratio is empty on the first row (and on every row of a degenerate report)."""
        ratios = [None] + list(report.ratios) if report.ratios else [None] * len(report.n_values)
        return [
            {
                'm': report.m, 'k': report.k, 'r': report.r, 'n': n,
                'scaled': scaled, 'ratio': ratio, 'passed': report.passed,
            }
            for n, scaled, ratio in zip(report.n_values, report.scaled, ratios)
        ]

    @staticmethod
    def audit_rows(audit: ClosedFormAudit) -> List[Dict[str, Any]]:
        return [
            {
                'n': c.n, 'k': c.k, 'r': c.r, 'm': c.m,
                'closed_form': c.closed_form, 'oracle': c.oracle, 'match': c.match,
            }
            for c in sorted(audit.comparisons, key=lambda c: (c.n, c.k, c.r, c.m))
        ]

    @staticmethod
    def write_csv(df: pd.DataFrame, path: str) -> str:
        """Write df to path, creating parent directories."""
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.info(f'Wrote {len(df)} rows to {path}')
        return path

    @staticmethod
    def render_human(df: pd.DataFrame, title: Optional[str] = None) -> str:
        """Plain-text table for terminal output."""
        table = df.to_string(index=False, float_format=lambda value: f'{value:.10g}')
        return f'{title}\n{table}' if title else table

    @staticmethod
    def metadata_path(path: str) -> str:
        """<name>.meta.json next to <name>.csv."""
        root, _ = os.path.splitext(path)
        return f'{root}.meta.json'

    @staticmethod
    def write_metadata(path: str, command: str, config: Dict[str, Any], extra: Optional[Dict[str, Any]] = None) -> str:
        """
        Write the run metadata sidecar for a data file.

        Args:
            path: Path of the data file the sidecar belongs to
            command: Subcommand that produced it
            config: Resolved experiment configuration (JSON-serializable)
            extra: Additional summary values (match rates, counts)

        Returns:
            Path of the sidecar
        """
        from gammaops import __version__

        meta = {
            'package': 'gammaops',
            'version': __version__,
            'command': command,
            'created_at': datetime.now(timezone.utc).isoformat(),
            'data_file': os.path.basename(path),
            'config': config,
        }
        if extra:
            meta['summary'] = extra
        sidecar = ExportService.metadata_path(path)
        with open(sidecar, 'w', encoding='utf-8') as handle:
            json.dump(meta, handle, indent=2, sort_keys=True, default=str)
        return sidecar
