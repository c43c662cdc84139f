"""
Run reports

Collects verdicts, product statistics and diagnostics of one run, renders
them as text and exports them as JSON, Excel or HTML.
"""

import datetime
import html
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import openpyxl
from openpyxl.styles import Alignment, Font, PatternFill

from boolform import ConstTrue, print_formula
from ctl import Trace, trace_indices
from product import ReachabilityGraph

logger = logging.getLogger(__name__)

TEMPLATE_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'templates', 'report_export.html')


@dataclass
class CheckOutcome:
    system: str
    formula: str
    fair: bool
    verdict: bool
    expected: Optional[bool] = None
    elapsed: float = 0.0
    on_the_fly: bool = False
    complete: bool = True
    explored_states: int = 0
    explored_layers: int = 0
    witness_kind: Optional[str] = None
    witness_text: str = ''
    witness_valid: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return self.expected is None or self.expected == self.verdict

    @property
    def verdict_text(self) -> str:
        return 'TRUE' if self.verdict else 'FALSE'


@dataclass
class RunReport:
    source: str = ''
    outcomes: List[CheckOutcome] = field(default_factory=list)
    # per system: states, edges, deadlocks, fairness_sets, env_alphabet_size
    products: Dict[str, Dict[str, int]] = field(default_factory=dict)
    layers: Dict[str, Tuple[int, ...]] = field(default_factory=dict)
    diagnostics: List[str] = field(default_factory=list)
    validation_errors: int = 0

    @property
    def mismatches(self) -> List[CheckOutcome]:
        return [o for o in self.outcomes if not o.matches]

    @property
    def ok(self) -> bool:
        return self.validation_errors == 0 and not self.mismatches

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_dict(self, timing: bool = True) -> dict:
        data = asdict(self)
        for outcome, o in zip(data['outcomes'], self.outcomes):
            outcome['verdict'] = o.verdict_text
            outcome['matches'] = o.matches
            if not timing:
                del outcome['elapsed']
        data['layers'] = {k: list(v) for k, v in self.layers.items()}
        data['ok'] = self.ok
        return data


# ==================== Text ====================

def render_trace(rg: ReachabilityGraph, trace: Trace) -> str:
    """One state vector per line, with the environment condition of each step."""
    visited = trace_indices(rg, trace)
    steps = list(trace.prefix) + list(trace.cycle)
    if trace.is_lasso:
        lines = [f"lasso: prefix of {len(trace.prefix)} step(s), cycle of {len(trace.cycle)} step(s)"]
    else:
        lines = [f"path of {len(steps)} step(s)"]
    for position, i in enumerate(visited):
        if trace.is_lasso and position == len(trace.prefix):
            lines.append('  -- cycle --')
        if trace.is_lasso and position == len(visited) - 1:
            lines.append(f"  #{i} (back to cycle start)")
            break
        lines.append(f"  #{i} {rg.describe(i)}")
        if position < len(steps):
            edge = rg.edges[steps[position]]
            if edge.choices is None:
                lines.append('      (stutter)')
            elif not isinstance(edge.residual, ConstTrue):
                lines.append(f"      when {print_formula(edge.residual)}")
    return '\n'.join(lines)


def render_report(report: RunReport, timing: bool = True) -> str:
    """Plain-text report; without ``timing`` the text is identical across runs."""
    lines = []
    if report.source:
        lines.append(f"Model: {report.source}")
    for system, stats in report.products.items():
        lines.append(
            f"Product {system}: {stats['states']} states, {stats['edges']} edges, "
            f"{stats['deadlocks']} deadlock(s), {stats['fairness_sets']} fairness set(s), "
            f"{stats['env_alphabet_size']} environment symbol(s)")
    if report.diagnostics:
        lines.append('Diagnostics:')
        lines.extend(f"  {d}" for d in report.diagnostics)
    for n, o in enumerate(report.outcomes, 1):
        text = f"[{n}] {o.system}: {'fair ' if o.fair else ''}{o.formula}  {o.verdict_text}"
        if o.expected is not None:
            text += '  (expected ' + ('TRUE' if o.expected else 'FALSE') + ')'
            if not o.matches:
                text += '  MISMATCH'
        if o.on_the_fly:
            text += f"  [on the fly, {o.explored_states} state(s) in {o.explored_layers} layer(s)]"
        if timing:
            text += f"  {o.elapsed:.2f} s"
        lines.append(text)
        for note in o.notes:
            lines.append(f"    note: {note}")
        if o.witness_text:
            label = 'counterexample' if o.verdict is False else 'witness'
            lines.append(f"    {label}, {o.witness_text.splitlines()[0]}")
            lines.extend('    ' + line for line in o.witness_text.splitlines()[1:])
            if o.witness_valid is False:
                lines.append('    warning: trace failed validation')
    if report.outcomes:
        lines.append(f"Summary: {len(report.outcomes)} check(s), {len(report.mismatches)} mismatch(es)")
    return '\n'.join(lines)


# ==================== Exports ====================

def export_report_json(report: RunReport, path: str) -> Tuple[bool, str]:
    """Write the report as JSON.

    Returns:
        Tuple of (success, message)
    """
    try:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(report.to_dict(), f, indent=2)
        return True, f"Report exported to {path}"
    except OSError as e:
        return False, f"Failed to export report: {str(e)}"


def _write_sheet(ws, headers: List[str], rows: List[list]) -> None:
    header_font = Font(bold=True)
    header_fill = PatternFill(start_color="CCCCCC", end_color="CCCCCC", fill_type="solid")
    alignment = Alignment(horizontal='center')

    for col, header in enumerate(headers, 1):
        cell = ws.cell(row=1, column=col, value=header)
        cell.font = header_font
        cell.fill = header_fill
        cell.alignment = alignment

    for row, values in enumerate(rows, 2):
        for col, value in enumerate(values, 1):
            ws.cell(row=row, column=col, value=value)

    # Auto-adjust column widths
    for column in ws.columns:
        column_letter = column[0].column_letter
        max_length = max(len(str(cell.value)) if cell.value is not None else 0 for cell in column)
        ws.column_dimensions[column_letter].width = min(max_length + 2, 60)


def export_report_excel(report: RunReport, path: str) -> Tuple[bool, str]:
    """Write a workbook with a Checks sheet and a Product sheet."""
    try:
        wb = openpyxl.Workbook()
        ws = wb.active
        ws.title = "Checks"
        rows = []
        for o in report.outcomes:
            expected = '' if o.expected is None else ('TRUE' if o.expected else 'FALSE')
            rows.append([o.system, o.formula, 'yes' if o.fair else 'no', o.verdict_text, expected,
                         'yes' if o.matches else 'no', round(o.elapsed, 3), o.witness_kind or ''])
        _write_sheet(ws, ['System', 'Formula', 'Fair', 'Verdict', 'Expected', 'Matches',
                          'Time (s)', 'Witness'], rows)
        for row in range(2, len(rows) + 2):
            ws.cell(row=row, column=7).number_format = '0.000'

        ws = wb.create_sheet("Product")
        rows = [[system, s['states'], s['edges'], s['deadlocks'], s['fairness_sets'], s['env_alphabet_size']]
                for system, s in report.products.items()]
        _write_sheet(ws, ['System', 'States', 'Edges', 'Deadlocks', 'Fairness Sets', 'Env Symbols'], rows)

        if report.diagnostics:
            ws = wb.create_sheet("Diagnostics")
            _write_sheet(ws, ['Diagnostic'], [[d] for d in report.diagnostics])

        wb.save(path)
        return True, f"Report exported to {path}"
    except Exception as e:
        return False, f"Failed to export report: {str(e)}"


def export_report_html(report: RunReport, path: str) -> Tuple[bool, str]:
    """Fill templates/report_export.html with the report."""
    try:
        with open(TEMPLATE_PATH, 'r', encoding='utf-8') as f:
            template_content = f.read()
    except FileNotFoundError:
        return False, 'HTML template file not found. Please ensure templates/report_export.html exists.'

    product_rows = ""
    for system, s in report.products.items():
        product_rows += f"""                <tr>
                    <td>{html.escape(system)}</td>
                    <td style="text-align: right;">{s['states']}</td>
                    <td style="text-align: right;">{s['edges']}</td>
                    <td style="text-align: right;">{s['deadlocks']}</td>
                    <td style="text-align: right;">{s['fairness_sets']}</td>
                </tr>
"""

    check_rows = ""
    for o in report.outcomes:
        verdict_class = "verdict-true" if o.verdict else "verdict-false"
        mismatch_class = "" if o.matches else "mismatch"
        expected = '' if o.expected is None else ('TRUE' if o.expected else 'FALSE')
        witness = f"<pre>{html.escape(o.witness_text)}</pre>" if o.witness_text else ''
        check_rows += f"""                <tr class="{mismatch_class}">
                    <td>{html.escape(o.system)}</td>
                    <td><code>{html.escape(o.formula)}</code></td>
                    <td style="text-align: center;">{'yes' if o.fair else 'no'}</td>
                    <td class="{verdict_class}" style="text-align: center;">{o.verdict_text}</td>
                    <td style="text-align: center;">{expected}</td>
                    <td style="text-align: right;">{o.elapsed:.2f}</td>
                    <td>{witness}</td>
                </tr>
"""

    diagnostics = ''.join(f"<li>{html.escape(d)}</li>" for d in report.diagnostics)
    export_date = datetime.datetime.now().strftime("%Y-%m-%d %H:%M:%S")

    html_content = template_content.replace('{{source}}', html.escape(report.source or '-'))
    html_content = html_content.replace('{{export_date}}', export_date)
    html_content = html_content.replace('{{product_rows}}', product_rows)
    html_content = html_content.replace('{{check_rows}}', check_rows)
    html_content = html_content.replace('{{diagnostics}}', diagnostics or '<li>none</li>')
    html_content = html_content.replace('{{summary}}', 'all checks as expected' if report.ok
                                        else f"{len(report.mismatches)} mismatch(es)")

    try:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(html_content)
    except OSError as e:
        return False, f"Failed to export report: {str(e)}"
    return True, f"Report exported to {path}"
