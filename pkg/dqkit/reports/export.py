"""XLSX rendering of a ``dq`` report."""
from __future__ import annotations

import logging
from typing import Any, Iterable, Sequence

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter
from openpyxl.worksheet.table import Table, TableStyleInfo
from openpyxl.worksheet.worksheet import Worksheet

logger = logging.getLogger(__name__)

HEADER_FILL = PatternFill(start_color="3498db", end_color="3498db", fill_type="solid")
HEADER_FONT = Font(bold=True, color="FFFFFF", size=12)
TITLE_FONT = Font(bold=True, size=14)
BORDER = Border(
    left=Side(style="thin"),
    right=Side(style="thin"),
    top=Side(style="thin"),
    bottom=Side(style="thin"),
)
CENTER = Alignment(horizontal="center", vertical="center")
HEADER_ROW = 3


def _cell_value(value: Any) -> Any:
    """Numbers and text stay as they are; lists are joined."""
    if isinstance(value, (list, tuple)):
        return ", ".join(str(_cell_value(item)) for item in value)
    if isinstance(value, dict):
        return ", ".join(f"{key}={_cell_value(item)}" for key, item in value.items())
    return value


def _write_table(
    ws: Worksheet, name: str, headers: Sequence[str], rows: Iterable[Sequence[Any]]
) -> int:
    for col, header in enumerate(headers, start=1):
        cell = ws.cell(row=HEADER_ROW, column=col, value=header)
        cell.fill = HEADER_FILL
        cell.font = HEADER_FONT
        cell.border = BORDER
        cell.alignment = CENTER

    count = 0
    for row_idx, row in enumerate(rows, start=HEADER_ROW + 1):
        for col, value in enumerate(row, start=1):
            ws.cell(row=row_idx, column=col, value=_cell_value(value)).border = BORDER
        count += 1

    if count:
        last = get_column_letter(len(headers))
        table = Table(displayName=name, ref=f"A{HEADER_ROW}:{last}{HEADER_ROW + count}")
        table.tableStyleInfo = TableStyleInfo(
            name="TableStyleMedium9",
            showFirstColumn=False,
            showLastColumn=False,
            showRowStripes=True,
            showColumnStripes=False,
        )
        ws.add_table(table)

    for col in range(1, len(headers) + 1):
        ws.column_dimensions[get_column_letter(col)].width = 24
    return count


def _summary_sheet(wb: Workbook, report: dict) -> None:
    ws = wb.create_sheet("Summary", 0)
    ws["A1"] = f"dq {report['manifest']['command']}: {report['verdict']}"
    ws["A1"].font = TITLE_FONT

    runs = list(report["criteria"])
    for extra in ("roundtrip", "partials"):
        if report.get(extra):
            runs.append(report[extra])
    rows = [
        (
            run["criterion"],
            run["verdict"],
            run["mode"],
            run["samples_checked"],
            run["max_residual"],
            run["witness"],
            "; ".join(run["notes"]),
        )
        for run in runs
    ]
    last = HEADER_ROW + _write_table(
        ws,
        "Verdicts",
        ("Criterion", "Verdict", "Mode", "Samples", "Max residual", "Witness", "Notes"),
        rows,
    )

    row = last + 2
    ws.cell(row=row, column=1, value="Manifest").font = Font(bold=True, size=12)
    for key, value in sorted(report["manifest"].items()):
        row += 1
        ws.cell(row=row, column=1, value=key)
        ws.cell(row=row, column=2, value=_cell_value(value))


def _criterion_sheet(wb: Workbook, run: dict) -> None:
    ws = wb.create_sheet(run["criterion"][:31])
    ws["A1"] = f"{run['criterion']}: {run['verdict']}"
    ws["A1"].font = TITLE_FONT
    rows = (
        (sample["sample"], sample["residual"], sample["passed"], sample["note"])
        for sample in run["samples"]
    )
    _write_table(
        ws,
        f"Samples_{run['criterion']}",
        ("Sample", "Residual", "Passed", "Note"),
        rows,
    )


def _recovery_sheet(wb: Workbook, recovery: dict) -> None:
    ws = wb.create_sheet("Recovery")
    ws["A1"] = f"{recovery['kind']} recovery, C = {recovery['constant']}"
    ws["A1"].font = TITLE_FONT
    _write_table(ws, "RecoveredValues", ("x", "f(x)"), recovery["table"])
    if "coefficients" in recovery:
        ws.cell(row=1, column=4, value="p").font = Font(bold=True)
        ws.cell(row=1, column=5, value="c_p").font = Font(bold=True)
        for p, c in enumerate(recovery["coefficients"]):
            ws.cell(row=2 + p, column=4, value=p)
            ws.cell(row=2 + p, column=5, value=c)


def report_workbook(report: dict) -> Workbook:
    """Summary sheet, one sheet per criterion run, and a Recovery sheet when f was recovered."""
    wb = Workbook()
    wb.remove(wb.active)
    _summary_sheet(wb, report)
    for run in report["criteria"]:
        _criterion_sheet(wb, run)
    for extra in ("roundtrip", "partials"):
        if report.get(extra):
            _criterion_sheet(wb, report[extra])
    if report.get("recovery"):
        _recovery_sheet(wb, report["recovery"])
    return wb


def export_xlsx(report: dict, path: str) -> None:
    report_workbook(report).save(path)
    logger.info("wrote workbook %s", path)
