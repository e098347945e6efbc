# 2026/09/20
"""
write.py - Writing run reports to Excel.

Defines function 'write', which writes the metric rows of a run, their
confusion matrices and, when given, a parameter sweep grid to an Excel
file.

It consists of up to three sheets: Metrics, Confusion, Sweep.

"""
from __future__ import annotations

from datetime import datetime
from pathlib import Path
from typing import Any, Mapping

import openpyxl
import pandas as pd
from openpyxl.utils import get_column_letter

from uwids.metrics import METRIC_NAMES, MetricsReport

HEADER_METRICS = ["Model", *(name.upper() for name in METRIC_NAMES), "N"]
HEADER_CONFUSION = ["Model", "True \\ Predicted"]

XL_STYLE_CELLS = "Note"
XL_MET_COLUMNS_WIDTHS = [14, *[10] * len(METRIC_NAMES), 10]
XL_SWEEP_COLUMN_WIDTH = 14
XL_FORMAT_RATIO = "0.0000"
XL_TIMESTAMP = datetime(2026, 1, 1)

CUSTOM_STYLE_HEADER = {
    "bold": True,
    "color": "CCCCCC",
    "align": "center",
}
CUSTOM_STYLE_KEY = {"color": "E8E8E8", "align": "left"}


def write(
    output_path: str | Path,
    metrics: Mapping[str, MetricsReport],
    *,
    sweep: pd.DataFrame | None = None,
    overwrite: bool = False,
) -> Path:
    """Writes metric rows (model name -> report) to an Excel file.

    If `output_path` exists and `overwrite` is False, raises an error.

    """
    # Check path
    output_path = Path(output_path)
    if output_path.exists() and not overwrite:
        raise FileExistsError(f"File {output_path} already exists.")

    # Create workbook and sheets
    wb = openpyxl.Workbook()
    wb.properties.created = XL_TIMESTAMP
    wb.properties.modified = XL_TIMESTAMP
    ws_metrics = wb.active
    ws_metrics.title = "Metrics"
    ws_confusion = wb.create_sheet(title="Confusion")

    # Metrics
    set_column_widths(ws_metrics, XL_MET_COLUMNS_WIDTHS)
    write_and_style(
        ws_metrics,
        [1, 1],
        content=[{"value": header, **CUSTOM_STYLE_HEADER} for header in HEADER_METRICS],
    )
    for i, (name, report) in enumerate(metrics.items()):
        write_and_style(
            ws_metrics,
            [1, 2 + i],
            [
                {"value": name, **CUSTOM_STYLE_KEY},
                *(
                    {"value": value, "number_format": XL_FORMAT_RATIO}
                    for value in report.row().values()
                ),
                {"value": report.n},
            ],
        )

    # Confusion matrices, one block per model
    set_column_widths(ws_confusion, [14, 18, *[10] * 4])
    y = 1
    for name, report in metrics.items():
        write_and_style(
            ws_confusion,
            [1, y],
            [
                *({"value": h, **CUSTOM_STYLE_HEADER} for h in HEADER_CONFUSION),
                *({"value": label, **CUSTOM_STYLE_HEADER} for label in report.labels),
            ],
        )
        for label, counts in zip(report.labels, report.confusion):
            y += 1
            write_and_style(
                ws_confusion,
                [1, y],
                [
                    {"value": name, **CUSTOM_STYLE_KEY},
                    {"value": label, "bold": True},
                    *({"value": count} for count in counts),
                ],
            )
        y += 2

    # Sweep grid
    if sweep is not None:
        ws_sweep = wb.create_sheet(title="Sweep")
        set_column_widths(ws_sweep, [XL_SWEEP_COLUMN_WIDTH] * len(sweep.columns))
        write_and_style(
            ws_sweep,
            [1, 1],
            content=[{"value": str(c), **CUSTOM_STYLE_HEADER} for c in sweep.columns],
        )
        for i, row in enumerate(sweep.itertuples(index=False)):
            write_and_style(ws_sweep, [1, 2 + i], [_cell(value) for value in row])

    # Save workbook
    wb.save(output_path)
    return output_path


# Auxiliar functions


def _cell(value: Any) -> dict[str, Any]:
    if isinstance(value, float):
        return {"value": value, "number_format": XL_FORMAT_RATIO}
    if hasattr(value, "item"):
        value = value.item()
    return {"value": value}


def set_column_widths(
    sheet: openpyxl.worksheet.worksheet.Worksheet,
    widths: list[int],
) -> None:
    """Sets the column widths for the given sheet."""
    for i, width in enumerate(widths):
        sheet.column_dimensions[get_column_letter(i + 1)].width = width


def write_and_style(
    sheet: openpyxl.worksheet.worksheet.Worksheet,
    coords: list[int],
    content: list[dict[str, Any]],
) -> None:
    """Writes content to sheet, left to right from `coords` (column, row).

    Every cell takes the base style and a solid fill, white unless a 'color'
    is given; 'bold', 'align' and 'number_format' keys are applied when
    present.

    """
    x, y = coords
    for i, value in enumerate(content):
        cell = sheet.cell(row=y, column=x + i)
        cell.value = value["value"]

        cell.style = XL_STYLE_CELLS
        cell.fill = openpyxl.styles.PatternFill(
            start_color=value.get("color", "FFFFFF"),
            end_color=value.get("color", "FFFFFF"),
            fill_type="solid",
        )
        if value.get("bold", False):
            cell.font = openpyxl.styles.Font(bold=True)
        cell.alignment = openpyxl.styles.Alignment(
            horizontal=value.get("align", "center"),
            vertical="center",
        )
        if "number_format" in value:
            cell.number_format = value["number_format"]
