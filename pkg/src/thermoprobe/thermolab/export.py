"""CSV, JSON and SVG writers for sweep results."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from pathlib import Path
from typing import Optional
from xml.sax.saxutils import escape

from ..errors import IoError, ValidationError
from ..teleport import CLASSICAL_FIDELITY
from .sweep import COLUMNS, SweepResult

FORMATS = ("csv", "json", "svg")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    # repr of a float is the shortest string that round-trips
    return repr(float(value))


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in result.rows:
        writer.writerow([_cell(v) for v in row.values()])
    return buf.getvalue()


def to_json(result: SweepResult) -> str:
    payload = {
        "meta": result.meta,
        "rows": [dataclasses.asdict(r) for r in result.rows],
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


# --- SVG -------------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
_PANELS = (
    ("QFI", ("qfi_direct", "qfi_remote")),
    ("HSS", ("hss_direct", "hss_remote")),
    ("fidelity", ("fidelity",)),
)
_DASH = {"qfi_remote": "6,4", "hss_remote": "6,4"}
_W, _H = 640, 300
_LEFT, _RIGHT, _TOP, _BOTTOM = 80, 150, 30, 50


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _series_label(column: str, vary_field: Optional[str], vary_value) -> str:
    label = column
    if vary_value is not None:
        label += f" ({vary_field}={vary_value:g})"
    return label


def _panel(result: SweepResult, title: str, columns, y_offset: int, vary_field) -> list[str]:
    present = [c for c in columns if any(getattr(r, c) is not None for r in result.rows)]
    if not present:
        return []
    temps = [r.T for r in result.rows]
    ys = [getattr(r, c) for r in result.rows for c in present if getattr(r, c) is not None]
    if title == "fidelity":
        ys = ys + [CLASSICAL_FIDELITY]
    x0, x1 = min(temps), max(temps)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM

    def sx(x):
        return _LEFT + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return y_offset + _TOP + ph - (y - y0) / (y1 - y0) * ph

    out = [f'<g class="panel" id="{escape(title)}">']
    out.append(
        f'<rect x="{_LEFT}" y="{y_offset + _TOP}" width="{pw}" height="{ph}" '
        'fill="none" stroke="#000"/>'
    )
    for t in _ticks(x0, x1):
        out.append(f'<text x="{sx(t):.2f}" y="{y_offset + _TOP + ph + 16}" font-size="11" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{_LEFT - 6}" y="{sy(t) + 4:.2f}" font-size="11" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{_LEFT + pw / 2}" y="{y_offset + _H - 12}" font-size="13" text-anchor="middle">T</text>')
    out.append(
        f'<text x="18" y="{y_offset + _TOP + ph / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {y_offset + _TOP + ph / 2})">{escape(title)}</text>'
    )

    legend_y = y_offset + _TOP + 10
    color_index = 0
    for vary_value in result.vary_values():
        rows = [r for r in result.rows if r.vary_value == vary_value]
        color = _PALETTE[color_index % len(_PALETTE)]
        color_index += 1
        for column in present:
            pts = [(r.T, getattr(r, column)) for r in rows if getattr(r, column) is not None]
            if not pts:
                continue
            path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
            dash = f' stroke-dasharray="{_DASH[column]}"' if column in _DASH else ""
            label = escape(_series_label(column, vary_field, vary_value))
            out.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{path}">'
                f"<title>{label}</title></polyline>"
            )
            lx = _W - _RIGHT + 10
            out.append(f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 20}" y2="{legend_y}" stroke="{color}"{dash}/>')
            out.append(f'<text x="{lx + 24}" y="{legend_y + 4}" font-size="10">{label}</text>')
            legend_y += 14

    if title == "fidelity":
        y = sy(CLASSICAL_FIDELITY)
        out.append(
            f'<line class="classical-threshold" x1="{_LEFT}" y1="{y:.2f}" x2="{_LEFT + pw}" '
            f'y2="{y:.2f}" stroke="#555" stroke-dasharray="2,3"/>'
        )
        out.append(f'<text x="{_LEFT + pw - 4}" y="{y - 4:.2f}" font-size="10" text-anchor="end">CT = 2/3</text>')
    out.append("</g>")
    return out


def to_svg(result: SweepResult) -> str:
    vary = result.meta.get("spec", {}).get("vary") or {}
    vary_field = vary.get("field")
    body = []
    offset = 0
    for title, columns in _PANELS:
        panel = _panel(result, title, columns, offset, vary_field)
        if panel:
            body.extend(panel)
            offset += _H
    height = max(offset, _H)
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{height}" '
        f'viewBox="0 0 {_W} {height}" font-family="sans-serif">'
    )
    return "\n".join([head, '<rect width="100%" height="100%" fill="#fff"/>', *body, "</svg>"]) + "\n"


_WRITERS = {"csv": to_csv, "json": to_json, "svg": to_svg}


def format_from_path(path, default: str = "csv") -> str:
    suffix = Path(path).suffix.lower().lstrip(".")
    return suffix if suffix in FORMATS else default


def export(result: SweepResult, format: str, path) -> Path:
    """Write ``result`` to ``path`` in ``format`` (csv, json or svg)."""
    if format not in _WRITERS:
        raise ValidationError(f"format must be one of {FORMATS}, got {format!r}")
    for row in result.rows:
        for value in row.values():
            if isinstance(value, float) and not math.isfinite(value):
                raise ValidationError(f"non-finite value in row at T={row.T}")
    text = _WRITERS[format](result)
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path
