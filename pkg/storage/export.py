"""Report exports: canonical JSON, per-series CSV and DOT for small graphs.

JSON is canonical: sorted keys, floats rounded to 12 significant digits, exact rationals as
``{"num": ..., "den": ...}``. Two runs with the same config and seed write identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import is_dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

from groups.exceptions import BudgetExceededError, PreconditionError
from storage.logging_compat import get_logger

logger = get_logger(__name__)

DOT_VERTEX_LIMIT = 5000
SIGNIFICANT_DIGITS = 12

RETURN_HEADER = ("n", "p_n_num", "p_n_den", "p_n_float")
COGROWTH_HEADER = ("n", "a_n", "b_n")
STABILIZATION_HEADER = ("R", "value")


def canonicalize(value: Any) -> Any:
    """Convert report data into JSON-ready values with the canonical number forms."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, Enum):
        return canonicalize(value.value)
    if isinstance(value, dict):
        return {str(k): canonicalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonicalize(v) for v in value]
    if hasattr(value, "to_dict"):
        return canonicalize(value.to_dict())
    if hasattr(value, "item"):
        return canonicalize(value.item())
    if is_dataclass(value):
        raise PreconditionError(f"{type(value).__name__} has no to_dict()")
    return str(value)


def dumps_canonical(data: Any) -> str:
    return json.dumps(canonicalize(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def export_json(report) -> str:
    """The canonical JSON text of a report (or of any ``to_dict`` object)."""
    data = report.to_dict() if hasattr(report, "to_dict") else report
    return dumps_canonical(data)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else _csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(value: Any) -> Any:
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return value


def return_series_csv(series) -> str:
    """``n,p_n_num,p_n_den,p_n_float``; one row per ``n = 0..n_max``."""
    return _csv_text(RETURN_HEADER, series.to_rows())


def cogrowth_csv(series) -> str:
    """``n,a_n,b_n``; one row per ``n = 0..n_max``."""
    return _csv_text(COGROWTH_HEADER, series.to_rows())


def stabilization_csv(rows: Sequence[Sequence[Any]]) -> str:
    return _csv_text(STABILIZATION_HEADER, rows)


def _dot_id(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph, name: str = "G", limit: int = DOT_VERTEX_LIMIT) -> str:
    """DOT text of a ball: one node per vertex (labelled by its word), one edge per positive letter.

    The base is double-circled. Larger graphs are refused with their size.
    """
    n = graph.n_vertices
    if n > limit:
        raise PreconditionError(f"graph has {n} vertices; DOT export is limited to {limit}")
    alphabet = graph.alphabet
    lines = [f"digraph {_dot_id(name)} {{"]
    for v in graph.vertices():
        shape = "doublecircle" if v == graph.base else "circle"
        lines.append(f"  {v} [label={_dot_id(str(graph.words[v]))}, shape={shape}];")
    for u, x, v in graph.positive_edges():
        lines.append(f"  {u} -> {v} [label={_dot_id(alphabet.name(x))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_report(report, out_dir: str | Path, fmt: str = "json") -> List[Path]:
    """Write a :class:`~report.pipeline.DiagnosticsReport` in ``json``, ``csv`` or ``dot`` form."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = report.config.name
    files: Dict[str, str] = {}
    if fmt == "json":
        files[f"{stem}.json"] = export_json(report)
    elif fmt == "csv":
        files[f"{stem}_returns.csv"] = return_series_csv(report.returns)
        files[f"{stem}_cogrowth.csv"] = cogrowth_csv(report.cogrowth)
    elif fmt == "dot":
        files[f"{stem}_schreier.dot"] = export_dot(schreier_graph_for_dot(report.schreier), stem)
    else:
        raise PreconditionError(f"unknown export format {fmt!r}")
    return write_files(out, files)


def write_files(out_dir: Path, files: Dict[str, str]) -> List[Path]:
    written = []
    for filename, text in sorted(files.items()):
        path = out_dir / filename
        path.write_text(text, encoding="utf-8")
        written.append(path)
        logger.info(f"Wrote {path}")
    return written


def load_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def schreier_graph_for_dot(sb, limit: int = DOT_VERTEX_LIMIT):
    """Materialise a Schreier ball for DOT, refusing it as soon as it passes ``limit`` vertices."""
    if sb.materialized is not None:
        return sb.materialized
    try:
        return sb.graph_at(sb.radius, budget=limit)
    except BudgetExceededError:
        raise PreconditionError(
            f"Schreier ball of radius {sb.radius} has more than {limit} vertices; "
            "DOT export refused"
        ) from None
