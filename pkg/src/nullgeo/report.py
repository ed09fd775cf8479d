"""Check reports: named residual records with deterministic serialization.

JSON output carries full precision (17 significant digits) and is
byte-identical across runs; CSV rounds to 6 significant digits for
plotting.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class IdentityRecord:
    name: str
    formula: str           # the relation being checked, in plain math text
    max_residual: float
    worst_point: tuple[float, float] | None
    tolerance: float
    passed: bool
    evaluated: int
    skipped: int = 0
    note: str = ""


@dataclass
class CheckReport:
    label: str
    grid: tuple[int, int]
    records: list[IdentityRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    expected_fail: bool = False

    @property
    def overall_pass(self) -> bool:
        return all(r.passed for r in self.records)

    def extend(self, records: list[IdentityRecord]) -> None:
        self.records.extend(records)


def fmt_json_float(v: float) -> str:
    if v != v:
        return "NaN"
    if v == float("inf"):
        return "Infinity"
    if v == float("-inf"):
        return "-Infinity"
    return f"{v:.17g}"


def fmt_csv_float(v: float) -> str:
    """Six significant digits with a bare exponent, e.g. 1.000000e0; nan as-is."""
    if v != v:
        return "nan"
    if v == 0.0:
        v = 0.0  # collapse -0.0
    mantissa, exponent = f"{v:.6e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def _write_json(value, out: list[str]) -> None:
    if isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, float):
        out.append(fmt_json_float(value))
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, str):
        escaped = (value.replace("\\", "\\\\").replace('"', '\\"')
                   .replace("\n", "\\n").replace("\t", "\\t"))
        out.append(f'"{escaped}"')
    elif value is None:
        out.append("null")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(", ")
            _write_json(item, out)
        out.append("]")
    elif isinstance(value, dict):
        out.append("{")
        for i, (k, item) in enumerate(value.items()):
            if i:
                out.append(", ")
            _write_json(str(k), out)
            out.append(": ")
            _write_json(item, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(value)!r}")


def json_text(value) -> str:
    out: list[str] = []
    _write_json(value, out)
    return "".join(out)


def report_to_obj(report: CheckReport) -> dict:
    return {
        "surface": report.label,
        "grid": [int(report.grid[0]), int(report.grid[1])],
        "expected_fail": bool(report.expected_fail),
        "overall_pass": bool(report.overall_pass),
        "records": [
            {
                "name": r.name,
                "formula": r.formula,
                "max_residual": float(r.max_residual),
                "worst_point": (None if r.worst_point is None
                                else [float(r.worst_point[0]), float(r.worst_point[1])]),
                "tolerance": float(r.tolerance),
                "pass": bool(r.passed),
                "evaluated": int(r.evaluated),
                "skipped": int(r.skipped),
                "note": r.note,
            }
            for r in report.records
        ],
        "notes": list(report.notes),
    }


def report_to_json(report: CheckReport) -> str:
    return json_text(report_to_obj(report)) + "\n"
