"""Batch front end: list the catalog, run check suites, scan fields to CSV.

Exit codes: 0 all checks passed (expected-fail fixtures pass when they
fail as declared), 1 an identity failed, 2 usage or load error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import catalog
from .checks import check_surface, map_points
from .curvature import analyze_point
from .errors import (DegenerateMetricError, DomainRangeError, NullGeoError,
                     UnsupportedPointError, UsageError)
from .report import fmt_csv_float, report_to_json
from .surface import SurfaceDef, load_surface

SCAN_FIELDS = ("E", "F", "G", "K", "a", "KN", "Hnorm2", "Delta")


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        nx, ny = text.lower().split("x")
        nx, ny = int(nx), int(ny)
    except ValueError:
        raise UsageError(f"grid must look like 11x11, got {text!r}") from None
    if nx < 2 or ny < 2:
        raise UsageError("grid needs at least 2 points per axis")
    return nx, ny


def _load(surface: str) -> tuple[SurfaceDef, catalog.CatalogEntry | None]:
    entries = catalog.built_in()
    if surface in entries:
        entry = entries[surface]
        return entry.surface, entry
    if surface.endswith(".json"):
        return load_surface(surface), None
    raise UsageError(f"unknown surface {surface!r} "
                     f"(catalog ids: {', '.join(entries)})")


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_catalog_list() -> int:
    for entry_id, entry in catalog.built_in().items():
        mark = "  [expected-fail]" if entry.expected_fail else ""
        print(f"{entry_id:32s} {entry.family}{mark}")
    return 0


def cmd_check(args) -> int:
    surf, entry = _load(args.surface)
    nx, ny = _parse_grid(args.grid)
    report = check_surface(surf, nx, ny, tol=args.tol, tol2=args.tol2,
                           h=args.h, richardson=not args.no_richardson,
                           entry=entry)
    _write_out(report_to_json(report), args.out)
    if args.out is not None:
        status = "pass" if report.overall_pass else "FAIL"
        print(f"{surf.label}: {status} "
              f"({sum(r.passed for r in report.records)}/{len(report.records)} "
              f"records) -> {args.out}")
    return 0 if report.overall_pass else 1


def _scan_row(surf: SurfaceDef, fields: list[str], point) -> str:
    values: dict[str, float] = {name: float("nan") for name in fields}
    note = ""
    try:
        pt = analyze_point(surf, *point)
        values["E"], values["F"], values["G"] = pt.ff.E, pt.ff.F, pt.ff.G
        values["K"] = pt.K
        values["Hnorm2"] = float(np.dot(pt.H, pt.H) - 2.0 * pt.H[0] * pt.H[0])
        if pt.curv is not None:
            values["a"] = pt.curv.a
            values["KN"] = pt.curv.KN
            if "Delta" in fields:
                if pt.curv.nu is None:
                    note = "ruled point: Gauss-map invariant undefined"
                else:
                    from .gaussmap import delta_and_Delta_at
                    values["Delta"] = delta_and_Delta_at(pt).big_delta
        else:
            if any(f in fields for f in ("a", "KN", "Delta")):
                note = "no null tangent direction at this point"
    except (DomainRangeError, DegenerateMetricError, UnsupportedPointError) as exc:
        note = str(exc)
    cells = [fmt_csv_float(point[0]), fmt_csv_float(point[1])]
    cells += [fmt_csv_float(values[name]) for name in fields]
    cells.append(note)
    return ",".join(cells)


def cmd_scan(args) -> int:
    surf, _ = _load(args.surface)
    fields = [f for f in args.fields.split(",") if f]
    if not fields:
        raise UsageError("scan needs at least one field")
    for name in fields:
        if name not in SCAN_FIELDS:
            raise UsageError(f"unknown field {name!r} "
                             f"(choose from {', '.join(SCAN_FIELDS)})")
    nx, ny = _parse_grid(args.grid)
    points = surf.domain.grid(nx, ny)
    rows = map_points(lambda p: _scan_row(surf, fields, p), points)
    header = ",".join(["x", "y"] + fields + ["note"])
    _write_out("\n".join([header] + rows) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nullgeo",
        description="Curvature checks for timelike surfaces whose tangent "
                    "projection of a constant direction is lightlike.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cat = sub.add_parser("catalog", help="catalog operations")
    cat_sub = p_cat.add_subparsers(dest="action", required=True)
    cat_sub.add_parser("list", help="list built-in surfaces")

    def common(p):
        p.add_argument("--surface", required=True,
                       help="catalog id or path to a surface .json file")
        p.add_argument("--grid", default="11x11", help="grid as NxM (default 11x11)")
        p.add_argument("--tol", type=float, default=1e-6,
                       help="tolerance for first-difference identities")
        p.add_argument("--tol2", type=float, default=1e-4,
                       help="tolerance for second-difference identities")
        p.add_argument("--h", type=float, default=1e-4,
                       help="finite-difference step")
        p.add_argument("--no-richardson", action="store_true",
                       help="disable Richardson extrapolation")
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p_check = sub.add_parser("check", help="run every applicable identity suite")
    common(p_check)

    p_scan = sub.add_parser("scan", help="sample fields over a grid to CSV")
    common(p_scan)
    p_scan.add_argument("--fields", required=True,
                        help=f"comma list from {','.join(SCAN_FIELDS)}")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "catalog":
            return cmd_catalog_list()
        if args.command == "check":
            return cmd_check(args)
        return cmd_scan(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NullGeoError as exc:
        print(f"check aborted: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
