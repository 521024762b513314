"""Command-line interface and pipeline orchestration.

Subcommands:
  verify     build everything and report every identity residual (JSON)
  spectrum   emit interior spectra of H and all partners (CSV or JSON)
  decompose  emit the subsystem operator data (JSON)
  scan       run verify over a grid of affine (a, b) points (JSON)

Exit codes: 0 all checks passed; 1 at least one identity failed its
tolerance; 2 the construction itself failed (invalid representation depth,
broken factorization, degenerate projector — serialized into the report);
3 malformed configuration or command line.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path
from typing import List, Optional, Tuple

from .errors import (
    ConfigError,
    FactorizationBroken,
    FracsusyError,
    ProjectorDegenerate,
    RepresentationInvalid,
)
from .graded_rep import (
    StructureFunctionSet,
    build_ladder_profile,
    build_rep,
    verify_algebra_relations,
)
from .fsusy_core import (
    build_subsystem,
    build_system,
    verify_fractional_relations,
    verify_subsystem,
    verify_superposition,
)
from .report import DEFAULT_TOL, RunConfig, VerificationReport, error_dict
from .spectra import classify, closure_check, isospectral_check, spectrum

_CONSTRUCTION_ERRORS = (RepresentationInvalid, FactorizationBroken, ProjectorDegenerate)


class _Parser(argparse.ArgumentParser):
    # exit 2 is reserved for construction errors; argparse's own failures
    # are config errors
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(3)


def _add_common(p: argparse.ArgumentParser, family: bool = True) -> None:
    p.add_argument("--k", type=int, required=True, help="grading order, k >= 2")
    p.add_argument(
        "--D", type=int, required=True, help="truncation dimension, D >= k + 2"
    )
    p.add_argument(
        "--tol",
        type=float,
        default=DEFAULT_TOL,
        help="identity tolerance (default 1e-10)",
    )
    p.add_argument("--out", type=str, default=None, help="write output to this path")
    if family:
        p.add_argument(
            "--affine",
            nargs=2,
            type=float,
            metavar=("A", "B"),
            help="affine family f_s(n) = a*n + b",
        )
        p.add_argument(
            "--cyclic",
            type=str,
            metavar="C0,C1,...",
            help="one constant per grade, comma-separated, k values",
        )
        p.add_argument(
            "--table",
            type=str,
            metavar="PATH",
            help="CSV file with header s,n,value",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracsusy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="verify every identity")
    _add_common(p_verify)

    p_spec = sub.add_parser("spectrum", help="emit partner spectra")
    _add_common(p_spec)
    p_spec.add_argument(
        "--format",
        dest="fmt",
        choices=("csv", "json"),
        default="csv",
        help="output format (default csv)",
    )

    p_dec = sub.add_parser("decompose", help="emit subsystem operator data")
    _add_common(p_dec)

    p_scan = sub.add_parser("scan", help="verify a grid of affine families")
    _add_common(p_scan, family=False)
    p_scan.add_argument(
        "--grid",
        type=str,
        default="",
        metavar='"A,B A,B ..."',
        help="affine (a,b) pairs separated by spaces or semicolons",
    )
    return parser


def _read_table(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"table file not found: {path}")
    values = {}
    with p.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip().lower() for c in rows[0]] != ["s", "n", "value"]:
        raise ConfigError(f"table file {path} must start with header s,n,value")
    for i, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            s, n, v = int(row[0]), int(row[1]), float(row[2])
        except (ValueError, IndexError):
            raise ConfigError(
                f"table file {path} line {i}: expected 's,n,value', got {row!r}"
            ) from None
        values[(s, n)] = v
    return values


def _family_from_args(args: argparse.Namespace) -> Tuple[StructureFunctionSet, str, dict]:
    given = [
        name
        for name, val in (
            ("affine", args.affine),
            ("cyclic", args.cyclic),
            ("table", args.table),
        )
        if val is not None
    ]
    if len(given) != 1:
        raise ConfigError(
            "exactly one of --affine / --cyclic / --table is required, "
            f"got {given or 'none'}"
        )
    kind = given[0]
    if kind == "affine":
        a, b = args.affine
        return StructureFunctionSet.affine(args.k, a, b), kind, {"a": a, "b": b}
    if kind == "cyclic":
        try:
            consts = [float(c) for c in args.cyclic.split(",")]
        except ValueError:
            raise ConfigError(
                f"--cyclic expects comma-separated reals, got {args.cyclic!r}"
            ) from None
        return (
            StructureFunctionSet.cyclic(args.k, consts),
            kind,
            {"constants": consts},
        )
    values = _read_table(args.table)
    f = StructureFunctionSet.from_table(args.k, values)
    missing = f.missing_levels(args.D)
    if missing:
        shown = ", ".join(f"(s={s}, n={n})" for s, n in missing[:5])
        raise ConfigError(
            f"table file {args.table} lacks {len(missing)} required cells "
            f"for D={args.D} (needs every grade at levels "
            f"{f.required_levels(args.D).start}.."
            f"{f.required_levels(args.D).stop - 1}); first missing: {shown}"
        )
    return f, kind, {"path": args.table}


def _parse_grid(text: str) -> List[Tuple[float, float]]:
    pairs = []
    for token in text.replace(";", " ").split():
        parts = token.split(",")
        if len(parts) != 2:
            raise ConfigError(f"grid point {token!r} is not of the form a,b")
        try:
            pairs.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ConfigError(f"grid point {token!r} is not a real pair") from None
    return pairs


def run_verification(cfg: RunConfig, f: StructureFunctionSet) -> VerificationReport:
    """The full pipeline: representation, system, subsystems, all records."""
    t0 = time.perf_counter()
    report = VerificationReport(config=cfg.to_dict())
    cls = classify(f)
    report.classification = cls.to_dict()
    try:
        rep = build_rep(f, cfg.D)
        system = build_system(rep, f)
        subsystems = [build_subsystem(system, s) for s in range(2, cfg.k + 1)]

        report.records += verify_algebra_relations(rep, f, cfg.tol)
        report.records += verify_fractional_relations(system, cfg.tol)
        for sub in subsystems:
            report.records += verify_subsystem(system, sub, cfg.tol)
        report.records += verify_superposition(system, subsystems, cfg.tol)

        table = spectrum(system)
        report.spectra = table.to_dict()
        pair_records, pair_detail = isospectral_check(table, system, cfg.tol)
        report.records += pair_records
        report.pairing = pair_detail

        if cls.a is not None and cls.b is not None:
            closure_records, closure_detail = closure_check(rep, cls, cfg.tol)
            report.records += closure_records
            if closure_detail["termination_depth"] is not None:
                report.classification["termination_depth"] = closure_detail[
                    "termination_depth"
                ]
    except _CONSTRUCTION_ERRORS as exc:
        report.error = error_dict(exc)
    report.wall_time_seconds = time.perf_counter() - t0
    return report


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
        print(f"wrote {out}", file=sys.stderr)
    else:
        print(text)


def _cmd_verify(cfg: RunConfig, f: StructureFunctionSet) -> int:
    report = run_verification(cfg, f)
    _emit(report.to_json(), cfg.out)
    if report.error is not None:
        print(f"verify: ERROR {report.error['type']}: {report.error['message']}",
              file=sys.stderr)
    else:
        failed = report.failed_records()
        if failed:
            names = ", ".join(r.name for r in failed[:8])
            print(
                f"verify: FAIL ({len(failed)}/{len(report.records)} records: {names})",
                file=sys.stderr,
            )
        else:
            print(f"verify: PASS ({len(report.records)} records)", file=sys.stderr)
    return report.exit_code()


def _cmd_spectrum(cfg: RunConfig, f: StructureFunctionSet) -> int:
    try:
        rep = build_rep(f, cfg.D)
        system = build_system(rep, f)
    except _CONSTRUCTION_ERRORS as exc:
        report = VerificationReport(config=cfg.to_dict(), error=error_dict(exc))
        _emit(report.to_json(), cfg.out)
        print(f"spectrum: ERROR {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    table = spectrum(system)
    pair_records, pair_detail = isospectral_check(table, system, cfg.tol)
    if cfg.fmt == "json":
        body = json.dumps(
            {
                "config": cfg.to_dict(),
                "spectra": table.to_dict(),
                "pairing": pair_detail,
            },
            indent=2,
        )
    else:
        body = table.to_csv()
    _emit(body, cfg.out)
    print(
        "pairing: {matched} matched, {exempt} exempt, {failed} failed".format(
            matched=pair_detail["matched"],
            exempt=len(pair_detail["exempt"]),
            failed=len(pair_detail["failed"]),
        ),
        file=sys.stderr,
    )
    return 0 if all(r.passed for r in pair_records) else 1


def _cmd_decompose(cfg: RunConfig, f: StructureFunctionSet) -> int:
    try:
        rep = build_rep(f, cfg.D)
        system = build_system(rep, f)
        subsystems = [build_subsystem(system, s) for s in range(2, cfg.k + 1)]
    except _CONSTRUCTION_ERRORS as exc:
        report = VerificationReport(config=cfg.to_dict(), error=error_dict(exc))
        _emit(report.to_json(), cfg.out)
        print(f"decompose: ERROR {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    body = {
        "config": cfg.to_dict(),
        "classification": classify(f).to_dict(),
        "partners": {
            str(s): list(map(float, system.partners[s])) for s in range(1, cfg.k + 1)
        },
        "subsystems": [
            {
                "s": sub.s,
                "partner_pair": list(sub.partner_pair),
                "ladder_amplitudes": [
                    float(v) for v in sub.lowering.diagonal(offset=1)
                ],
                "h_diagonal": [float(v) for v in sub.h.diagonal()],
            }
            for sub in subsystems
        ],
    }
    _emit(json.dumps(body, indent=2), cfg.out)
    return 0


def _cmd_scan(cfg: RunConfig, grid: List[Tuple[float, float]]) -> int:
    points = []
    any_identity_failure = False
    any_error = False
    for a, b in grid:
        f = StructureFunctionSet.affine(cfg.k, a, b)
        point = {"a": a, "b": b, "requested_D": cfg.D, "D": cfg.D, "note": None}
        D_used = cfg.D
        try:
            build_ladder_profile(f, cfg.D)
        except RepresentationInvalid as exc:
            # the representation is finite; run it at its deepest valid size
            if exc.level >= cfg.k + 2:
                D_used = exc.level
                point["D"] = D_used
                point["note"] = (
                    f"truncation clamped from {cfg.D} to termination depth {exc.level}"
                )
            else:
                point["error"] = error_dict(
                    ConfigError(
                        f"termination depth {exc.level} leaves no interior "
                        f"(needs at least k + 2 = {cfg.k + 2})"
                    )
                )
                any_error = True
                points.append(point)
                continue
        point_cfg = RunConfig(
            k=cfg.k,
            D=D_used,
            family_kind="affine",
            family_params={"a": a, "b": b},
            tol=cfg.tol,
        )
        report = run_verification(point_cfg, f)
        if point["note"]:
            report.notes.append(point["note"])
        point["tag"] = report.classification["tag"] if report.classification else None
        point["overall_passed"] = report.overall_passed
        point["report"] = report.to_dict()
        if report.error is not None:
            any_error = True
        elif not report.overall_passed:
            any_identity_failure = True
        points.append(point)

    body = {
        "config": cfg.to_dict(),
        "grid": [[a, b] for a, b in grid],
        "points": points,
    }
    _emit(json.dumps(body, indent=2), cfg.out)
    n_pass = sum(1 for p in points if p.get("overall_passed"))
    print(f"scan: {n_pass}/{len(points)} points passed", file=sys.stderr)
    if any_identity_failure:
        return 1
    if any_error:
        return 2
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "scan":
            grid = _parse_grid(args.grid)
            cfg = RunConfig(
                k=args.k,
                D=args.D,
                family_kind="affine",
                family_params={"grid": [[a, b] for a, b in grid]},
                tol=args.tol,
                out=args.out,
            ).validate()
            return _cmd_scan(cfg, grid)

        f, kind, params = _family_from_args(args)
        cfg = RunConfig(
            k=args.k,
            D=args.D,
            family_kind=kind,
            family_params=params,
            tol=args.tol,
            out=args.out,
            fmt=getattr(args, "fmt", "json"),
        ).validate()
    except ConfigError as exc:
        print(f"fracsusy: config error: {exc}", file=sys.stderr)
        return 3

    if args.command == "verify":
        return _cmd_verify(cfg, f)
    if args.command == "spectrum":
        return _cmd_spectrum(cfg, f)
    if args.command == "decompose":
        return _cmd_decompose(cfg, f)
    raise AssertionError(f"unhandled command {args.command!r}")
