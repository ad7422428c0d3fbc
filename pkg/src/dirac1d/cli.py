"""Command-line front end: spectra, wavefunctions, comparisons and 1/alpha scans.

Every subcommand writes one table, CSV by default or JSON with ``--json``.
CSV layout::

    # schema: dirac1d.<kind>/1
    # <key>: <value>            (parameters, units, notes)
    # columns: a,b,c
    1.00000000000e+00,even,...

Floats carry 12 significant digits, line endings are LF, and identical
arguments give byte-identical output.  Exit codes: 0 success, 2 usage error,
3 solver failure (whatever was computed is still written).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .dirac import (
    MAX_LEVELS,
    find_levels,
    nonrel_limit_report,
    wavefunction,
)
from .errors import Dirac1DError, DomainError, ScanExhaustedError
from .nonrel import ModelParams, Parity, nonrel_spectrum
from .shooting import MAX_ORACLE_LEVELS, oracle_spectrum

SCHEMA_VERSION = 1
KINDS = ("spectrum", "scan", "wavefunction", "compare")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3

DEFAULT_INV_ALPHA_MIN = 0.05
DEFAULT_INV_ALPHA_MAX = 2.0
DEFAULT_SCAN_POINTS = 50
DEFAULT_SCAN_LEVELS = 4


# --------------------------------------------------------------------------
# tables


def round12(x: float) -> float:
    """Round to the 12 significant digits used on disk."""
    return float(f"{x:.11e}")


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return repr(value)
        return f"{value:.11e}"
    return str(value)


def parse_cell(text: str):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _normalize(value):
    if isinstance(value, (float, np.floating)):
        return round12(float(value)) if math.isfinite(value) else float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


@dataclass
class Table:
    """A typed-by-content table with ordered metadata.

    Floats are stored already rounded to 12 significant digits so that
    ``parse_csv(render_csv(t)) == t`` holds exactly.
    """

    kind: str
    columns: list[str]
    meta: dict[str, str] = field(default_factory=dict)
    rows: list[list] = field(default_factory=list)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append([_normalize(v) for v in values])

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    @property
    def schema(self) -> str:
        return f"dirac1d.{self.kind}/{SCHEMA_VERSION}"


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {table.schema}\n")
    for key, value in table.meta.items():
        buf.write(f"# {key}: {value}\n")
    buf.write(f"# columns: {','.join(table.columns)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    for row in table.rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def parse_csv(text: str) -> Table:
    """Inverse of :func:`render_csv`; rejects unknown schema versions."""
    lines = text.split("\n")
    if not lines or not lines[0].startswith("# schema: "):
        raise ValueError("missing schema header")
    schema = lines[0][len("# schema: "):]
    prefix, _, version = schema.partition("/")
    kind = prefix.removeprefix("dirac1d.")
    if not prefix.startswith("dirac1d.") or kind not in KINDS:
        raise ValueError(f"unknown table kind {schema!r}")
    if version != str(SCHEMA_VERSION):
        raise ValueError(f"unsupported schema version {version!r} (expected {SCHEMA_VERSION})")
    meta: dict[str, str] = {}
    columns = None
    body_start = len(lines)
    for i, line in enumerate(lines[1:], start=1):
        if not line.startswith("#"):
            body_start = i
            break
        key, _, value = line[2:].partition(": ")
        if key == "columns":
            columns = value.split(",")
        else:
            meta[key] = value
    if columns is None:
        raise ValueError("missing columns header")
    table = Table(kind, columns, meta)
    body = "\n".join(lines[body_start:])
    for row in csv.reader(io.StringIO(body)):
        if not row:
            continue
        if len(row) != len(columns):
            raise ValueError(f"row has {len(row)} cells, expected {len(columns)}")
        table.rows.append([parse_cell(c) for c in row])
    return table


def render_json(table: Table) -> str:
    doc = {
        "schema": table.schema,
        "meta": table.meta,
        "columns": table.columns,
        "rows": table.rows,
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_json(text: str) -> Table:
    doc = json.loads(text)
    schema = doc.get("schema", "")
    prefix, _, version = schema.partition("/")
    kind = prefix.removeprefix("dirac1d.")
    if kind not in KINDS or version != str(SCHEMA_VERSION):
        raise ValueError(f"unsupported schema {schema!r}")
    return Table(kind, list(doc["columns"]), dict(doc["meta"]), [list(r) for r in doc["rows"]])


# --------------------------------------------------------------------------
# scan


@dataclass(frozen=True)
class ScanRow:
    inv_alpha: float
    parity: Parity
    level: int
    nu: float | None
    epsilon_rel: float | None
    epsilon_nonrel: float
    reason: str = ""


SCAN_COLUMNS = ["inv_alpha", "alpha", "parity", "level", "nu", "E", "epsilon_rel", "epsilon_nonrel", "reason"]


@dataclass
class ScanResult:
    """Rows of (1/alpha, parity, level) at g = 1, ordered by 1/alpha, parity, level."""

    inv_alpha_min: float
    inv_alpha_max: float
    points: int
    levels: int
    rows: list[ScanRow] = field(default_factory=list)

    def inv_alphas(self) -> list[float]:
        seen = []
        for r in self.rows:
            if not seen or seen[-1] != r.inv_alpha:
                seen.append(r.inv_alpha)
        return seen

    def series(self, parity: Parity, level: int) -> list[ScanRow]:
        return [r for r in self.rows if r.parity is parity and r.level == level]

    def to_table(self) -> Table:
        t = Table("scan", list(SCAN_COLUMNS))
        t.meta["parameters"] = (
            f"inv_alpha in [{format_cell(self.inv_alpha_min)}, {format_cell(self.inv_alpha_max)}], "
            f"points={self.points}, levels={self.levels}, g=1"
        )
        t.meta["units"] = "g=1 so m=alpha and E is in units of sqrt(g); epsilon=E/m-1 is dimensionless"
        t.meta["column inv_alpha"] = "1/alpha = sqrt(g)/m, uniform grid"
        t.meta["column level"] = "0-based index within the parity"
        t.meta["column epsilon_rel"] = "relativistic epsilon, empty if the solve failed (see reason)"
        t.meta["column epsilon_nonrel"] = "Schroedinger epsilon from the Airy zeros"
        for r in self.rows:
            alpha = 1.0 / r.inv_alpha
            E = None if r.epsilon_rel is None else (1.0 + r.epsilon_rel) * alpha
            t.add(r.inv_alpha, alpha, r.parity.value, r.level, r.nu, E, r.epsilon_rel, r.epsilon_nonrel, r.reason)
        return t

    @classmethod
    def from_table(cls, table: Table) -> "ScanResult":
        if table.kind != "scan" or table.columns != SCAN_COLUMNS:
            raise ValueError("not a scan table")
        rows = [
            ScanRow(r[0], Parity(r[2]), r[3], r[4], r[6], r[7], r[8] or "")
            for r in table.rows
        ]
        inv = sorted({r.inv_alpha for r in rows})
        levels = 1 + max((r.level for r in rows), default=-1)
        return cls(inv[0] if inv else math.nan, inv[-1] if inv else math.nan, len(inv), levels, rows)


def _clean_reason(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}".replace("\n", " ")


def scan_point(inv_alpha: float, levels: int) -> list[ScanRow]:
    """All rows for one 1/alpha value; solver failures become empty cells."""
    inv_alpha = round12(inv_alpha)
    params = ModelParams.from_alpha(1.0 / inv_alpha)
    nonrel = nonrel_spectrum(params, levels)
    rows = []
    for parity in Parity:
        refs = [lv for lv in nonrel if lv.parity is parity]
        found, reason = [], ""
        try:
            found = find_levels(params, parity, levels)
        except ScanExhaustedError as exc:
            found, reason = exc.found, _clean_reason(exc)
        except Dirac1DError as exc:
            reason = _clean_reason(exc)
        for k, ref in enumerate(refs):
            if k < len(found):
                lv = found[k]
                rows.append(ScanRow(inv_alpha, parity, k, round12(lv.nu), round12(lv.epsilon), round12(ref.epsilon)))
            else:
                rows.append(ScanRow(inv_alpha, parity, k, None, None, round12(ref.epsilon), reason or "not found"))
    return rows


def run_scan(
    inv_alpha_min: float = DEFAULT_INV_ALPHA_MIN,
    inv_alpha_max: float = DEFAULT_INV_ALPHA_MAX,
    points: int = DEFAULT_SCAN_POINTS,
    levels: int = DEFAULT_SCAN_LEVELS,
    jobs: int = 1,
) -> ScanResult:
    """Scan uniformly in 1/alpha; rows come out in 1/alpha order whatever ``jobs`` is."""
    if not 0 < inv_alpha_min < inv_alpha_max:
        raise DomainError("need 0 < 1/alpha_max < 1/alpha_min")
    if points < 2:
        raise DomainError("a scan needs at least 2 points")
    if not 1 <= levels <= MAX_LEVELS:
        raise DomainError(f"levels must be in [1, {MAX_LEVELS}]")
    grid = [round12(v) for v in np.linspace(inv_alpha_min, inv_alpha_max, points)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(scan_point, grid, [levels] * len(grid)))
    else:
        chunks = [scan_point(v, levels) for v in grid]
    result = ScanResult(grid[0], grid[-1], points, levels)
    for chunk in chunks:
        result.rows.extend(chunk)
    return result


# --------------------------------------------------------------------------
# commands


class UsageError(Exception):
    pass


def _params(args) -> ModelParams:
    have_mg = args.m is not None or args.g is not None
    if args.alpha is not None:
        if have_mg:
            raise UsageError("give either --alpha or --m/--g, not both")
        if not (math.isfinite(args.alpha) and args.alpha > 0):
            raise UsageError("alpha must be positive")
        return ModelParams.from_alpha(args.alpha)
    if args.m is None or args.g is None:
        raise UsageError("give --alpha, or both --m and --g")
    for name in ("m", "g"):
        value = getattr(args, name)
        if not (math.isfinite(value) and value > 0):
            raise UsageError(f"{name} must be positive")
    return ModelParams(args.m, args.g)


def _param_meta(params: ModelParams) -> str:
    return f"m={format_cell(params.m)}, g={format_cell(params.g)}, alpha={format_cell(params.alpha)}"


def _parities(choice: str) -> list[Parity]:
    return list(Parity) if choice == "both" else [Parity(choice)]


@dataclass
class Outcome:
    table: Table
    error: str | None = None


def cmd_spectrum(args) -> Outcome:
    params = _params(args)
    if not 1 <= args.count <= MAX_LEVELS:
        raise UsageError(f"--count must be in [1, {MAX_LEVELS}]")
    per_parity = MAX_ORACLE_LEVELS // 2
    if args.oracle and args.count > per_parity:
        raise UsageError(f"--oracle supports at most {per_parity} levels per parity")
    columns = ["index", "parity", "nu", "E", "epsilon", "residual"]
    if args.oracle:
        columns += ["E_oracle", "rel_dE"]
    t = Table("spectrum", columns)
    t.meta["parameters"] = _param_meta(params)
    t.meta["units"] = "E in the units of m; epsilon=E/m-1; residual is the scaled eigencondition at the root"
    levels, errors = [], []
    for parity in _parities(args.parity):
        try:
            levels += find_levels(params, parity, args.count)
        except ScanExhaustedError as exc:
            levels += exc.found
            errors.append(str(exc))
    levels.sort(key=lambda lv: lv.E)

    oracle = {}
    if args.oracle:
        t.meta["oracle"] = "independent shooting solution; rel_dE=|E-E_oracle|/E"
        try:
            found = oracle_spectrum(params, 2 * args.count)
        except ScanExhaustedError as exc:
            found = exc.found
            errors.append(f"oracle: {exc}")
        for parity in Parity:
            for k, lv in enumerate(o for o in found if o.parity is parity):
                oracle[(parity, k)] = lv.E

    for lv in levels:
        row = [lv.index, lv.parity.value, lv.nu, lv.E, lv.epsilon, lv.residual]
        if args.oracle:
            Eo = oracle.get((lv.parity, lv.index))
            row += [Eo, None if Eo is None else abs(lv.E - Eo) / lv.E]
        t.add(*row)
    return Outcome(t, "; ".join(errors) or None)


def cmd_scan(args) -> Outcome:
    if args.alpha_min is not None and not args.alpha_min > 0:
        raise UsageError("alpha must be positive")
    if args.alpha_max is not None and not args.alpha_max > 0:
        raise UsageError("alpha must be positive")
    inv_max = DEFAULT_INV_ALPHA_MAX if args.alpha_min is None else 1.0 / args.alpha_min
    inv_min = DEFAULT_INV_ALPHA_MIN if args.alpha_max is None else 1.0 / args.alpha_max
    if not inv_min < inv_max:
        raise UsageError("--alpha-min must be smaller than --alpha-max")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    result = run_scan(inv_min, inv_max, args.points, args.levels, args.jobs)
    t = result.to_table()
    failed = sum(r.epsilon_rel is None for r in result.rows)
    return Outcome(t, f"{failed} scan cells failed (see reason column)" if failed else None)


def cmd_wavefunction(args) -> Outcome:
    params = _params(args)
    if not 0 <= args.index < MAX_LEVELS:
        raise UsageError(f"--index must be in [0, {MAX_LEVELS - 1}]")
    if args.grid_points < 5 or args.grid_points % 2 == 0:
        raise UsageError("--grid-points must be odd and at least 5")
    parity = Parity(args.parity)
    tilde = args.representation == "tilde"
    t = Table("wavefunction", ["x", "u_tilde", "v_tilde"] if tilde else ["x", "u", "v"])
    t.meta["parameters"] = _param_meta(params)
    try:
        levels = find_levels(params, parity, args.index + 1)
    except ScanExhaustedError as exc:
        return Outcome(t, f"level {args.index} does not exist: {exc}")
    level = levels[args.index]
    wf = wavefunction(params, level, points=args.grid_points)
    t.meta["level"] = f"parity={parity.value}, index={level.index}"
    t.meta["nu"] = format_cell(level.nu)
    t.meta["E"] = format_cell(level.E)
    t.meta["epsilon"] = format_cell(level.epsilon)
    t.meta["residual"] = format_cell(level.residual)
    t.meta["norm"] = format_cell(wf.norm)
    t.meta["continuity_gap"] = format_cell(wf.continuity_gap)
    t.meta["representation"] = (
        "tilde: u_tilde=(u+v)/sqrt2, v_tilde=(v-u)/sqrt2, global phase dropped"
        if tilde
        else "standard: beta=sigma_x, alpha=sigma_y"
    )
    a, b = wf.tilde() if tilde else (wf.u, wf.v)
    for row in zip(wf.x, a, b):
        t.add(*row)
    return Outcome(t)


def cmd_compare(args) -> Outcome:
    params = _params(args)
    if not 1 <= args.levels <= MAX_LEVELS:
        raise UsageError(f"--levels must be in [1, {MAX_LEVELS}]")
    columns = ["index", "parity", "epsilon_rel", "epsilon_nonrel", "deviation"]
    if args.fit:
        columns.append("epsilon_times_alpha")
    t = Table("compare", columns)
    t.meta["parameters"] = _param_meta(params)
    t.meta["deviation"] = "(epsilon_rel - epsilon_nonrel)/epsilon_nonrel"
    if args.fit:
        t.meta["epsilon_times_alpha"] = "exploratory small-alpha column, no threshold attached"
    for r in nonrel_limit_report(params, args.levels):
        row = [r.index, r.parity.value, r.epsilon_rel, r.epsilon_nonrel, r.deviation]
        if args.fit:
            row.append(r.epsilon_rel * params.alpha)
        t.add(*row)
    return Outcome(t)


# --------------------------------------------------------------------------
# entry point


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, help="dimensionless m/sqrt(g); implies g=1")
    p.add_argument("--m", type=float, help="mass (use with --g)")
    p.add_argument("--g", type=float, help="coupling of the potential g|x| (use with --m)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    common.add_argument("--out", metavar="FILE", help="write to FILE instead of stdout")

    parser = argparse.ArgumentParser(
        prog="dirac1d",
        description="Bound states of the 1-D Dirac equation with scalar potential g|x|.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues from the Hermite condition")
    _add_params(p)
    p.add_argument("--parity", choices=["even", "odd", "both"], default="both")
    p.add_argument("--count", type=int, default=4, help="levels per parity (default 4)")
    p.add_argument("--oracle", action="store_true", help="add shooting cross-check columns")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("scan", parents=[common], help="epsilon against 1/alpha, both parities")
    p.add_argument("--alpha-min", type=float, help="smallest alpha (default 0.5)")
    p.add_argument("--alpha-max", type=float, help="largest alpha (default 20)")
    p.add_argument("--points", type=int, default=DEFAULT_SCAN_POINTS)
    p.add_argument("--levels", type=int, default=DEFAULT_SCAN_LEVELS, help="levels per parity")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("wavefunction", parents=[common], help="normalized spinor samples")
    _add_params(p)
    p.add_argument("--parity", choices=["even", "odd"], default="even")
    p.add_argument("--index", type=int, default=0, help="0-based level index within the parity")
    p.add_argument("--grid-points", type=int, default=4001)
    p.add_argument("--representation", choices=["standard", "tilde"], default="standard")
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("compare", parents=[common], help="relativistic vs Airy epsilon")
    _add_params(p)
    p.add_argument("--levels", type=int, default=4, help="levels per parity")
    p.add_argument("--fit", action="store_true", help="add the epsilon*alpha column")
    p.set_defaults(func=cmd_compare)
    return parser


def _emit(outcome: Outcome, args) -> None:
    text = render_json(outcome.table) if args.json else render_csv(outcome.table)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        outcome = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except DomainError as exc:
        print(f"dirac1d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Dirac1DError as exc:
        print(f"dirac1d: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _emit(outcome, args)
    if outcome.error:
        print(f"dirac1d: solver failure: {outcome.error}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
