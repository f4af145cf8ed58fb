"""Parameter-sweep driver and verification front end.

Subcommands
-----------
sweep
    Evaluate the closed-form measures along a uniform grid in h, r, or N and
    emit one record per grid point as CSV (default) or JSON.
derivatives
    Alias for ``sweep`` with finite-difference derivative columns appended:
    central differences along the sweep axis (one-sided at the endpoints),
    and re-evaluation at +/- one grid spacing for derivatives transverse to
    the axis (one-sided at the r = 0 boundary).
verify
    Run the exact-diagonalization cross-check at a single parameter point and
    print the comparison report.

Exit codes: 0 success, 1 usage or precondition error, 2 verification or
evaluation failure, 3 I/O failure.

Output is deterministic: fixed grids, fixed 12-significant-digit formatting,
and per-point evaluation that is pure, so thread count never changes a byte.
The CSV header is a contract::

    N,jx,jy,r,h,n1,x_odd,x_even,C12,C23,D12,D23,Eglob,MS

with derivative columns, when requested, appended in the order
``dC12_dh,dC23_dh,dD12_dh,dEglob_dh,dMS_dh,dMS_dr``.  The variant flags
append quarantined extra columns suffixed ``_paper_variant`` (an unvalidated
large-N concurrence approximation and an elliptic-integral zero-field form);
they are reported verbatim and never cross-checked.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .correlators import rho_pair
from .ed import DEGENERACY_FLOOR, compare, ground_state, oracle_correlators, oracle_measures
from .measures import concurrence_large_n_approx, elliptic_concurrence_h0, measure_point, multispecies_density
from .modes import ModelParams

__all__ = ["SweepSpec", "main", "run_sweep", "render", "HEADER", "DERIV_HEADER"]

HEADER = ["N", "jx", "jy", "r", "h", "n1", "x_odd", "x_even",
          "C12", "C23", "D12", "D23", "Eglob", "MS"]
DERIV_HEADER = ["dC12_dh", "dC23_dh", "dD12_dh", "dEglob_dh", "dMS_dh", "dMS_dr"]
VARIANT_EQ23_COLUMNS = ["C12_approx_paper_variant", "C23_approx_paper_variant"]
VARIANT_ELLIPTIC_COLUMNS = ["C12_elliptic_paper_variant", "C23_elliptic_paper_variant"]
MEASURE_CHOICES = ("correlators", "concurrence", "discord", "global",
                   "multispecies", "derivatives")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EVAL = 2
EXIT_IO = 3

_H_DERIV_FIELDS = (("dC12_dh", "c_odd"), ("dC23_dh", "c_even"),
                   ("dD12_dh", "d_odd"), ("dEglob_dh", "e_global"),
                   ("dMS_dh", "ms_density"))


@dataclass(frozen=True)
class SweepSpec:
    """Fully resolved sweep request."""

    axis: str                 # 'h' | 'r' | 'N'
    start: float
    stop: float
    steps: int
    fixed: ModelParams
    measures: tuple = MEASURE_CHOICES[:-1]
    paper_eq23: bool = False
    elliptic_h0: bool = False
    want_derivs: bool = False
    fmt: str = "csv"
    out: str | None = None
    threads: int = 1

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.steps - 1)

    def grid(self) -> list:
        values = np.linspace(self.start, self.stop, self.steps)
        if self.axis == "N":
            # snap to the nearest multiple of 4 (the analytic route's grain);
            # duplicates are kept so the output matches the requested grid
            return [max(4, int(round(v / 4.0)) * 4) for v in values]
        return [float(v) for v in values]

    def header(self) -> list:
        cols = list(HEADER)
        if self.want_derivs:
            cols += DERIV_HEADER
        if self.paper_eq23:
            cols += VARIANT_EQ23_COLUMNS
        if self.elliptic_h0:
            cols += VARIANT_ELLIPTIC_COLUMNS
        return cols


class _PointError(Exception):
    def __init__(self, params: ModelParams, cause: Exception):
        super().__init__(f"evaluation failed at N={params.n_sites} jx={params.jx:g} "
                         f"jy={params.jy:g} h={params.h:g}: {cause}")
        self.params = params


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; the contract says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _num(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if value == 0.0:
        value = 0.0  # fold -0.0
    return "%.12g" % value


def _cell(value, fmt: str) -> str:
    if value is None:
        return "" if fmt == "csv" else "null"
    return _num(value)


def _parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"expected --range a:b, got {text!r}")
    return float(parts[0]), float(parts[1])


def _add_model_flags(sub):
    sub.add_argument("--n", type=int, default=100, help="chain length (default 100)")
    sub.add_argument("--jx", type=float, default=1.0, help="odd-bond coupling (default 1)")
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--r", type=float, default=None, help="coupling ratio jy/jx (default 1)")
    group.add_argument("--jy", type=float, default=None, help="even-bond coupling")
    sub.add_argument("--h", type=float, default=0.0, help="transverse field (default 0)")


def _add_sweep_flags(sub):
    _add_model_flags(sub)
    sub.add_argument("--axis", choices=("h", "r", "N"), required=True)
    sub.add_argument("--range", dest="range_", metavar="A:B", required=True)
    sub.add_argument("--steps", type=int, default=401)
    sub.add_argument("--measures", default=None,
                     help="comma list from " + ",".join(MEASURE_CHOICES))
    sub.add_argument("--variant-eq23", action="store_true",
                     help="append the unvalidated large-N concurrence approximation")
    sub.add_argument("--variant-elliptic", action="store_true",
                     help="append the unvalidated zero-field elliptic-integral form")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--threads", type=int, default=1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="kitchain",
                     description="ground-state correlation and entanglement sweeps "
                                 "for the alternating-bond chain")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, brief in (("sweep", "grid sweep of the closed-form measures"),
                        ("derivatives", "sweep plus finite-difference derivative columns")):
        _add_sweep_flags(sub.add_parser(name, help=brief))
    verify = sub.add_parser("verify", help="exact-diagonalization cross-check at one point")
    _add_model_flags(verify)
    verify.add_argument("--tol", type=float, default=1e-6)
    return parser


def _fixed_params(args, parser: _Parser) -> ModelParams:
    jx = args.jx
    if args.jy is not None:
        jy = args.jy
    else:
        jy = (args.r if args.r is not None else 1.0) * jx
    try:
        return ModelParams(jx=jx, jy=jy, h=args.h, n_sites=args.n)
    except ValueError as exc:
        parser.error(str(exc))


def _spec_from_args(args, parser: _Parser) -> SweepSpec:
    fixed = _fixed_params(args, parser)
    try:
        start, stop = _parse_range(args.range_)
    except ValueError as exc:
        parser.error(str(exc))
    if not start < stop:
        parser.error(f"--range needs start < stop, got {args.range_!r}")
    if args.steps < 2:
        parser.error("--steps must be at least 2")
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    if args.axis == "r" and start < 0:
        parser.error("ratio axis starts at r >= 0")
    if args.axis == "N":
        if not (float(start).is_integer() and float(stop).is_integer()):
            parser.error("N axis endpoints must be integers")
        if start < 4:
            parser.error("N axis starts at 4 or above")
    else:
        if fixed.n_sites % 4 != 0:
            parser.error(f"--n must be a multiple of 4, got {fixed.n_sites}")
    measures = tuple(MEASURE_CHOICES[:-1])
    want_derivs = args.command == "derivatives"
    if args.measures is not None:
        requested = tuple(m.strip() for m in args.measures.split(",") if m.strip())
        for m in requested:
            if m not in MEASURE_CHOICES:
                parser.error(f"unknown measure {m!r}; choose from {','.join(MEASURE_CHOICES)}")
        if "derivatives" in requested:
            want_derivs = True
        measures = requested or measures
    if want_derivs and args.axis == "N":
        parser.error("derivative columns are d/dh and d/dr; use --axis h or --axis r")
    return SweepSpec(axis=args.axis, start=float(start), stop=float(stop),
                     steps=args.steps, fixed=fixed, measures=measures,
                     paper_eq23=args.variant_eq23, elliptic_h0=args.variant_elliptic,
                     want_derivs=want_derivs, fmt=args.format, out=args.out,
                     threads=args.threads)


def _point_params(spec: SweepSpec, value) -> ModelParams:
    if spec.axis == "h":
        return replace(spec.fixed, h=float(value))
    if spec.axis == "r":
        return replace(spec.fixed, jy=float(value) * spec.fixed.jx)
    return replace(spec.fixed, n_sites=int(value))


def _eval_point(params: ModelParams, spec: SweepSpec) -> dict:
    record = measure_point(params)
    row = {
        "N": params.n_sites, "jx": params.jx, "jy": params.jy,
        "r": params.r, "h": params.h,
        "n1": record.n1, "x_odd": record.x_odd.real, "x_even": record.x_even.real,
        "C12": record.c_odd, "C23": record.c_even,
        "D12": record.d_odd, "D23": record.d_even,
        "Eglob": record.e_global, "MS": record.ms_density,
    }
    if spec.paper_eq23:
        row["C12_approx_paper_variant"] = concurrence_large_n_approx(rho_pair(params, "odd")).value
        row["C23_approx_paper_variant"] = concurrence_large_n_approx(rho_pair(params, "even")).value
    if spec.elliptic_h0:
        try:
            pair = elliptic_concurrence_h0(params.r)
            row["C12_elliptic_paper_variant"] = pair.c_odd
            row["C23_elliptic_paper_variant"] = pair.c_even
        except ValueError:
            # the zero-field closed form diverges at r = 1; leave the cell empty
            row["C12_elliptic_paper_variant"] = None
            row["C23_elliptic_paper_variant"] = None
    return row


def _transverse_derivatives(params: ModelParams, spec: SweepSpec, row: dict) -> None:
    """Derivative columns for variables transverse to the sweep axis.

    Step equals the sweep grid spacing; the r derivative falls back to a
    forward difference when r - step would cross the r >= 0 boundary.
    """
    delta = spec.step
    if spec.axis == "h":
        r = params.r
        ms_plus = multispecies_density(replace(params, jy=(r + delta) * params.jx))
        if r - delta < 0.0:
            row["dMS_dr"] = (ms_plus - row["MS"]) / delta
        else:
            ms_minus = multispecies_density(replace(params, jy=(r - delta) * params.jx))
            row["dMS_dr"] = (ms_plus - ms_minus) / (2.0 * delta)
    else:  # axis == 'r'
        rec_plus = measure_point(replace(params, h=params.h + delta))
        rec_minus = measure_point(replace(params, h=params.h - delta))
        for name, attr in _H_DERIV_FIELDS:
            row[name] = (getattr(rec_plus, attr) - getattr(rec_minus, attr)) / (2.0 * delta)


def _axis_derivatives(spec: SweepSpec, rows: list) -> None:
    """Central differences of the already-computed columns along the axis."""
    if spec.axis == "h":
        mapping = [("dC12_dh", "C12"), ("dC23_dh", "C23"), ("dD12_dh", "D12"),
                   ("dEglob_dh", "Eglob"), ("dMS_dh", "MS")]
    else:
        mapping = [("dMS_dr", "MS")]
    for name, column in mapping:
        values = np.array([row[column] for row in rows])
        grads = np.gradient(values, spec.step)
        for row, grad in zip(rows, grads):
            row[name] = float(grad)


def run_sweep(spec: SweepSpec) -> list:
    """One output row per grid point, in grid order."""

    def worker(value):
        params = _point_params(spec, value)
        try:
            row = _eval_point(params, spec)
            if spec.want_derivs:
                _transverse_derivatives(params, spec, row)
        except (ValueError, ArithmeticError, RuntimeError) as exc:
            raise _PointError(params, exc) from exc
        return row

    grid = spec.grid()
    if spec.threads > 1:
        with ThreadPoolExecutor(max_workers=spec.threads) as pool:
            rows = list(pool.map(worker, grid))
    else:
        rows = [worker(value) for value in grid]
    if spec.want_derivs:
        _axis_derivatives(spec, rows)
    return rows


def render(rows: list, header: list, fmt: str) -> str:
    """Serialize rows deterministically (12 significant digits)."""
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_cell(row[k], fmt) for k in header) for row in rows]
        return "\n".join(lines) + "\n"
    items = []
    for row in rows:
        parts = [f'"{k}": {_cell(row[k], fmt)}' for k in header]
        items.append("{" + ", ".join(parts) + "}")
    return "[\n  " + ",\n  ".join(items) + "\n]\n" if items else "[]\n"


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _run_sweep_command(args, parser: _Parser) -> int:
    spec = _spec_from_args(args, parser)
    rows = run_sweep(spec)
    text = render(rows, spec.header(), spec.fmt)
    try:
        _write_output(text, spec.out)
    except OSError as exc:
        print(f"kitchain: cannot write {spec.out!r}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _print_oracle_only(params: ModelParams) -> None:
    state = ground_state(params)
    corr = oracle_correlators(state)
    meas = oracle_measures(state)
    print(f"oracle-only report at N={params.n_sites} jx={params.jx:g} "
          f"jy={params.jy:g} h={params.h:g}")
    print(f"  energy={state.energy:.12g}  sector={state.parity}  "
          + ", ".join(f"{k}={v:.12g}" for k, v in sorted(state.sector_energies.items())))
    for key in ("n1", "u_odd", "v_odd", "w1_odd", "w2_odd", "x_odd",
                "u_even", "v_even", "w1_even", "w2_even", "x_even"):
        value = corr[key]
        value = value.real if isinstance(value, complex) else value
        print(f"  {key:<8} {value:.12g}")
    for key in sorted(meas):
        print(f"  {key:<8} {meas[key]:.12g}")


def _run_verify_command(args, parser: _Parser) -> int:
    params = _fixed_params(args, parser)
    if abs(params.h) < DEGENERACY_FLOOR:
        print(f"kitchain: the h = 0 ground manifold is 2^(N/2-1)-fold degenerate; "
              f"verify needs |h| >= {DEGENERACY_FLOOR:g}", file=sys.stderr)
        return EXIT_USAGE
    if params.n_sites % 4 != 0:
        print(f"kitchain: warning: N={params.n_sites} is not a multiple of 4, so the "
              f"analytic route does not apply; printing oracle-only quantities",
              file=sys.stderr)
        _print_oracle_only(params)
        return EXIT_OK
    report = compare(params, tol=args.tol)
    print(report.format())
    return EXIT_OK if (report.passed and report.energy_ok) else EXIT_EVAL


def _normalize_argv(argv) -> list:
    """Fold ``--range A:B`` into ``--range=A:B`` so negative starts parse."""
    out = []
    tokens = iter(argv)
    for token in tokens:
        if token == "--range":
            value = next(tokens, None)
            out.append(token if value is None else f"--range={value}")
        else:
            out.append(token)
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_normalize_argv(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return _run_verify_command(args, parser)
        return _run_sweep_command(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except _PointError as exc:
        print(f"kitchain: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except ValueError as exc:
        print(f"kitchain: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"kitchain: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except OSError as exc:
        print(f"kitchain: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
