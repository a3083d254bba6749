"""Command-line surface for the library.

Four subcommands cover the batch workflows:

``table1``
    Relative errors of the kinetic-energy approximations (local-density,
    gradient-corrected, shell-corrected) against the Hartree-Fock
    reference for bundled or user-supplied atoms.
``model``
    Exact energies and the shell correction for one filled-shell ladder
    or nuclear charge, with the large-Z series for comparison.
``figures``
    CSV emitters: scaled shell densities against the limiting profile
    (fig1.csv) and relative functional errors along the filled-shell
    ladder (fig1a.csv, fig2a.csv).
``asymptotics``
    Extrapolated large-Z coefficients of the ladder energies rendered
    against their regression targets.

Exit codes: 0 on success, 2 for data or configuration problems, 3 when a
numerical routine fails to converge.  Percentages in table and csv output
carry two significant figures; json-lines output keeps full precision.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .asymptotics import (
    ExtrapolationError,
    figure_density_rows,
    figure_error_rows,
    model_energy_sequence,
    model_expansion,
    richardson_extrapolate,
)
from .atomic_data import STOAtomRecord, STODataError, atom_density, load_bundled, parse_sto_file
from .correction import INTERPOLATION_MAX_Z, delta_t_exact, delta_t_interpolated
from .hydrogenic import (
    MAGIC_NUMBERS,
    MAX_SHELLS,
    ShellConfiguration,
    electron_count,
    model_kinetic_energy,
    model_kinetic_energy_continuous,
    shell_count_for,
)
from .kedf import ConvergenceError, GridError, fourth_order_energy, make_grid, tf_energy, weizsacker_energy

__all__ = ["RunConfig", "main", "cmd_table1", "cmd_model", "cmd_figures", "cmd_asymptotics"]

EXIT_OK = 0
EXIT_DATA = 2
EXIT_NUMERIC = 3

DEFAULT_GRID_POINTS = 2000
DEFAULT_R_MAX = 45.0
# Correction nodes stop at four filled shells (60 electrons); interpolation
# beyond that is extrapolation and gets a warning.
INTERPOLATION_COMFORT_Z = 60

_LADDER_SHELLS = tuple(range(2, 26))
_FIG1A_SHELLS = tuple(range(1, MAX_SHELLS + 1))
_FIG2A_SHELLS = tuple(range(2, MAX_SHELLS + 1, 2))


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: command, atom selection, overrides, formats."""

    command: str
    atoms: tuple[str, ...] | None = None
    data_paths: tuple[str, ...] = ()
    grid_points: int = DEFAULT_GRID_POINTS
    r_max: float = DEFAULT_R_MAX
    interpolation: str = "refit"
    output_format: str = "table"
    out_dir: str = "."
    z: int | None = None
    n_max: int | None = None


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def format_percent(value: float) -> str:
    """Two significant figures, plain decimal: -11, 0.59, 3.6, 0.067."""
    if value == 0.0:
        return "0.0"
    if not math.isfinite(value):
        return repr(value)
    decimals = max(0, 1 - math.floor(math.log10(abs(value))))
    return f"{value:.{decimals}f}"


def _format_value(value: float) -> str:
    return repr(float(value))


# -- table1 ----------------------------------------------------------------


@dataclass(frozen=True)
class AtomRow:
    record: STOAtomRecord
    t_tf: float
    t2: float
    t4: float
    delta_t: float

    @property
    def corrected(self) -> float:
        return self.t_tf + self.delta_t

    def errors_percent(self) -> tuple[float, float, float, float]:
        ref = self.record.reference_hf_kinetic
        rel = lambda approx: (approx - ref) / ref * 100.0
        return (
            rel(self.t_tf),
            rel(self.t_tf + self.t2),
            rel(self.t_tf + self.t2 + self.t4),
            rel(self.corrected),
        )


def _load_records(config: RunConfig) -> dict[str, STOAtomRecord]:
    if config.data_paths:
        records: dict[str, STOAtomRecord] = {}
        for path in config.data_paths:
            for rec in parse_sto_file(path):
                records[rec.element] = rec
        return dict(sorted(records.items(), key=lambda kv: kv[1].atomic_number))
    return load_bundled()


def _select_records(
    config: RunConfig, records: dict[str, STOAtomRecord]
) -> tuple[list[STOAtomRecord], list[str]]:
    if config.atoms is None:
        return list(records.values()), []
    by_fold = {sym.lower(): rec for sym, rec in records.items()}
    by_z = {rec.atomic_number: rec for rec in records.values()}
    chosen: list[STOAtomRecord] = []
    missing: list[str] = []
    for token in config.atoms:
        rec = None
        if token.lstrip("+-").isdigit():
            rec = by_z.get(int(token))
        else:
            rec = by_fold.get(token.lower())
        if rec is None:
            missing.append(token)
        else:
            chosen.append(rec)
    return chosen, missing


def _shell_correction(t_tf: float, z: int, mode: str) -> float:
    n_max = shell_count_for(z)
    if n_max is not None:
        return delta_t_exact(n_max)
    if z > INTERPOLATION_COMFORT_Z:
        _warn(
            f"Z={z} lies beyond the last filled-shell node at {INTERPOLATION_COMFORT_Z}; "
            "the interpolated correction is an extrapolation there"
        )
    return delta_t_interpolated(z, mode=mode)


def cmd_table1(config: RunConfig) -> int:
    records = _load_records(config)
    chosen, missing = _select_records(config, records)
    for token in missing:
        print(f"error: no data for atom {token!r}", file=sys.stderr)

    grid = make_grid(n_points=config.grid_points, r_span=(0.0, config.r_max))
    rows: list[AtomRow] = []
    numeric_failures = 0
    for rec in chosen:
        try:
            field = atom_density(rec)
            t_tf = tf_energy(field, grid)
            _, t2 = weizsacker_energy(field, grid)
            t4 = fourth_order_energy(field, grid)
            delta = _shell_correction(t_tf, rec.atomic_number, config.interpolation)
        except (ConvergenceError, ExtrapolationError) as exc:
            numeric_failures += 1
            print(f"error: {rec.element}: {exc}", file=sys.stderr)
            continue
        rows.append(AtomRow(rec, t_tf, t2, t4, delta))

    if not rows:
        return EXIT_NUMERIC if numeric_failures and not missing else EXIT_DATA

    out = sys.stdout
    if config.output_format == "table":
        print("relative error vs Hartree-Fock reference kinetic energy, %", file=out)
        print(f"{'Z':>3} {'atom':<4} {'T_TF':>8} {'+T2':>8} {'+T2+T4':>8} {'corrected':>10}", file=out)
        for row in rows:
            errs = row.errors_percent()
            print(
                f"{row.record.atomic_number:>3} {row.record.element:<4} "
                f"{format_percent(errs[0]):>8} {format_percent(errs[1]):>8} "
                f"{format_percent(errs[2]):>8} {format_percent(errs[3]):>10}",
                file=out,
            )
    elif config.output_format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["Z", "atom", "err_tf_pct", "err_tf_t2_pct", "err_tf_t2_t4_pct", "err_corrected_pct"])
        for row in rows:
            errs = row.errors_percent()
            writer.writerow(
                [row.record.atomic_number, row.record.element, *(format_percent(e) for e in errs)]
            )
    else:
        for row in rows:
            errs = row.errors_percent()
            print(
                json.dumps(
                    {
                        "z": row.record.atomic_number,
                        "atom": row.record.element,
                        "reference_hf_kinetic": row.record.reference_hf_kinetic,
                        "t_tf": row.t_tf,
                        "t2": row.t2,
                        "t4": row.t4,
                        "delta_t": row.delta_t,
                        "corrected": row.corrected,
                        "err_tf_pct": errs[0],
                        "err_tf_t2_pct": errs[1],
                        "err_tf_t2_t4_pct": errs[2],
                        "err_corrected_pct": errs[3],
                    }
                ),
                file=out,
            )
    return EXIT_OK


# -- model -----------------------------------------------------------------


def cmd_model(config: RunConfig) -> int:
    if config.n_max is not None:
        n_max = config.n_max
        if not 1 <= n_max <= MAX_SHELLS:
            print(f"error: n-max must lie in 1..{MAX_SHELLS}", file=sys.stderr)
            return EXIT_DATA
        z = electron_count(n_max)
    else:
        z = config.z
        if z is None or z < 1:
            print("error: provide --z or --n-max", file=sys.stderr)
            return EXIT_DATA
        n_max = shell_count_for(z)
        if n_max is None and z > INTERPOLATION_MAX_Z:
            print(
                f"error: Z={z} is not a filled-shell count and lies beyond the "
                f"interpolation range (1..{INTERPOLATION_MAX_Z})",
                file=sys.stderr,
            )
            return EXIT_DATA

    magic = n_max is not None
    if magic:
        t_exact = model_kinetic_energy(ShellConfiguration.closed_shell(n_max))
        delta = delta_t_exact(n_max)
        delta_kind = f"exact at {n_max} filled shells"
    else:
        t_exact = model_kinetic_energy_continuous(z)
        if z > INTERPOLATION_COMFORT_Z:
            _warn(
                f"Z={z} lies beyond the last filled-shell node at {INTERPOLATION_COMFORT_Z}; "
                "the interpolated correction is an extrapolation there"
            )
        delta = delta_t_interpolated(z, mode=config.interpolation)
        lower = [n for n in MAGIC_NUMBERS if n < z]
        above = min(n for n in MAGIC_NUMBERS if n > z)
        if lower:
            delta_kind = f"interpolated, not exact (Z between filled-shell counts {lower[-1]} and {above})"
        else:
            delta_kind = f"interpolated, not exact (Z below the first filled-shell count {above})"
    t_tf = t_exact - delta

    series = model_expansion(5)
    series_value = series.evaluate(float(z))
    series_gap = (series_value - t_exact) / t_exact

    payload = {
        "z": z,
        "electrons": z,
        "filled_shells": n_max,
        "t_model": t_exact,
        "t_tf_model": t_tf,
        "delta_t": delta,
        "delta_kind": delta_kind,
        "series_value": series_value,
        "series_relative_gap": series_gap,
        "interpolation_mode": config.interpolation,
    }
    if config.output_format == "jsonl":
        print(json.dumps(payload))
    elif config.output_format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(list(payload))
        writer.writerow([payload[k] if not isinstance(payload[k], float) else _format_value(payload[k]) for k in payload])
    else:
        shells = f"{n_max} filled shells" if magic else "not a filled-shell count"
        print(f"Z = N = {z} ({shells})")
        print(f"exact kinetic energy      {_format_value(t_exact)}")
        print(f"local-density energy      {_format_value(t_tf)}" + ("" if magic else "  (via interpolated correction)"))
        print(f"shell correction delta_T  {_format_value(delta)}  [{delta_kind}]")
        print(f"large-Z series (5 terms)  {_format_value(series_value)}  relative gap {series_gap:.3e}")
    return EXIT_OK


# -- figures ---------------------------------------------------------------


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([x if isinstance(x, (int, str)) else _format_value(x) for x in row])


def cmd_figures(config: RunConfig) -> int:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    density_rows = figure_density_rows()
    fig1 = out_dir / "fig1.csv"
    _write_csv(
        fig1,
        ["r_hat", "rho_hat_model", "rho_hat_tf", "n_max"],
        ((r["r_hat"], r["rho_hat_model"], r["rho_hat_tf"], r["n_max"]) for r in density_rows),
    )
    print(f"wrote {fig1}")

    for name, shells in (("fig1a.csv", _FIG1A_SHELLS), ("fig2a.csv", _FIG2A_SHELLS)):
        rows = figure_error_rows(shells, grid_points=config.grid_points)
        path = out_dir / name
        _write_csv(
            path,
            ["n_max", "Z", "rel_err_T0", "rel_err_T2", "rel_err_T4"],
            ((r["n_max"], r["Z"], r["rel_err_T0"], r["rel_err_T2"], r["rel_err_T4"]) for r in rows),
        )
        print(f"wrote {path}")
    return EXIT_OK


# -- asymptotics -----------------------------------------------------------


@dataclass(frozen=True)
class _FitRow:
    series: str
    quantity: str
    power: str
    fitted: float
    target: float
    tolerance: float

    @property
    def deviation(self) -> float:
        return abs(self.fitted - self.target)

    @property
    def within(self) -> bool:
        return self.deviation <= self.tolerance


def _self_tests() -> list[tuple[str, bool, str]]:
    zs = [float(electron_count(n)) for n in range(2, 9)]
    identity = richardson_extrapolate([(z, 3.75) for z in zs], [Fraction(0)])
    synthetic = richardson_extrapolate(
        [(z, 2.5 * z ** (7.0 / 3.0) - 0.7 * z**2) for z in zs],
        [Fraction(7, 3), Fraction(2)],
    )
    err = max(abs(synthetic[0] - 2.5), abs(synthetic[1] + 0.7))
    # tableau arithmetic rounds, so "exact" means full double precision here
    id_err = abs(identity[0] - 3.75) / 3.75
    return [
        ("identity series", id_err <= 1e-12, f"constant recovered to {id_err:.1e} relative"),
        ("synthetic two-term series", err <= 1e-8, f"max coefficient error {err:.2e}"),
    ]


def cmd_asymptotics(config: RunConfig) -> int:
    points = model_energy_sequence(_LADDER_SHELLS, grid_points=config.grid_points)
    tf_seq = [(p.z, p.t_tf) for p in points]
    fitted_tf = richardson_extrapolate(tf_seq, [Fraction(7, 3), Fraction(2), Fraction(5, 3)])
    t2_lead = richardson_extrapolate([(p.z, p.t2) for p in points], [Fraction(7, 3)])
    ratio_powers = [Fraction(-1, 3), Fraction(-2, 3)]
    t2_ratio = richardson_extrapolate([(p.z, p.t2 / p.t_exact) for p in points], ratio_powers)
    t4_ratio = richardson_extrapolate([(p.z, p.t4 / p.t_exact) for p in points], ratio_powers)

    rows = [
        _FitRow("T_TF", "coefficient", "Z^{7/3}", fitted_tf[0], 1.144714, 1e-5),
        _FitRow("T_TF", "coefficient", "Z^2", fitted_tf[1], -0.625856, 1e-3),
        _FitRow("T_TF", "coefficient", "Z^{5/3}", fitted_tf[2], 0.146878, 1e-2),
        _FitRow("T2", "coefficient", "Z^{7/3}", t2_lead[0], 0.0, 1e-4),
        _FitRow("T2", "fraction of exact energy", "Z^{-1/3}", t2_ratio[0], 0.10942, 1e-3),
        _FitRow("T4", "fraction of exact energy", "Z^{-1/3}", t4_ratio[0], 0.015052, 1e-3),
    ]
    checks = _self_tests()

    if config.output_format == "jsonl":
        for row in rows:
            print(
                json.dumps(
                    {
                        "series": row.series,
                        "quantity": row.quantity,
                        "power": row.power,
                        "fitted": row.fitted,
                        "target": row.target,
                        "deviation": row.deviation,
                        "tolerance": row.tolerance,
                        "within_tolerance": row.within,
                    }
                )
            )
        for name, ok, detail in checks:
            print(json.dumps({"self_test": name, "passed": ok, "detail": detail}))
    elif config.output_format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["series", "quantity", "power", "fitted", "target", "deviation", "tolerance", "within_tolerance"])
        for row in rows:
            writer.writerow(
                [row.series, row.quantity, row.power, _format_value(row.fitted), _format_value(row.target),
                 _format_value(row.deviation), _format_value(row.tolerance), row.within]
            )
    else:
        ladder = f"n_max = {_LADDER_SHELLS[0]}..{_LADDER_SHELLS[-1]}"
        print(f"extrapolated coefficients on the filled-shell ladder ({ladder})")
        for row in rows:
            state = "ok" if row.within else "OUTSIDE TOLERANCE"
            print(
                f"  {row.series:<5} {row.quantity:<25} {row.power:<8} "
                f"fitted {row.fitted: .8f}  target {row.target: .6f}  "
                f"|dev| {row.deviation:.2e}  tol {row.tolerance:.0e}  {state}"
            )
        for name, ok, detail in checks:
            print(f"  self-test {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_NUMERIC


# -- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfshell",
        description="Shell-corrected Thomas-Fermi kinetic energies: atoms, ladders, figures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, atoms: bool = False) -> None:
        if atoms:
            p.add_argument("--atoms", action="append",
                           help="comma-separated element symbols or atomic numbers (repeatable)")
            p.add_argument("--data", action="append", metavar="PATH",
                           help=".sto data file replacing the bundled set (repeatable)")
            p.add_argument("--r-max", type=float, default=DEFAULT_R_MAX,
                           help=f"outer quadrature radius for atoms (default {DEFAULT_R_MAX:g})")
        p.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS,
                       help=f"quadrature points (default {DEFAULT_GRID_POINTS})")
        p.add_argument("--interp", choices=("published", "refit"), default="refit",
                       help="interpolation coefficients for the shell correction (default refit)")
        p.add_argument("--format", choices=("table", "csv", "jsonl"), default="table",
                       help="output format (default table)")

    p_table = sub.add_parser("table1", help="per-atom relative errors of the functionals")
    add_common(p_table, atoms=True)

    p_model = sub.add_parser("model", help="exact ladder energies and the shell correction")
    group = p_model.add_mutually_exclusive_group(required=True)
    group.add_argument("--z", type=int, help="nuclear charge (= electron count)")
    group.add_argument("--n-max", type=int, help="number of filled shells")
    add_common(p_model)

    p_fig = sub.add_parser("figures", help="write fig1.csv, fig1a.csv, fig2a.csv")
    add_common(p_fig)
    p_fig.add_argument("--out", default=".", metavar="DIR", help="output directory (default .)")

    p_asym = sub.add_parser("asymptotics", help="large-Z coefficients vs targets")
    add_common(p_asym)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    atoms: tuple[str, ...] | None = None
    if getattr(args, "atoms", None):
        tokens = [t.strip() for chunk in args.atoms for t in chunk.split(",") if t.strip()]
        atoms = tuple(tokens)
    return RunConfig(
        command=args.command,
        atoms=atoms,
        data_paths=tuple(getattr(args, "data", None) or ()),
        grid_points=args.grid_points,
        r_max=getattr(args, "r_max", DEFAULT_R_MAX),
        interpolation=args.interp,
        output_format=args.format,
        out_dir=getattr(args, "out", "."),
        z=getattr(args, "z", None),
        n_max=getattr(args, "n_max", None),
    )


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "table1": cmd_table1,
    "model": cmd_model,
    "figures": cmd_figures,
    "asymptotics": cmd_asymptotics,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = _config_from_args(args)
    try:
        return COMMANDS[config.command](config)
    except (STODataError, GridError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConvergenceError, ExtrapolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
