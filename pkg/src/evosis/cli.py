"""Command-line interface.

Every run can echo a manifest (JSON) plus CSV artifacts into --out that are
byte-identical across repeated runs: text mode with '\\n' line endings,
'.' decimal separator, shortest round-trip float formatting, and no
timestamps. Plots are never rendered here; commands that produce plottable
data also emit a small matplotlib script next to the CSV.

Exit codes: 0 success, 1 configuration error, 2 solver non-convergence,
3 strict-mode check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .analysis import LIMIT_KINDS, SWEEP_PARAMS, sweep_diffusivity, sweep_length, verify_limit
from .dfe import solve_dfe
from .engine import simulate
from .errors import ConfigurationError, ConvergenceError, NotApplicableError, StepError
from .model import EvolutionRate, ModelConfig, config_from_dict, config_to_dict, validate_config
from .presets import load_preset, preset_names, preset_text
from .quadrature import mean_inverse_rho_squared
from .spectral import LAMBDA_STAR_CONVENTIONS, closed_form_r0, compute_r0, r0_bounds

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_STRICT = 3

REPRODUCE_TOL = 1e-3

# Published reference values reproduced by `evosis reproduce`.
R0_REFERENCE = (
    ("example1-fixed", 0.8808),
    ("example1-evolving", 1.5749),
    ("example2-fixed", 1.1692),
    ("example2-evolving", 0.8470),
    ("example3-a", 1.5749),
    ("example3-b", 0.6355),
)
MEAN_RHO_REFERENCE = (
    (0.35, 4.0, 1.5707963267948966, 0.5593),
    (-0.15, 4.0, 1.5707963267948966, 1.3804),
)
BOUNDS_REFERENCE = (
    ("example4-a", "lower", 1.0679, 3.3857),
    ("example4-b", "upper", 1.0681, 0.9739),
)


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with the config-error code."""

    def error(self, message: str) -> Any:
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# ---- shared helpers ----

def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_json(path: Path, doc: dict[str, Any]) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n")


def _out_dir(args: argparse.Namespace) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, args: argparse.Namespace, config: ModelConfig | None) -> None:
    options = {}
    for key in ("preset", "config", "grid", "steps", "periods", "strict",
                "lambda_star_convention", "param", "kind", "values"):
        if hasattr(args, key):
            value = getattr(args, key)
            options[key] = str(value) if isinstance(value, Path) else value
    _write_json(out / "manifest.json", {
        "version": __version__,
        "command": args.command,
        "options": options,
        "config": config_to_dict(config) if config is not None else None,
    })


def _load_config(args: argparse.Namespace) -> ModelConfig:
    if args.preset is not None:
        doc = json.loads(preset_text(args.preset))
    else:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if args.grid is not None:
        doc["grid_points"] = args.grid
    if args.steps is not None:
        doc["steps_per_period"] = args.steps
    return validate_config(config_from_dict(doc))


def _parse_values(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(token) for token in text.replace(",", " ").split())
    except ValueError:
        raise ConfigurationError([f"values: could not parse {text!r} as numbers"])
    if not values:
        raise ConfigurationError(["values: at least one value is required"])
    return values


def _emit_plot_script(out: Path, name: str, body: str) -> None:
    (out / name).write_text(body, encoding="utf-8", newline="\n")


_PLOT_TIMESERIES = '''"""Plot the infected density from timeseries.csv (run manually)."""
import csv
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

by_time = defaultdict(list)
with open("timeseries.csv") as handle:
    for row in csv.DictReader(handle):
        by_time[float(row["t"])].append((float(row["y"]), float(row["I"])))

fig, ax = plt.subplots(figsize=(7, 4))
for t, pairs in sorted(by_time.items()):
    pairs.sort()
    ax.plot([p[0] for p in pairs], [p[1] for p in pairs], lw=0.8)
ax.set_xlabel("y")
ax.set_ylabel("I(y, t)")
fig.tight_layout()
fig.savefig("timeseries.png", dpi=150)
'''

_PLOT_PERIODS = '''"""Plot per-period infected norms from periods.csv (run manually)."""
import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open("periods.csv")))
m = [int(r["period"]) for r in rows]
fig, ax = plt.subplots(figsize=(7, 4))
ax.semilogy(m, [float(r["sup_I"]) for r in rows], marker="o", label="sup I")
ax.semilogy(m, [float(r["l1_I"]) for r in rows], marker="s", label="L1 I")
ax.set_xlabel("period")
ax.legend()
fig.tight_layout()
fig.savefig("periods.png", dpi=150)
'''

_PLOT_SWEEP = '''"""Plot R0 against the swept parameter from sweep.csv (run manually)."""
import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open("sweep.csv")))
x = [float(r["value"]) for r in rows]
y = [float(r["r0"]) for r in rows]
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(x, y, marker="o")
ax.axhline(1.0, color="gray", lw=0.8, ls="--")
ax.set_xscale("log")
ax.set_xlabel(rows[0]["param"] if rows else "value")
ax.set_ylabel("R0")
fig.tight_layout()
fig.savefig("sweep.png", dpi=150)
'''

_PLOT_LIMITS = '''"""Plot the limit approach from limits.csv (run manually)."""
import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open("limits.csv")))
x = [float(r["value"]) for r in rows]
gap = [float(r["gap"]) for r in rows]
fig, ax = plt.subplots(figsize=(6, 4))
ax.loglog(x, gap, marker="o")
ax.set_xlabel("parameter value")
ax.set_ylabel("relative gap to target")
fig.tight_layout()
fig.savefig("limits.png", dpi=150)
'''

_PLOT_ORBIT = '''"""Plot the disease-free orbit from dfe_orbit.csv (run manually)."""
import csv
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

by_node = defaultdict(list)
with open("dfe_orbit.csv") as handle:
    for row in csv.DictReader(handle):
        by_node[float(row["y"])].append((float(row["t"]), float(row["S"])))

fig, ax = plt.subplots(figsize=(7, 4))
for y, pairs in sorted(by_node.items()):
    pairs.sort()
    ax.plot([p[0] for p in pairs], [p[1] for p in pairs], lw=0.8)
ax.set_xlabel("t")
ax.set_ylabel("S*(y, t)")
fig.tight_layout()
fig.savefig("dfe_orbit.png", dpi=150)
'''


# ---- subcommands ----

def cmd_r0(args: argparse.Namespace) -> int:
    config = _load_config(args)
    result = compute_r0(config)
    print(f"R0 = {result.value:.6f}")
    print(f"sandwich bracket = [{result.bracket[0]:.6f}, {result.bracket[1]:.6f}]")
    print(f"unit-radius defect = {result.defect:.3e} after {result.iterations} iterations")
    out = _out_dir(args)
    if out is not None:
        _write_manifest(out, args, config)
        _write_json(out / "r0.json", {
            "r0": result.value,
            "bracket": list(result.bracket),
            "iterations": result.iterations,
            "defect": result.defect,
        })
        phi = result.eigenfunction
        stride = max(1, (phi.shape[0] - 1) // 64)
        times = np.linspace(0.0, config.T, phi.shape[0])
        nodes = config.grid.nodes
        rows = [(float(times[k]), float(y), float(phi[k, j]))
                for k in range(0, phi.shape[0], stride)
                for j, y in enumerate(nodes)]
        _write_csv(out / "eigenfunction.csv", ("t", "y", "phi"), rows)
    if args.strict:
        slack = 1e-6 * max(1.0, result.value)
        inside = result.bracket[0] - slack <= result.value <= result.bracket[1] + slack
        if result.defect > 1e-8 or not inside:
            print("strict: defect or bracket containment check failed", file=sys.stderr)
            return EXIT_STRICT
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    config = _load_config(args)
    bounds = r0_bounds(config)
    print(f"lower bound = {bounds.lower:.6f} "
          f"(min-beta integral {bounds.min_beta_integral:.6f} / max-gamma integral {bounds.max_gamma_integral:.6f})")
    print(f"upper bound = {bounds.upper:.6f} "
          f"(max-beta integral {bounds.max_beta_integral:.6f} / min-gamma integral {bounds.min_gamma_integral:.6f})")
    out = _out_dir(args)
    if out is not None:
        _write_manifest(out, args, config)
        _write_json(out / "bounds.json", {
            "lower": bounds.lower,
            "upper": bounds.upper,
            "min_beta_integral": bounds.min_beta_integral,
            "max_beta_integral": bounds.max_beta_integral,
            "min_gamma_integral": bounds.min_gamma_integral,
            "max_gamma_integral": bounds.max_gamma_integral,
        })
    if args.strict and not (0.0 < bounds.lower <= bounds.upper):
        print("strict: bound ordering check failed", file=sys.stderr)
        return EXIT_STRICT
    return EXIT_OK


def cmd_dfe(args: argparse.Namespace) -> int:
    config = _load_config(args)
    result = solve_dfe(config)
    orbit = result.orbit
    print(f"disease-free orbit converged in {result.iterations} sweeps")
    print(f"residual = {result.residual:.3e}, two-sided gap = {result.bracket_gap:.3e}, "
          f"closure defect = {orbit.closure_defect:.3e}")
    out = _out_dir(args)
    if out is not None:
        _write_manifest(out, args, config)
        _write_json(out / "dfe.json", {
            "iterations": result.iterations,
            "residual": result.residual,
            "bracket_gap": result.bracket_gap,
            "closure_defect": orbit.closure_defect,
        })
        stride = max(1, (orbit.values.shape[0] - 1) // 64)
        times = orbit.times
        nodes = config.grid.nodes
        rows = [(float(times[k]), float(y), float(orbit.values[k, j]))
                for k in range(0, orbit.values.shape[0], stride)
                for j, y in enumerate(nodes)]
        _write_csv(out / "dfe_orbit.csv", ("t", "y", "S"), rows)
        _emit_plot_script(out, "plot_dfe_orbit.py", _PLOT_ORBIT)
    if args.strict and orbit.closure_defect > 1e-8:
        print("strict: orbit closure check failed", file=sys.stderr)
        return EXIT_STRICT
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    periods = args.periods if args.periods is not None else 10
    summary = simulate(config, periods, record_last_period=args.out is not None)
    final = summary.records[-1]
    print(f"ran {len(summary.records)} periods; sup I = {final.sup_I:.6e}, "
          f"L1 I = {final.l1_I:.6e}, S closure defect = {final.s_closure_defect:.3e}")
    print(f"negativity clamps = {summary.clamp_count}")
    out = _out_dir(args)
    if out is not None:
        _write_manifest(out, args, config)
        _write_csv(out / "periods.csv", ("period", "sup_I", "l1_I", "s_closure_defect"),
                   [(r.index, r.sup_I, r.l1_I, r.s_closure_defect) for r in summary.records])
        if summary.last_period is not None:
            times, s_path, i_path = summary.last_period
            stride = max(1, (times.size - 1) // 64)
            nodes = config.grid.nodes
            rows = [(float(times[k]), float(y), float(s_path[k, j]), float(i_path[k, j]))
                    for k in range(0, times.size, stride)
                    for j, y in enumerate(nodes)]
            _write_csv(out / "timeseries.csv", ("t", "y", "S", "I"), rows)
            _emit_plot_script(out, "plot_timeseries.py", _PLOT_TIMESERIES)
        _emit_plot_script(out, "plot_periods.py", _PLOT_PERIODS)
    if args.strict and summary.clamp_count > 0:
        print("strict: positivity clamps occurred", file=sys.stderr)
        return EXIT_STRICT
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args)
    values = _parse_values(args.values)
    if args.param == "d_I":
        table = sweep_diffusivity(config, values)
    else:
        table = sweep_length(config, values)
    for value, r0 in zip(table.values, table.r0_values):
        print(f"{table.param} = {value:<12g} R0 = {r0:.8f}")
    print(f"verdict: {table.verdict}"
          + (f" at indices {list(table.violation_indices)}" if table.violation_indices else ""))
    out = _out_dir(args)
    if out is not None:
        _write_manifest(out, args, config)
        _write_csv(out / "sweep.csv", ("param", "value", "r0"),
                   [(table.param, v, r) for v, r in zip(table.values, table.r0_values)])
        _write_json(out / "sweep.json", {
            "param": table.param,
            "values": list(table.values),
            "r0_values": list(table.r0_values),
            "verdict": table.verdict,
            "violation_indices": list(table.violation_indices),
        })
        _emit_plot_script(out, "plot_sweep.py", _PLOT_SWEEP)
    if args.strict and not table.verdict.startswith("strictly"):
        print("strict: sweep is not strictly monotone", file=sys.stderr)
        return EXIT_STRICT
    return EXIT_OK


def cmd_limits(args: argparse.Namespace) -> int:
    config = _load_config(args)
    values = _parse_values(args.values)
    report = verify_limit(config, args.kind, values)
    print(f"target ({report.kind}) = {report.target:.8f}")
    for value, r0, gap in zip(report.values, report.r0_values, report.gaps):
        print(f"value = {value:<12g} R0 = {r0:.8f}  gap = {gap:.3e}")
    print(f"final gap = {report.final_gap:.3e}"
          + (" [FLAGGED > 5%]" if report.flagged else "")
          + ("" if report.gaps_monotone else " [gaps not monotone]"))
    out = _out_dir(args)
    if out is not None:
        _write_manifest(out, args, config)
        _write_csv(out / "limits.csv", ("value", "r0", "gap"),
                   list(zip(report.values, report.r0_values, report.gaps)))
        _write_json(out / "limits.json", {
            "kind": report.kind,
            "target": report.target,
            "values": list(report.values),
            "r0_values": list(report.r0_values),
            "gaps": list(report.gaps),
            "flagged": report.flagged,
            "gaps_monotone": report.gaps_monotone,
        })
        _emit_plot_script(out, "plot_limits.py", _PLOT_LIMITS)
    if args.strict and (report.flagged or not report.gaps_monotone):
        print("strict: limit gap checks failed", file=sys.stderr)
        return EXIT_STRICT
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    rows: list[tuple[str, float, float]] = []
    for name, reference in R0_REFERENCE:
        value = closed_form_r0(load_preset(name), convention=args.lambda_star_convention)
        rows.append((f"closed-form R0 [{name}]", reference, value))
    for amplitude, frequency, period, reference in MEAN_RHO_REFERENCE:
        rate = EvolutionRate(kind="exp-cosine", period=period,
                             amplitude=amplitude, frequency=frequency)
        rows.append((f"mean of rho^-2 [amplitude {amplitude:+.2f}]", reference,
                     mean_inverse_rho_squared(rate)))
    for name, side, ref_num, ref_den in BOUNDS_REFERENCE:
        bounds = r0_bounds(load_preset(name))
        if side == "lower":
            num, den, ratio = bounds.min_beta_integral, bounds.max_gamma_integral, bounds.lower
        else:
            num, den, ratio = bounds.max_beta_integral, bounds.min_gamma_integral, bounds.upper
        rows.append((f"{side}-bound numerator [{name}]", ref_num, num))
        rows.append((f"{side}-bound denominator [{name}]", ref_den, den))
        rows.append((f"{side} bound [{name}]", ref_num / ref_den, ratio))

    failures = 0
    print(f"{'quantity':<44} {'reference':>12} {'computed':>14} {'|diff|':>10}  status")
    for label, reference, computed in rows:
        diff = abs(computed - reference)
        ok = diff <= REPRODUCE_TOL
        failures += 0 if ok else 1
        print(f"{label:<44} {reference:>12.4f} {computed:>14.6f} {diff:>10.2e}  "
              + ("pass" if ok else "FAIL"))
    print(f"{len(rows) - failures}/{len(rows)} rows within {REPRODUCE_TOL:g}")
    out = _out_dir(args)
    if out is not None:
        _write_manifest(out, args, None)
        _write_csv(out / "reproduction.csv", ("quantity", "reference", "computed", "abs_diff"),
                   [(label, ref, comp, abs(comp - ref)) for label, ref, comp in rows])
    if failures and args.strict:
        return EXIT_STRICT
    return EXIT_OK


# ---- parser ----

def _add_common(sub: _Parser, needs_config: bool) -> None:
    source = sub.add_mutually_exclusive_group(required=needs_config)
    source.add_argument("--preset", choices=preset_names(), help="bundled configuration name")
    source.add_argument("--config", type=Path, help="path to a JSON configuration file")
    sub.add_argument("--out", type=Path, help="directory for manifest/CSV/plot-script artifacts")
    sub.add_argument("--strict", action="store_true", help="turn soft checks into exit code 3")
    sub.add_argument("--lambda-star-convention", dest="lambda_star_convention",
                     choices=LAMBDA_STAR_CONVENTIONS, default="paper-example",
                     help="endpoint convention of the closed-form eigenvalue")
    sub.add_argument("--grid", type=int, metavar="N", help="override spatial intervals")
    sub.add_argument("--steps", type=int, metavar="M", help="override steps per period")
    sub.add_argument("--periods", type=int, metavar="P", help="periods to simulate")


def build_parser() -> _Parser:
    parser = _Parser(prog="evosis",
                     description="epidemic thresholds on periodically evolving habitats")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    specs = (
        ("r0", cmd_r0, True, "reproduction number of the periodic linearization"),
        ("simulate", cmd_simulate, True, "run the coupled system for whole periods"),
        ("dfe", cmd_dfe, True, "disease-free periodic orbit"),
        ("sweep", cmd_sweep, True, "R0 across a parameter sequence"),
        ("limits", cmd_limits, True, "R0 approach to an extreme-parameter target"),
        ("bounds", cmd_bounds, True, "sandwich bounds from coefficient extremes"),
        ("reproduce", cmd_reproduce, False, "recompute the published headline numbers"),
    )
    for name, handler, needs_config, help_text in specs:
        sub = commands.add_parser(name, help=help_text)
        _add_common(sub, needs_config)
        sub.set_defaults(handler=handler)

    sweep_parser = commands.choices["sweep"]
    sweep_parser.add_argument("--param", choices=SWEEP_PARAMS, required=True,
                              help="which parameter to sweep")
    sweep_parser.add_argument("--values", required=True,
                              help="comma-separated strictly increasing values")
    limits_parser = commands.choices["limits"]
    limits_parser.add_argument("--kind", choices=LIMIT_KINDS, required=True,
                               help="which extreme-parameter regime")
    limits_parser.add_argument("--values", required=True,
                               help="comma-separated values running toward the limit")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.handler(args)
    except ConfigurationError as exc:
        for line in exc.errors:
            print(f"config error: {line}", file=sys.stderr)
        return EXIT_CONFIG
    except NotApplicableError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, StepError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
