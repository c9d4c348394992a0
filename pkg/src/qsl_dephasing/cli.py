"""Command-line surface: parameter sweeps written as deterministic CSV.

Subcommands map one-to-one onto the figure families: ``dephasing``
(F and gamma over time), ``steady`` (F at the steady state vs s),
``nonmarkov`` (backflow measure vs s), ``qsl`` (ratio tau_qsl/tau, either
swept over tau or over an (s, T) interplay grid), ``geospeed`` (scaled
geodesic and speed over time), and ``critical`` (the Markovian /
non-Markovian boundary).

Temperatures are spec strings: ``zero``, ``t:<value>`` (finite, units of
omega_c), ``hight:<omega_T>`` (high-temperature limit).  Rows are emitted
in lexicographic (s, temperature, time) order, floats in scientific
notation with 9 significant digits; reruns and any ``--threads`` value
produce byte-identical files.  Exit codes: 0 success, 1 configuration
error, 2 partial convergence failures (rows flagged in an extra
``converged`` column).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dephasing import critical_ohmicity, evaluate_grid_multi, steady_factor
from .errors import DegenerateEvolutionError, QuadratureConvergenceError
from .model import DephasingModel, OhmicSpectralDensity, ThermalEnvironment
from .numerics import Tolerance
from .qsl import (
    _geodesic_value,
    _speed_values,
    graded_path_lengths,
    non_markovianity_sweep,
)

__all__ = ["main"]

_DEFAULT_TEMPS = "zero,t:0.5,t:1,t:1.5"


class _ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 1
        raise _ConfigError(message)


@dataclass(frozen=True)
class TempSpec:
    env: ThermalEnvironment
    label: str
    sort_key: tuple[int, float]
    value: float


def _parse_temp(text: str) -> TempSpec:
    text = text.strip()
    if text == "zero":
        return TempSpec(ThermalEnvironment.zero(), "zero", (0, 0.0), 0.0)
    if text.startswith("t:"):
        try:
            value = float(text[2:])
        except ValueError:
            raise _ConfigError(f"bad temperature spec {text!r}")
        if not value > 0.0:
            raise _ConfigError(f"finite temperature must be positive: {text!r}")
        return TempSpec(ThermalEnvironment.finite(value), f"t:{value:.12g}", (1, value), value)
    if text.startswith("hight:"):
        try:
            value = float(text[6:])
        except ValueError:
            raise _ConfigError(f"bad temperature spec {text!r}")
        if not value > 0.0:
            raise _ConfigError(f"thermal frequency must be positive: {text!r}")
        return TempSpec(
            ThermalEnvironment.high_t(value), f"hight:{value:.12g}", (2, value), value
        )
    raise _ConfigError(f"unknown temperature spec {text!r} (use zero, t:<v>, hight:<v>)")


def _fmt(x: float) -> str:
    if x == 0.0:
        x = 0.0  # normalise -0.0
    return f"{x:.8e}"


def _write_csv(path: str, columns: list[str], rows: list[tuple[list[str], bool]]) -> int:
    """Write rows; append a converged column only when some row failed."""
    flag_column = any(not ok for _, ok in rows)
    try:
        with open(path, "w", newline="") as fh:
            header = columns + (["converged"] if flag_column else [])
            fh.write(",".join(header) + "\n")
            for cells, ok in rows:
                out = cells + (["1" if ok else "0"] if flag_column else [])
                fh.write(",".join(out) + "\n")
    except OSError as exc:
        raise _ConfigError(f"cannot write {path!r}: {exc}")
    return 2 if flag_column else 0


def _map_items(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _tolerance(cfg) -> Tolerance:
    return Tolerance(abs_tol=cfg.tol_abs, rel_tol=cfg.tol_rel)


def _grid(lo: float, hi: float, points: int, what: str) -> np.ndarray:
    if not (lo < hi and points >= 2):
        raise _ConfigError(f"{what} grid must be strictly increasing with >= 2 points")
    return np.linspace(lo, hi, points)


def _s_values(cfg, default: np.ndarray) -> np.ndarray:
    if cfg.s is not None:
        return np.array([cfg.s])
    if cfg.s_list is not None:
        values = np.array([float(v) for v in cfg.s_list.split(",") if v.strip()])
        if values.size == 0:
            raise _ConfigError("--s-list is empty")
        return np.sort(values)
    if cfg.s_min is not None or cfg.s_max is not None or cfg.s_points is not None:
        lo = cfg.s_min if cfg.s_min is not None else 0.1
        hi = cfg.s_max if cfg.s_max is not None else 8.0
        pts = cfg.s_points if cfg.s_points is not None else 80
        return _grid(lo, hi, pts, "s")
    return default


def _temps(cfg, default: str = _DEFAULT_TEMPS) -> list[TempSpec]:
    raw = cfg.temp if cfg.temp is not None else cfg.temp_list
    if raw is None:
        raw = default
    specs = [_parse_temp(part) for part in raw.split(",") if part.strip()]
    if not specs:
        raise _ConfigError("no temperatures given")
    return sorted(specs, key=lambda t: t.sort_key)


def _t_grid(cfg) -> np.ndarray:
    return _grid(cfg.t_min, cfg.t_max, cfg.t_points, "t")


def _tau_grid(cfg) -> np.ndarray:
    return _grid(cfg.tau_min, cfg.tau_max, cfg.tau_points, "tau")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_dephasing(cfg) -> int:
    s_values = _s_values(cfg, np.array([1.0, 4.0]))
    temps = _temps(cfg)
    ts = _t_grid(cfg)
    tol = _tolerance(cfg)

    def work(temp: TempSpec):
        return evaluate_grid_multi(s_values, 1.0, temp.env, ts, tol)

    grids = _map_items(work, temps, cfg.threads)
    rows: list[tuple[list[str], bool]] = []
    for i, s in enumerate(s_values):
        for j, temp in enumerate(temps):
            grid = grids[j]
            for k, t in enumerate(ts):
                rows.append(
                    (
                        [
                            _fmt(s),
                            temp.label,
                            _fmt(t),
                            _fmt(grid.D[i, k]),
                            _fmt(grid.gamma[i, k]),
                            _fmt(grid.F[i, k]),
                        ],
                        bool(grid.converged[i, k]),
                    )
                )
    return _write_csv(cfg.out, ["s", "temperature", "t", "D", "gamma", "F"], rows)


def _cmd_steady(cfg) -> int:
    s_values = _s_values(cfg, _grid(0.1, 8.0, 80, "s"))
    temps = _temps(cfg)
    tol = _tolerance(cfg)

    def work(item):
        s, temp = item
        model = DephasingModel(OhmicSpectralDensity(float(s)), temp.env)
        try:
            result = steady_factor(model, tol)
            return _fmt(result.value), "1" if result.divergent else "0", True
        except QuadratureConvergenceError as exc:
            return _fmt(exc.partial_value), "0", False

    items = [(s, temp) for s in s_values for temp in temps]
    results = _map_items(work, items, cfg.threads)
    rows = [
        ([_fmt(s), temp.label, value, divergent], ok)
        for (s, temp), (value, divergent, ok) in zip(items, results)
    ]
    return _write_csv(cfg.out, ["s", "temperature", "F_inf", "divergent"], rows)


def _cmd_nonmarkov(cfg) -> int:
    s_values = _s_values(cfg, _grid(0.1, 8.0, 40, "s"))
    temps = _temps(cfg)
    tol = _tolerance(cfg)
    t_max = cfg.t_max if cfg.t_max is not None else 50.0

    def work(temp: TempSpec):
        try:
            results = non_markovianity_sweep(s_values, 1.0, temp.env, t_max, tol)
            return [
                (_fmt(r.N), str(len(r.negative_intervals)), True) for r in results
            ]
        except QuadratureConvergenceError as exc:
            return [(_fmt(exc.partial_value), "0", False)] * len(s_values)

    per_temp = _map_items(work, temps, cfg.threads)
    rows = []
    for i, s in enumerate(s_values):
        for j, temp in enumerate(temps):
            n_value, n_int, ok = per_temp[j][i]
            rows.append(([_fmt(s), temp.label, n_value, n_int], ok))
    return _write_csv(cfg.out, ["s", "temperature", "N", "n_intervals"], rows)


def _qsl_cells(s_values, temp: TempSpec, tau: float, omega_0: float, tol: Tolerance):
    """QSL evaluations for all s at one (temperature, tau); shares one grid."""
    s_values = np.asarray(s_values, dtype=float)
    quad_ok = {"value": True}

    def v_rows(ts, rows=None):
        subset = s_values if rows is None else s_values[rows]
        grid = evaluate_grid_multi(subset, 1.0, temp.env, ts, tol)
        quad_ok["value"] = quad_ok["value"] and bool(grid.converged.all())
        return _speed_values(grid.gamma, grid.F, omega_0, 1.0)

    ells, simpson_ok = graded_path_lengths(v_rows, tau, omega_0, tol)
    end = evaluate_grid_multi(s_values, 1.0, temp.env, [tau], tol)
    out = []
    for i in range(len(s_values)):
        geo = _geodesic_value(float(end.F[i, 0]), omega_0, tau, 1.0)
        ok = bool(simpson_ok[i]) and quad_ok["value"] and bool(end.converged[i].all())
        if ells[i] <= 1e-300:
            out.append(None)  # degenerate: no motion at all
        else:
            out.append((geo, float(ells[i]), tau * geo / ells[i], geo / ells[i], ok))
    return out


def _cmd_qsl(cfg) -> int:
    tol = _tolerance(cfg)
    omega_0 = cfg.omega0
    if cfg.tau is not None:
        # Interplay mode: fixed tau over an (s, T) grid; numeric temperatures.
        s_values = _s_values(cfg, _grid(0.1, 8.0, 80, "s"))
        if cfg.temp is not None or cfg.temp_list is not None:
            temps = _temps(cfg)
        else:
            lo = cfg.temp_min if cfg.temp_min is not None else 0.0
            hi = cfg.temp_max if cfg.temp_max is not None else 3.0
            pts = cfg.temp_points if cfg.temp_points is not None else 61
            temps = [
                _parse_temp("zero" if value == 0.0 else f"t:{value:.12g}")
                for value in _grid(lo, hi, pts, "temperature")
            ]

        def work(temp: TempSpec):
            return _qsl_cells(s_values, temp, cfg.tau, omega_0, tol)

        cells = _map_items(work, temps, cfg.threads)
        rows = []
        skipped = 0
        for i, s in enumerate(s_values):
            for j, temp in enumerate(temps):
                cell = cells[j][i]
                if cell is None:
                    skipped += 1
                    continue
                geo, ell, tau_qsl, ratio, ok = cell
                rows.append(([_fmt(s), _fmt(temp.value), _fmt(ratio)], ok))
        if skipped:
            print(f"warning: skipped {skipped} degenerate rows", file=sys.stderr)
        return _write_csv(cfg.out, ["s", "temperature", "ratio"], rows)

    s_values = _s_values(cfg, np.array([1.0, 4.0]))
    temps = _temps(cfg)
    taus = _tau_grid(cfg)

    def work(item):
        temp, tau = item
        return _qsl_cells(s_values, temp, float(tau), omega_0, tol)

    items = [(temp, tau) for temp in temps for tau in taus]
    cells = _map_items(work, items, cfg.threads)
    by_key = {
        (j, k): cells[idx]
        for idx, (j, k) in enumerate((j, k) for j in range(len(temps)) for k in range(len(taus)))
    }
    rows = []
    skipped = 0
    for i, s in enumerate(s_values):
        for j, temp in enumerate(temps):
            for k, tau in enumerate(taus):
                cell = by_key[(j, k)][i]
                if cell is None:
                    skipped += 1
                    continue
                geo, ell, tau_qsl, ratio, ok = cell
                rows.append(
                    (
                        [
                            _fmt(s),
                            temp.label,
                            _fmt(tau),
                            _fmt(geo),
                            _fmt(ell),
                            _fmt(tau_qsl),
                            _fmt(ratio),
                        ],
                        ok,
                    )
                )
    if skipped:
        print(f"warning: skipped {skipped} degenerate rows", file=sys.stderr)
    return _write_csv(
        cfg.out,
        ["s", "temperature", "tau", "geodesic", "path_length", "tau_qsl", "ratio"],
        rows,
    )


def _cmd_geospeed(cfg) -> int:
    s_values = _s_values(cfg, np.array([1.0, 4.0]))
    temps = _temps(cfg)
    ts = _t_grid(cfg)
    tol = _tolerance(cfg)
    omega_0 = cfg.omega0

    def work(temp: TempSpec):
        return evaluate_grid_multi(s_values, 1.0, temp.env, ts, tol)

    grids = _map_items(work, temps, cfg.threads)
    rows = []
    for i, s in enumerate(s_values):
        for j, temp in enumerate(temps):
            grid = grids[j]
            for k, t in enumerate(ts):
                geo = _geodesic_value(float(grid.F[i, k]), omega_0, float(t), 1.0)
                spd = float(_speed_values(grid.gamma[i, k], grid.F[i, k], omega_0, 1.0))
                rows.append(
                    (
                        [_fmt(s), temp.label, _fmt(t), _fmt(geo), _fmt(spd)],
                        bool(grid.converged[i, k]),
                    )
                )
    return _write_csv(
        cfg.out, ["s", "temperature", "t", "geodesic_scaled", "speed_scaled"], rows
    )


def _cmd_critical(cfg) -> int:
    if cfg.temp is None and cfg.temp_list is None:
        raise _ConfigError("critical requires --temp or --temp-list")
    temps = _temps(cfg)
    tol = _tolerance(cfg)

    def work(temp: TempSpec):
        try:
            result = critical_ohmicity(temp.env, cfg.s_lo, cfg.s_hi, tol)
            return _fmt(result.s_cri), _fmt(result.bracket_width), True
        except ValueError as exc:
            print(f"warning: {temp.label}: {exc}", file=sys.stderr)
            return _fmt(math.nan), _fmt(math.nan), False

    results = _map_items(work, temps, cfg.threads)
    rows = [
        ([temp.label, s_cri, width], ok)
        for temp, (s_cri, width, ok) in zip(temps, results)
    ]
    return _write_csv(cfg.out, ["temperature", "s_cri", "bracket_width"], rows)


# ---------------------------------------------------------------------------
# argument and config-file plumbing

_COMMANDS = {
    "dephasing": _cmd_dephasing,
    "steady": _cmd_steady,
    "nonmarkov": _cmd_nonmarkov,
    "qsl": _cmd_qsl,
    "geospeed": _cmd_geospeed,
    "critical": _cmd_critical,
}

_FLOAT_KEYS = (
    "s s_min s_max omega0 tau tau_min tau_max t_min t_max tol_abs tol_rel s_lo s_hi "
    "temp_min temp_max".split()
)
_INT_KEYS = "s_points t_points tau_points temp_points threads".split()
_STR_KEYS = "s_list temp temp_list out".split()


def _build_parser() -> _Parser:
    parser = _Parser(prog="qsl-dephasing", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name, add_help=True)
        p.add_argument("--s", type=float, default=None)
        p.add_argument("--s-list", type=str, default=None)
        p.add_argument("--s-min", type=float, default=None)
        p.add_argument("--s-max", type=float, default=None)
        p.add_argument("--s-points", type=int, default=None)
        p.add_argument("--temp", type=str, default=None)
        p.add_argument("--temp-list", type=str, default=None)
        p.add_argument("--temp-min", type=float, default=None)
        p.add_argument("--temp-max", type=float, default=None)
        p.add_argument("--temp-points", type=int, default=None)
        p.add_argument("--omega0", type=float, default=None)
        p.add_argument("--t-min", type=float, default=None)
        p.add_argument("--t-max", type=float, default=None)
        p.add_argument("--t-points", type=int, default=None)
        p.add_argument("--tau", type=float, default=None)
        p.add_argument("--tau-min", type=float, default=None)
        p.add_argument("--tau-max", type=float, default=None)
        p.add_argument("--tau-points", type=int, default=None)
        p.add_argument("--tol-abs", type=float, default=None)
        p.add_argument("--tol-rel", type=float, default=None)
        p.add_argument("--s-lo", type=float, default=None)
        p.add_argument("--s-hi", type=float, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--threads", type=int, default=None)
    return parser


_DEFAULTS = {
    "omega0": 1.0,
    "t_min": 0.025,
    "t_max": None,  # command-dependent; see _fill_defaults
    "t_points": 400,
    "tau_min": 0.025,
    "tau_max": 10.0,
    "tau_points": 400,
    "tol_abs": 1e-10,
    "tol_rel": 1e-8,
    "s_lo": 1.5,
    "s_hi": 3.5,
}


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise _ConfigError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise _ConfigError(f"cannot read config {path!r}: {exc}")
    return values


def _apply_config(args) -> None:
    if args.config is None:
        return
    file_values = _read_config_file(args.config)
    for key, text in file_values.items():
        if key not in _FLOAT_KEYS + _INT_KEYS + _STR_KEYS:
            raise _ConfigError(f"unknown config key {key!r}")
        if getattr(args, key, None) is not None:
            continue  # flags override file values
        try:
            if key in _FLOAT_KEYS:
                setattr(args, key, float(text))
            elif key in _INT_KEYS:
                setattr(args, key, int(text))
            else:
                setattr(args, key, text)
        except ValueError:
            raise _ConfigError(f"bad value for config key {key!r}: {text!r}")


def _fill_defaults(args) -> None:
    for key, value in _DEFAULTS.items():
        if getattr(args, key) is None and value is not None:
            setattr(args, key, value)
    if args.t_max is None and args.command != "nonmarkov":
        args.t_max = 10.0
    if args.threads is None:
        env = os.environ.get("QSL_DEPHASING_THREADS", "")
        try:
            args.threads = max(1, int(env)) if env else 1
        except ValueError:
            raise _ConfigError(f"bad QSL_DEPHASING_THREADS value {env!r}")
    if args.out is None:
        raise _ConfigError("--out is required (or set out= in the config file)")
    if not args.tol_abs > 0.0 or not args.tol_rel > 0.0:
        raise _ConfigError("tolerances must be positive")


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        _apply_config(args)
        _fill_defaults(args)
        return _COMMANDS[args.command](args)
    except _ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DegenerateEvolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
