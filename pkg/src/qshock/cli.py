"""Command-line entry point: ``qshock <command> [flags]``.

Exit status is 0 on success, 1 on usage errors and 2 on computational errors
(the error tag is printed on stderr).
"""
from __future__ import annotations

import argparse
import itertools
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from . import characteristics as ch
from . import gaussian_packet as gp
from . import oracle
from . import riemann as rm
from .config import PARAM_FIELDS, RunConfig, parse_config_file, parse_sweep_spec
from .errors import NoCrossing, NoRootInHorizon, QShockError
from .io import render_csv, render_json, write_sidecar, write_table

COMMANDS = ("fields", "characteristics", "shock", "riemann", "evolve", "fig1", "sweep")


class UsageError(Exception):
    pass


@dataclass
class Artifact:
    command: str
    data: dict
    suffix: str = ""
    meta: dict = field(default_factory=dict)


def _symmetric_grid(x_min: float, x_max: float, n: int) -> np.ndarray:
    x = np.linspace(x_min, x_max, n)
    if x_min == -x_max:
        # exact mirror symmetry, and an exact 0 for odd n
        x = 0.5 * (x - x[::-1])
    return x


def cmd_fields(cfg: RunConfig) -> list[Artifact]:
    p = cfg.packet()
    sigma = float(gp.spread(p, cfg.t))
    centre = p.u0 * cfg.t
    x_min = centre - 8.0 * sigma if cfg.x_min is None else cfg.x_min
    x_max = centre + 8.0 * sigma if cfg.x_max is None else cfg.x_max
    x = _symmetric_grid(x_min, x_max, cfg.n or 2001)
    f = gp.fields(p, x, cfg.t, normalized=cfg.normalized)
    data = {
        "x": x,
        "R": f.R,
        "S": f.S,
        "rho": f.rho,
        "sigma": f.sigma,
        "Q": gp.quantum_potential(p, x, cfg.t),
        "force": gp.quantum_force(p, x, cfg.t),
        "u": gp.velocity(p, x, cfg.t),
    }
    return [Artifact("fields", data, meta={"t": cfg.t, "normalized": cfg.normalized})]


def cmd_fig1(cfg: RunConfig) -> list[Artifact]:
    p = cfg.packet()
    x_min = -10.0 if cfg.x_min is None else cfg.x_min
    x_max = 10.0 if cfg.x_max is None else cfg.x_max
    x = _symmetric_grid(x_min, x_max, cfg.n or 2001)
    return [Artifact("fig1", {"x": x, "force": gp.quantum_force(p, x, cfg.t)}, meta={"t": cfg.t})]


def cmd_characteristics(cfg: RunConfig) -> list[Artifact]:
    p = cfg.packet()
    rows = ch.line_ensemble(p, cfg.launch_x0, cfg.launch_t0, cfg.families(), cfg.mode)
    data = {
        "family": [ch.family_name(r[2]) for r in rows],
        "x0": [r[0] for r in rows],
        "t0": [r[1] for r in rows],
        "anchor": [r[3] for r in rows],
        "slope": [r[4] for r in rows],
        "mode": [cfg.mode] * len(rows),
    }
    return [Artifact("characteristics", data)]


def shock_rows(cfg: RunConfig) -> list[dict]:
    p = cfg.packet()
    t_max = ch.default_t_max(p) if cfg.t_max is None else cfg.t_max
    rows = []
    for fam in cfg.families():
        for x0 in cfg.launch_x0:
            ref = None
            try:
                ref = ch.shock_condition_root(p, x0, fam, cfg.mode, t_max=t_max)
                root_row = (ref.t_s, ref.x_s, "ok")
            except NoRootInHorizon:
                root_row = (float("nan"), float("nan"), "NoRootInHorizon")
            ev = ch.paper_formula_event(p, x0, fam)
            candidates = [("paper-formula", ev.t_s, ev.x_s, "ok"), ("condition-root", *root_row)]
            try:
                pc = ch.first_crossing(p, [x0], fam, cfg.mode, t_max=t_max)
                candidates.append(("pairwise-crossing", pc.t_s, pc.x_s, "ok"))
            except NoCrossing:
                candidates.append(("pairwise-crossing", float("nan"), float("nan"), "NoCrossing"))
            if p.u0 == 0:
                ts, xs = ch.shock_special_u0_zero(p, x0)
                candidates.append(("paper-special-u0", ts, xs, "reference-special-case"))
            for method, ts, xs, status in candidates:
                if ref is not None and np.isfinite(ts):
                    dt_rel = (ts - ref.t_s) / ref.t_s
                    dx_rel = (xs - ref.x_s) / ref.x_s if ref.x_s != 0 else float("nan")
                else:
                    dt_rel = dx_rel = float("nan")
                rows.append({
                    "method": method,
                    "family": ch.family_name(fam),
                    "x0": float(x0),
                    "mode": cfg.mode,
                    "t_s": float(ts),
                    "x_s": float(xs),
                    "status": status,
                    "rel_diff_t": float(dt_rel),
                    "rel_diff_x": float(dx_rel),
                })
    return rows


def _rows_to_columns(rows: list[dict]) -> dict:
    if not rows:
        return {}
    return {k: [r[k] for r in rows] for k in rows[0]}


def cmd_shock(cfg: RunConfig) -> list[Artifact]:
    return [Artifact("shock", _rows_to_columns(shock_rows(cfg)))]


def cmd_riemann(cfg: RunConfig) -> list[Artifact]:
    p = cfg.packet()
    fam = cfg.families()[0]
    chart = rm.gaussian_chart(p, cfg.t, family=fam)
    table = {"rho": chart.rho_nodes, "F": chart.F_nodes}
    samples = np.linspace(cfg.t, cfg.t + cfg.span, 21)
    rows = []
    for family in cfg.families():
        fchart = rm.gaussian_chart(p, cfg.t, family=family)
        for x0 in cfg.launch_x0:
            line = ch.build_line(p, x0, cfg.t, family, "corrected")
            rows.append({
                "family": ch.family_name(family),
                "x0": float(x0),
                "t_start": float(samples[0]),
                "t_end": float(samples[-1]),
                "max_drift": rm.invariant_drift(p, line, samples, fchart),
            })
    meta = {"t": cfg.t, "rho_ref": chart.rho_ref, "lambda": chart.lam}
    return [
        Artifact("riemann", table, meta=meta),
        Artifact("riemann-drift", _rows_to_columns(rows), suffix="drift"),
    ]


def evolve_domain(p: gp.PacketParams, t: float) -> tuple[float, float]:
    w = 14.0 * float(gp.spread(p, t))
    lo, hi = min(0.0, p.u0 * t), max(0.0, p.u0 * t)
    return lo - w, hi + w


def cmd_evolve(cfg: RunConfig) -> list[Artifact]:
    p = cfg.packet()
    t_end = cfg.steps * cfg.dt if cfg.steps is not None else cfg.t
    auto = evolve_domain(p, t_end)
    x_min = auto[0] if cfg.x_min is None else cfg.x_min
    x_max = auto[1] if cfg.x_max is None else cfg.x_max
    n = cfg.n or 4096
    state = oracle.initial_state(p, x_min, x_max, n)
    if cfg.steps is not None:
        state = oracle.evolve(state, p, cfg.dt, cfg.steps)
    else:
        state = oracle.evolve_to(state, p, t_end, cfg.dt)
    report = oracle.compare_to_analytic(state, p)
    cols = oracle.snapshot_columns(state, p)
    rep = report.as_dict()
    meta = rep.pop("meta")
    rep_cols = {k: [v] for k, v in rep.items()}
    rep_cols.update({k: [v] for k, v in meta.items()})
    rep_cols["dt"] = [cfg.dt]
    return [
        Artifact("evolve", cols, meta={"t": state.t, "n": n, "x_min": x_min, "x_max": x_max}),
        Artifact("evolve-report", rep_cols, suffix="report"),
    ]


HANDLERS = {
    "fields": cmd_fields,
    "characteristics": cmd_characteristics,
    "shock": cmd_shock,
    "riemann": cmd_riemann,
    "evolve": cmd_evolve,
    "fig1": cmd_fig1,
}


def _extra_path(path: Path, suffix: str, fmt: str) -> Path:
    return path.with_name(f"{path.stem}.{suffix}.{fmt}")


def emit(artifacts: list[Artifact], cfg: RunConfig, command: str, elapsed: float, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    written = []
    if cfg.output is None:
        for art in artifacts:
            text = render_csv(art.command, art.data) if cfg.format == "csv" else render_json(
                art.command, art.data, art.meta)
            stdout.write(text)
        return written
    path = Path(cfg.output)
    path.parent.mkdir(parents=True, exist_ok=True)
    for art in artifacts:
        target = path if not art.suffix else _extra_path(path, art.suffix, cfg.format)
        write_table(target, art.command, art.data, cfg.format, art.meta)
        written.append(target)
    write_sidecar(path, {
        "command": command,
        "version": __version__,
        "backend": _kernels.BACKEND,
        "config": cfg.as_dict(),
        "files": [str(w) for w in written],
        "elapsed_seconds": elapsed,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    })
    return written


def run_command(command: str, cfg: RunConfig, stdout=None):
    start = time.perf_counter()
    artifacts = HANDLERS[command](cfg)
    return emit(artifacts, cfg, command, time.perf_counter() - start, stdout)


def _run_cell(job):
    command, cfg = job
    try:
        run_command(command, cfg)
        return "ok", ""
    except QShockError as exc:
        return exc.tag, str(exc)


def run_sweep(command: str, cfg: RunConfig, jobs: int = 1):
    if command not in HANDLERS:
        raise UsageError(f"--command must be one of {sorted(HANDLERS)}")
    if not cfg.sweep:
        raise UsageError("sweep needs at least one --vary key=v1,v2,... (or a [sweep] section)")
    if cfg.output is None:
        raise UsageError("sweep needs --output <directory>")
    outdir = Path(cfg.output)
    outdir.mkdir(parents=True, exist_ok=True)
    keys = list(cfg.sweep)
    cells = list(itertools.product(*(cfg.sweep[k] for k in keys)))
    jobs_list = []
    for idx, values in enumerate(cells):
        path = outdir / f"cell_{idx:04d}.{cfg.format}"
        cell_cfg = cfg.updated(output=str(path), sweep={}, **dict(zip(keys, values)))
        jobs_list.append((command, cell_cfg))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_cell, jobs_list))
    else:
        results = [_run_cell(j) for j in jobs_list]
    index = {"cell": list(range(len(cells)))}
    for j, k in enumerate(keys):
        index[k] = [_cell_value(v[j]) for v in cells]
    index["file"] = [Path(j[1].output).name for j in jobs_list]
    index["status"] = [r[0] for r in results]
    write_table(outdir / f"index.{cfg.format}", "sweep-index", index, cfg.format)
    return results


def _cell_value(v):
    if isinstance(v, tuple):
        return "|".join(format(x, ".17g") for x in v)
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_common(p: argparse.ArgumentParser):
    g = p.add_argument_group("packet")
    g.add_argument("--hbar", type=float)
    g.add_argument("--m", type=float)
    g.add_argument("--sigma0", type=float)
    g.add_argument("--u0", type=float)
    g.add_argument("--k", type=float)
    g.add_argument("--no-dispersion", dest="dispersive", action="store_const", const=False)
    g = p.add_argument_group("grid and time")
    g.add_argument("--x-min", dest="x_min", type=float)
    g.add_argument("--x-max", dest="x_max", type=float)
    g.add_argument("--n", type=int)
    g.add_argument("--t", type=float)
    g.add_argument("--dt", type=float)
    g.add_argument("--steps", type=int)
    g.add_argument("--t-max", dest="t_max", type=float)
    g.add_argument("--span", type=float)
    g = p.add_argument_group("launch")
    g.add_argument("--x0", dest="launch_x0", type=_float_list, help="comma-separated launch positions")
    g.add_argument("--t0", dest="launch_t0", type=_float_list, help="comma-separated launch times")
    g.add_argument("--family", choices=("plus", "minus", "both"))
    g.add_argument("--mode", choices=("paper", "corrected"))
    g = p.add_argument_group("output")
    g.add_argument("--config", help="INI-style config file; flags override it")
    g.add_argument("--output", help="output file (directory for sweep); stdout if omitted")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--normalized", action="store_const", const=True)


def _float_list(text: str):
    try:
        return tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qshock", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qshock {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    helps = {
        "fields": "sample closed-form packet fields on a grid",
        "characteristics": "emit the characteristic line ensemble",
        "shock": "shock time/position from all detectors side by side",
        "riemann": "Riemann-invariant chart table and drift report",
        "evolve": "run the split-step oracle and compare with closed forms",
        "fig1": "quantum-force curve at t = 0 (unit hbar, m, sigma0; u0 = 10)",
        "sweep": "cross product of configs, one output file per cell",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        _add_common(sp)
        if name == "sweep":
            sp.add_argument("--command", dest="sweep_command", choices=sorted(HANDLERS))
            sp.add_argument("--vary", action="append", default=[], metavar="KEY=V1,V2",
                            help="swept key; repeat for a cross product (launch lists use |)")
            sp.add_argument("--jobs", type=int)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values = {}
    if ns.config:
        try:
            values.update(parse_config_file(ns.config))
        except KeyError as exc:
            raise UsageError(f"--config: {exc.args[0]}") from None
        except (ValueError, OSError) as exc:
            raise UsageError(f"--config: {exc}") from None
    flags = ("hbar", "m", "sigma0", "u0", "k", "dispersive", "x_min", "x_max", "n", "t", "dt",
             "steps", "t_max", "span", "launch_x0", "launch_t0", "family", "mode", "output",
             "format", "normalized", "jobs", "sweep_command")
    for name in flags:
        v = getattr(ns, name, None)
        if v is not None:
            values[name] = v
    if getattr(ns, "vary", None):
        sweep = dict(values.get("sweep", {}))
        for spec in ns.vary:
            try:
                k, vals = parse_sweep_spec(spec)
            except (KeyError, ValueError) as exc:
                raise UsageError(f"--vary: {exc}") from None
            sweep[k] = vals
        values["sweep"] = sweep
    try:
        return RunConfig(**values)
    except (TypeError, ValueError) as exc:
        words = str(exc).split()
        hint = f" (--{words[0]})" if words and words[0] in PARAM_FIELDS else ""
        raise UsageError(f"invalid configuration{hint}: {exc}") from None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise UsageError("missing command; choose one of " + ", ".join(COMMANDS))
        cfg = config_from_args(ns)
        if ns.command == "sweep":
            if cfg.sweep_command is None:
                raise UsageError("sweep needs --command (or [run] command in the config file)")
            run_sweep(cfg.sweep_command, cfg, cfg.jobs)
        else:
            run_command(ns.command, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except QShockError as exc:
        print(f"error: {exc.tag}: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
