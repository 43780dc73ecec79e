"""Command-line interface: ``rotforge <command> [flags]``.

Data goes to stdout (JSON, or CSV for sweeps); warnings and errors go to
stderr.  Shared settings come from ``--config FILE`` (JSON) and are
overridden by flags given on the command line.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from . import __version__
from .costs import CostTable, ErrorGrid, build_cost_table, cheapest_rotation, expected_raw_inputs, load_protocols, regime
from .dilution import critical_level, dilute, reduces_error
from .noise import NoiseSpec, leading_order, simulate_round
from .circuits import build_dpl_circuit, build_mekl_circuit
from .sweep import run_sweep, sweep_shape, write_csv
from .synthesis import PQFModel, SRAnalytic, SRTable, approximate_angle, gs_rotation_cost
from .verify import run_verify

log = logging.getLogger("rotforge")

REPORT_DIGITS = 12


@dataclass(frozen=True)
class RunConfig:
    eps_raw: float = 1e-3
    l_max: int = 30
    targets: tuple[float, ...] = (1e-15,)
    grid_density: int = 20
    seed: int = 0
    protocols: str | None = None
    sr_table: str | None = None
    format: str | None = None  # None: the command default (CSV for sweeps, JSON otherwise)

    def __post_init__(self):
        if not 0 < self.eps_raw < 0.5:
            raise ValueError("eps_raw must lie in (0, 1/2)")
        if self.l_max < 3:
            raise ValueError("l_max must be >= 3")
        if not self.targets or any(not 0 < t < 1 for t in self.targets):
            raise ValueError("targets must lie in (0, 1)")
        if self.grid_density < 1:
            raise ValueError("grid_density must be >= 1")
        if self.format not in (None, "json", "csv"):
            raise ValueError("format must be json or csv")
        for path in (self.protocols, self.sr_table):
            if path is not None and not Path(path).is_file():
                raise ValueError(f"no such file: {path}")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if "targets" in data:
            data["targets"] = tuple(float(t) for t in data["targets"])
        return cls(**data)

    def to_json(self) -> dict:
        return asdict(self)


def _report(x: float | None) -> float | None:
    """Values are reported to 12 significant digits."""
    if x is None or not math.isfinite(x):
        return x
    return float(f"{x:.{REPORT_DIGITS}g}")


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run configuration (override --config)")
    g.add_argument("--config", help="JSON file with run-configuration keys")
    g.add_argument("--raw", dest="eps_raw", type=float, help="raw magic-state error rate (default 1e-3)")
    g.add_argument("--l-max", dest="l_max", type=int, help="highest level in the cost table (default 30)")
    g.add_argument("--grid-density", dest="grid_density", type=int, help="error-grid points per decade (default 20)")
    g.add_argument("--seed", type=int, help="seed for Monte Carlo checks (default 0)")
    g.add_argument("--protocols", help="JSON file of level-3 protocol definitions")
    g.add_argument("--sr-table", dest="sr_table", help="CSV of synthesis records (epsilon,tcount[,angle])")
    g.add_argument("--format", choices=("json", "csv"), help="output format where both are supported")
    g.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rotforge", description="Magic-state distillation costs for small-angle rotations.")
    ap.add_argument("--version", action="version", version=f"rotforge {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the invariant suite; exit 0 iff every check passes")
    _common(p)
    p.add_argument("--trials", type=int, default=200, help="generic-noise Monte Carlo trials (default 200)")
    p.add_argument("--inject-bug", action="store_true", help="flip the pivot rotation sign (negative control)")

    p = sub.add_parser("simulate", help="exact output error and acceptance of one distillation round")
    _common(p)
    p.add_argument("--l", dest="level", type=int, required=True, help="level of the distilled state (>= 3)")
    p.add_argument("--eps3", type=float, required=True, help="error of each level-3 state")
    p.add_argument("--epsl", type=float, required=True, help="error of each input level-l state")
    p.add_argument("--eta", type=float, required=True, help="flip probability of the pivot rotation")
    p.add_argument("--protocol", choices=("mek", "dp"), default="mek", help="compressed (mek) or uncompressed (dp) round")

    p = sub.add_parser("cost", help="cheapest rotation or magic state at a target error")
    _common(p)
    p.add_argument("--l", dest="level", type=int, required=True, help="level of the rotation or state")
    p.add_argument("--target", type=float, help="error target (default: first config target)")
    p.add_argument("--kind", choices=("R", "M"), default="R", help="R: injected rotation, M: magic state")
    p.add_argument("--import", dest="import_path", help="load a cost table instead of building one")
    p.add_argument("--export", dest="export_path", help="write the cost table to this JSON file")

    p = sub.add_parser("sweep", help="rotation cost per level at a fixed target (CSV)")
    _common(p)
    p.add_argument("--l-range", dest="l_range", help="'LO:HI' or 'HI' (default 3:l_max)")
    p.add_argument("--target", type=float, help="error target (default: first config target)")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--import", dest="import_path", help="load a cost table instead of building one")
    p.add_argument("--shape", action="store_true", help="also print the curve regions to stderr")

    p = sub.add_parser("synth", help="gate-synthesis T-count, and cost when --target is given")
    _common(p)
    p.add_argument("--method", choices=("pqf", "sr"), required=True, help="synthesis T-count model")
    p.add_argument("--eps", type=float, help="synthesis precision for the T-count")
    p.add_argument("--target", type=float, help="total rotation error for a cost estimate")
    p.add_argument("--sr-coefficient", type=float, default=3.0, help="c in c*log2(1/eps) when no SR table is given")

    p = sub.add_parser("angle", help="approximate an angle by a multiple of pi/2^l")
    _common(p)
    p.add_argument("--phi", type=float, required=True, help="angle in radians, in [0, 2 pi)")
    p.add_argument("--tol", type=float, required=True, help="allowed angle error")

    p = sub.add_parser("dilute", help="dilution of a level-l state into level l+1")
    _common(p)
    p.add_argument("--l", dest="level", type=int, required=True, help="level of the input state (>= 2)")
    p.add_argument("--eps", type=float, required=True, help="input error in [0, 1/2)")
    return ap


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
    cfg = RunConfig.from_mapping(data)
    overrides = {
        f.name: getattr(args, f.name)
        for f in fields(RunConfig)
        if f.name != "targets" and getattr(args, f.name, None) is not None
    }
    target = getattr(args, "target", None)
    if target is not None:
        overrides["targets"] = (target,)
    return replace(cfg, **overrides)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _envelope(cfg: RunConfig, args: argparse.Namespace, result: dict) -> dict:
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "verbose", "command") and v is not None}
    return {"version": __version__, "command": args.command, "config": cfg.to_json(), "args": flags, "result": result}


def _emit(obj: dict) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def _table(cfg: RunConfig, import_path: str | None) -> CostTable:
    if import_path:
        return CostTable.load(import_path)
    protocols = load_protocols(cfg.protocols)
    grid = ErrorGrid(density=cfg.grid_density)
    return build_cost_table(cfg.l_max, cfg.eps_raw, grid, protocols)


def cmd_verify(cfg: RunConfig, args) -> int:
    rep = run_verify(pivot_sign=-1 if args.inject_bug else 1, seed=cfg.seed, trials=args.trials)
    _emit(_envelope(cfg, args, rep.to_json()))
    for name in rep.failed():
        print(f"check failed: {name}", file=sys.stderr)
    return 0 if rep.passed else 1


def cmd_simulate(cfg: RunConfig, args) -> int:
    noise = NoiseSpec(args.eps3, args.epsl, args.eta)
    build = build_mekl_circuit if args.protocol == "mek" else build_dpl_circuit
    out = simulate_round(build(args.level), noise)
    lo = leading_order(noise)
    result = {
        "delta": _report(out.delta),
        "p_suc": _report(out.p_suc),
        "p_fail": _report(out.p_fail),
        "leading_order": {"delta": _report(lo.delta), "p_suc": _report(lo.p_suc)},
    }
    _emit(_envelope(cfg, args, result))
    return 0


def _entry_json(entry) -> dict:
    return {
        "kind": entry.kind,
        "level": entry.level,
        "error": entry.error,
        "cost": entry.cost,
        "variant": entry.recipe.variant,
        "raw_inputs_by_level": {str(k): v for k, v in sorted(expected_raw_inputs(entry).items())},
    }


def cmd_cost(cfg: RunConfig, args) -> int:
    table = _table(cfg, args.import_path)
    if args.export_path:
        table.dump(args.export_path)
    target = cfg.targets[0]
    try:
        entry = cheapest_rotation(table, args.level, target) if args.kind == "R" else table.cheapest("M", args.level, target)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    result = _entry_json(entry)
    if args.kind == "R":
        result["regime"] = regime(entry)
    _emit(_envelope(cfg, args, result))
    return 0


def _levels(spec: str | None, l_max: int) -> list[int]:
    if not spec:
        return list(range(3, l_max + 1))
    lo, _, hi = spec.rpartition(":")
    lo_i = int(lo) if lo else 3
    hi_i = int(hi)
    if lo_i < 3 or hi_i < lo_i:
        raise ValueError("l-range must satisfy 3 <= LO <= HI")
    return list(range(lo_i, hi_i + 1))


def _sr_model(cfg: RunConfig, coefficient: float = 3.0):
    return SRTable.from_csv(cfg.sr_table) if cfg.sr_table else SRAnalytic(coefficient)


def cmd_sweep(cfg: RunConfig, args) -> int:
    levels = _levels(args.l_range, cfg.l_max)
    if not args.import_path and args.l_range:
        # lower levels never depend on higher ones, so stop the build at the last level asked for
        cfg = replace(cfg, l_max=levels[-1])
    table = _table(cfg, args.import_path)
    if levels[-1] > table.l_max:
        raise ValueError(f"imported table stops at level {table.l_max}")
    rows = run_sweep(table, cfg.targets[0], levels, _sr_model(cfg))
    for r in rows:
        if r.status != "ok":
            print(f"warning: target {cfg.targets[0]:g} unreachable at level {r.level}", file=sys.stderr)
    if (cfg.format or "csv") == "json":
        text = json.dumps(_envelope(cfg, args, {"rows": [
            {"level": r.level, "cost_mekl": r.cost_mekl, "cost_pqf": r.cost_pqf, "cost_sr": r.cost_sr,
             "regime": r.regime, "status": r.status} for r in rows]}), indent=2) + "\n"
    else:
        text = write_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.shape:
        s = sweep_shape(rows)
        print(
            f"peak {s.peak_level}, decay from {s.onset_level} (l_c {s.critical_level:.2f}), "
            f"gentler region {list(s.gentle_levels) or 'absent'} (slope ratio {s.slope_ratio:.3f}), "
            f"decay slope {s.decay_slope:.3f} log2/level",
            file=sys.stderr,
        )
    return 0


def cmd_synth(cfg: RunConfig, args) -> int:
    model = PQFModel() if args.method == "pqf" else _sr_model(cfg, args.sr_coefficient)
    result: dict = {"method": args.method}
    if args.eps is not None:
        result["eps"] = args.eps
        result["tcount"] = _report(model.tcount(args.eps))
    if args.target is not None:
        table = _table(replace(cfg, l_max=3), None)
        m3 = [(e.error, e.cost) for e in table.frontier("M", 3)]
        gs = gs_rotation_cost(model, m3, args.target)
        result["gs"] = {"target": args.target, "cost": gs.cost, "eps_gs": gs.eps_gs, "eps3": gs.eps3,
                        "tcount": gs.tcount, "m3_cost": gs.m3_cost, "error": gs.error}
    if len(result) == 1:
        raise ValueError("give --eps or --target")
    _emit(_envelope(cfg, args, result))
    return 0


def cmd_angle(cfg: RunConfig, args) -> int:
    a = approximate_angle(args.phi, args.tol)
    level, n = a.reduced()
    result = {"l": level, "n": n, "err": _report(a.achieved_error), "grid_l": a.level, "grid_n": a.n}
    _emit(_envelope(cfg, args, result))
    return 0


def cmd_dilute(cfg: RunConfig, args) -> int:
    res = dilute(args.level, args.eps)
    result = {
        "lambda": _report(res.lam),
        "eps_out": _report(res.eps_out),
        "out_level": res.level,
        "reduces_error": reduces_error(args.level, args.eps),
        "critical_level": critical_level(args.eps) if args.eps > 0 else None,
    }
    _emit(_envelope(cfg, args, result))
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "cost": cmd_cost,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
    "angle": cmd_angle,
    "dilute": cmd_dilute,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
