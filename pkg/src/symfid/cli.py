"""Command-line entry point: ``symfid <command> [options]``.

Every command produces a list of flat records written as CSV (header row,
comma separated, LF line endings) or as a JSON array of objects. Reals are
written with 12 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Callable

from symfid import counterexample as ce
from symfid import lu_opt, symfid_opt
from symfid.errors import DomainError
from symfid.symstate import dicke, overlap

COMMANDS = ("table1", "fig1", "limits", "ce-sweep", "inverse", "lu-check", "symfid", "oracle")

# (N, k) -> reference F^S of |D_N^(k)> against the symmetric W_N^(1) states
TABLE_I = {
    (4, 2): 0.5,
    (5, 2): 0.477,
    (6, 2): 0.465,
    (6, 3): 0.4,
    (7, 2): 0.457,
    (7, 3): 0.383,
    (8, 2): 0.451,
    (8, 3): 0.372,
    (8, 4): 0.344,
}
LIMITS = {2: 0.422, 3: 0.322, 4: 0.271, 5: 0.238, 6: 0.215, 7: 0.197, 8: 0.183}
LARGE_N = 10_000

Record = dict[str, Any]


@dataclass
class RunConfig:
    command: str
    format: str = "csv"
    out: str | None = None
    seed: int = 42
    n: int | None = None
    k: int | None = None
    kp: int | None = None
    n_max: int = 100
    k_max: int = 8
    eps_min: float = 1e-4
    eps_max: float = 1.0
    points: int = 9
    trials: int = 20
    restarts: int = lu_opt.DEFAULT_RESTARTS
    grid: tuple[int, int, int] = symfid_opt.GRID_SHAPE
    starts: int = symfid_opt.N_STARTS
    tol: float = symfid_opt.PARAM_TOL
    grid_density: int = 16
    notes: list[str] = field(default_factory=list)


def _opt(cfg: RunConfig, n: int, k: int, kp: int) -> symfid_opt.OptResult:
    return symfid_opt.max_sym_fidelity(n, k, kp, grid=cfg.grid, starts=cfg.starts, tol=cfg.tol)


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [f"--{x.replace('_', '-')}" for x in names if getattr(cfg, x) is None]
    if missing:
        raise DomainError(f"{cfg.command} requires {', '.join(missing)}")


def run_table1(cfg: RunConfig) -> list[Record]:
    rows = []
    for n, k in TABLE_I:
        closed = symfid_opt.closed_form_k1(n, k)
        numeric = _opt(cfg, n, k, 1).value
        rows.append({"N": n, "k": k, "fs_closed": closed, "fs_numeric": numeric, "abs_diff": abs(closed - numeric)})
    return rows


def run_fig1(cfg: RunConfig) -> list[Record]:
    if cfg.n_max < 4:
        raise DomainError(f"--n-max must be >= 4, got {cfg.n_max}")
    rows = []
    for n in range(4, cfg.n_max + 1):
        for k in range(2, n // 2 + 1):
            rows.append({"N": n, "k": k, "fs_symmetric": _opt(cfg, n, 1, k).value, "f_full": 1.0})
    return rows


def run_limits(cfg: RunConfig) -> list[Record]:
    if cfg.k_max < 2:
        raise DomainError(f"--k-max must be >= 2, got {cfg.k_max}")
    big = cfg.n or LARGE_N
    rows = []
    for k in range(2, cfg.k_max + 1):
        lim = symfid_opt.limit_k1(k)
        at_n = symfid_opt.closed_form_k1(big, k)
        rows.append({"k": k, "limit": lim, "fs_at_large_n": at_n, "abs_diff": abs(lim - at_n)})
    return rows


def run_ce_sweep(cfg: RunConfig) -> list[Record]:
    _require(cfg, "n", "k")
    sweep = ce.eps_sweep(cfg.n, cfg.k, cfg.eps_min, cfg.eps_max, cfg.points)
    return [{"eps": r.eps, "fidelity": r.fidelity, "residual_norm": r.residual_norm} for r in sweep.records]


def run_inverse(cfg: RunConfig) -> list[Record]:
    _require(cfg, "n", "k")
    state = ce.inverse_image_state(cfg.n, cfg.k)
    mods = [abs(overlap(state, ce.inverse_image_numeric(cfg.n, cfg.k, e)).value) for e in (0.1, 0.7)]
    return [
        {
            "N": cfg.n,
            "k": cfg.k,
            "fidelity": overlap(dicke(cfg.n, cfg.k), state).fidelity,
            "overlap_eps_0.1": mods[0],
            "overlap_eps_0.7": mods[1],
        }
    ]


def run_lu_check(cfg: RunConfig) -> list[Record]:
    _require(cfg, "n")
    results = lu_opt.lu_equality_check(cfg.n, cfg.trials, cfg.restarts, cfg.seed)
    cfg.notes.append(f"seed={cfg.seed} max_gap={max(abs(r.gap) for r in results):.12g}")
    return [
        {"trial": t, "value_independent": r.value_independent, "value_symmetric": r.value_symmetric, "gap": r.gap}
        for t, r in enumerate(results)
    ]


def run_symfid(cfg: RunConfig) -> list[Record]:
    _require(cfg, "n", "k", "kp")
    r = _opt(cfg, cfg.n, cfg.k, cfg.kp)
    return [
        {
            "N": cfg.n,
            "k": cfg.k,
            "kp": cfg.kp,
            "fs": r.value,
            "x": r.argmax.x,
            "xp": r.argmax.xp,
            "y": r.argmax.y,
            "iterations": r.iterations,
            "converged": r.converged,
        }
    ]


def run_oracle(cfg: RunConfig) -> list[Record]:
    _require(cfg, "n", "k", "kp")
    brute = symfid_opt.brute_force_sym_fidelity(dicke(cfg.n, cfg.k), cfg.n, cfg.kp, cfg.grid_density)
    formula = _opt(cfg, cfg.n, cfg.k, cfg.kp).value
    return [
        {"N": cfg.n, "k": cfg.k, "kp": cfg.kp, "fs_oracle": brute, "fs_formula": formula, "abs_diff": abs(brute - formula)}
    ]


RUNNERS: dict[str, Callable[[RunConfig], list[Record]]] = {
    "table1": run_table1,
    "fig1": run_fig1,
    "limits": run_limits,
    "ce-sweep": run_ce_sweep,
    "inverse": run_inverse,
    "lu-check": run_lu_check,
    "symfid": run_symfid,
    "oracle": run_oracle,
}


def _cell(v: Any) -> Any:
    if isinstance(v, bool):
        return v
    if isinstance(v, float):
        return float(format(v, ".12g"))
    return v


def _csv_cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def render(records: list[Record], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{k: _cell(v) for k, v in r.items()} for r in records], indent=1) + "\n"
    buf = io.StringIO()
    if records:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(records[0].keys())
        for r in records:
            writer.writerow(_csv_cell(v) for v in r.values())
    return buf.getvalue()


def _grid(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be three comma-separated integers, got {text!r}")
    if len(parts) != 3 or min(parts) < 2:
        raise argparse.ArgumentTypeError(f"grid must be three integers >= 2, got {text!r}")
    return parts


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symfid", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--kp", type=int)
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--eps-min", type=float, default=1e-4)
    p.add_argument("--eps-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=9)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--restarts", type=int, default=lu_opt.DEFAULT_RESTARTS)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--grid", type=_grid, default=symfid_opt.GRID_SHAPE, help="coarse grid for x,xp,y (default 65,65,33)")
    p.add_argument("--starts", type=int, default=symfid_opt.N_STARTS, help="simplex refinements from the best grid points")
    p.add_argument("--tol", type=float, default=symfid_opt.PARAM_TOL, help="simplex parameter tolerance")
    p.add_argument("--grid-density", type=int, default=16, help="points per angle in the oracle search")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output path (default: standard output)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(**vars(args))
    try:
        records = RUNNERS[cfg.command](cfg)
    except DomainError as exc:
        parser.print_usage(sys.stderr)
        print(f"symfid: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError) as exc:
        print(f"symfid: error: {exc}", file=sys.stderr)
        return 1
    text = render(records, cfg.format)
    try:
        if cfg.out:
            with open(cfg.out, "w", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"symfid: error: cannot write output: {exc}", file=sys.stderr)
        return 1
    for note in cfg.notes:
        print(f"# {note}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
