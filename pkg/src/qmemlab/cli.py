"""Command-line experiment runner.

Subcommands: build, validate, params, fractal, expansion, simulate, sweep.
Every run that writes files also writes a manifest with the config hash,
seeds, and output checksums; identical config and seed reproduce the
output files byte for byte.

Exit codes: 0 success, 1 validation/config failure, 2 budget exhausted,
3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .fields import field_make
from .laurent import poly_parse
from .families import (
    OPEN,
    TORUS,
    code_from_dict,
    code_to_dict,
    instantiate,
    validate_css,
)
from .linalg import BudgetExceeded, rank, distance, quantum_dimension
from .barriers import (
    barrier_exact,
    barrier_heuristic,
    expansion_check,
    fractal_site_walk,
    fractal_word,
    save_walk,
    symbolic_walk_energy,
    torus_expansion_anchors,
    Walk,
)
from .experiments import ConfigError, run_simulate, run_sweep
from . import reporting


def _load_config(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")


def _load_code_config(path):
    cfg = _load_config(path)
    code_cfg = cfg.get("code", cfg)
    try:
        return code_from_dict(code_cfg), cfg
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad code spec in {path}: {exc}")


def cmd_build(args) -> int:
    t0 = time.time()
    code, cfg = _load_code_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "code.json")
    reporting.write_json(code_to_dict(code), path)
    if code.kind == "quantum":
        rep = validate_css(code)
        print(f"CSS: {'valid' if rep.valid else 'INVALID'}")
        if not rep.valid:
            return 1
    reporting.write_manifest(args.out, cfg, [], [path], time.time() - t0)
    print(f"wrote {path}")
    return 0


def cmd_validate(args) -> int:
    code, _ = _load_code_config(args.config)
    if code.kind != "quantum":
        print("classical code: no CSS condition to check")
        return 0
    rep = validate_css(code)
    if rep.valid:
        print("CSS: valid")
        return 0
    print("CSS: INVALID")
    for i, j, poly in rep.offending:
        print(f"  product entry ({i},{j}) = {poly}")
    return 1


def cmd_params(args) -> int:
    t0 = time.time()
    code, cfg = _load_code_config(args.config)
    bc = OPEN if args.bc == "open" else args.bc
    inst = instantiate(code, args.L, bc)
    row: dict = {"L": args.L, "bc": bc, "n": inst.n}
    if inst.kind == "quantum":
        row["k"] = quantum_dimension(inst)
    else:
        row["k"] = inst.n - rank(inst.H)
    try:
        dres = distance(inst, mode="exact", budget=args.budget)
        row["d"], row["d_exact"] = dres.d, True
        if inst.kind == "quantum":
            row["d_x"], row["d_z"] = dres.details["d_x"], dres.details["d_z"]
    except BudgetExceeded:
        dres = distance(inst, mode="estimate", seed=args.seed or 0)
        row["d"], row["d_exact"] = dres.d, False
    sectors = ["classical"] if inst.kind == "classical" else ["X", "Z"]
    barriers = {}
    for sector in sectors:
        try:
            bres = barrier_exact(inst, sector, budget=args.budget)
            barriers[sector] = (bres.value, True)
        except BudgetExceeded:
            bres = barrier_heuristic(inst, sector)
            barriers[sector] = (bres.value, False)
    row["barrier"] = min(v for v, _ in barriers.values())
    row["barrier_exact"] = all(ex for _, ex in barriers.values())
    if inst.kind == "quantum":
        row["barrier_x"], _ = barriers["X"]
        row["barrier_z"], _ = barriers["Z"]
    print(json.dumps(row, indent=2, sort_keys=True))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "params.json")
        reporting.write_json(row, path)
        reporting.write_manifest(args.out, {**cfg, "L": args.L, "bc": bc},
                                 [args.seed or 0], [path], time.time() - t0)
    return 0


def cmd_fractal(args) -> int:
    t0 = time.time()
    fld = field_make(args.p, args.e)
    f = poly_parse(args.generator, fld, 2)
    lo, _, hi = args.levels.partition(":")
    levels = range(int(lo), int(hi or lo) + 1)
    from .families import make_classical_grid

    code = make_classical_grid(1, {(1, 1): f})
    report = []
    outputs = []
    os.makedirs(args.out, exist_ok=True)
    for lv in levels:
        fw = fractal_word(f, lv)
        flips = fractal_site_walk(f, lv)
        _, peak = symbolic_walk_energy(code, flips)
        bound = 4 * max(lv, 1) * fw.base_weight
        report.append(
            {
                "level": lv,
                "weight": fw.weight,
                "base_weight": fw.base_weight,
                "syndrome_weight": fw.syndrome.weight,
                "walk_len": len(flips),
                "walk_peak_energy": peak,
                "energy_bound": bound,
                "bound_ok": peak <= bound,
            }
        )
        wpath = os.path.join(args.out, f"walk_level{lv}.txt")
        side = fld.p**lv
        save_walk(Walk([(x * side + y, v) for (x, y), v in flips]), wpath)
        outputs.append(wpath)
    rpath = os.path.join(args.out, "fractal_report.json")
    reporting.write_json(report, rpath)
    outputs.append(rpath)
    cfg = {"generator": args.generator, "p": args.p, "e": args.e, "levels": args.levels}
    reporting.write_manifest(args.out, cfg, [], outputs, time.time() - t0)
    print(json.dumps(report, indent=2))
    return 0


def cmd_expansion(args) -> int:
    t0 = time.time()
    code, cfg = _load_code_config(args.config)
    inst = instantiate(code, args.L, TORUS)
    H = inst.H if inst.kind == "classical" else inst.H_X
    anchors = None
    if args.mode == "exhaustive" and inst.boundary == TORUS and min(inst.L) > 2 * args.wmax:
        anchors = torus_expansion_anchors(inst, args.wmax)
    rep = expansion_check(
        H, args.nu, args.wmax, mode=args.mode, anchors=anchors, seed=args.seed or 0
    )
    row = {
        "lambda_min": rep.lambda_min,
        "nu": rep.nu,
        "w_max": rep.w_max,
        "mode": rep.mode,
        "tested": rep.tested,
        "witness_support": sorted(rep.witness.support.items()),
        "L": args.L,
    }
    print(json.dumps(row, indent=2, sort_keys=True))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "expansion.json")
        reporting.write_json(row, path)
        reporting.write_manifest(args.out, {**cfg, "nu": args.nu, "wmax": args.wmax},
                                 [args.seed or 0], [path], time.time() - t0)
    return 0


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    if args.seed is not None:
        cfg["seed"] = args.seed
    result = run_simulate(cfg, args.out, workers=args.workers)
    print(json.dumps({k: result[k] for k in
                      ("t_mem_point", "t_mem_conservative", "t_mem_optimistic", "censored")},
                     indent=2, sort_keys=True))
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.budget is not None:
        cfg["budget_s"] = args.budget
    result = run_sweep(cfg, args.out, workers=args.workers)
    print(json.dumps(result["fits"], indent=2, sort_keys=True))
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmemlab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_required=False):
        sp.add_argument("--config", required=True, help="JSON config path")
        sp.add_argument("--out", required=out_required, help="output directory")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("build", help="emit canonical code files from a spec")
    common(sp, out_required=True)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("validate", help="check the symbolic CSS condition")
    sp.add_argument("--config", required=True)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("params", help="n, k, d, barrier table for an instance")
    common(sp)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--bc", choices=[TORUS, OPEN, "open"], default=TORUS)
    sp.add_argument("--budget", type=int, default=1 << 22)
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("fractal", help="self-similar word and walk reports")
    sp.add_argument("--generator", required=True, help="e.g. '1+x+y'")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--e", type=int, default=1)
    sp.add_argument("--levels", default="0:3", help="lo:hi inclusive")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_fractal)

    sp = sub.add_parser("expansion", help="isoperimetric-expansion check")
    common(sp)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--nu", type=float, default=0.5)
    sp.add_argument("--wmax", type=int, default=8)
    sp.add_argument("--mode", choices=["exhaustive", "stochastic"], default="exhaustive")
    sp.set_defaults(func=cmd_expansion)

    sp = sub.add_parser("simulate", help="memory-time estimate for one instance")
    common(sp, out_required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="memory-time sweep over L and beta with scaling fits")
    common(sp, out_required=True)
    sp.add_argument("--budget", type=float, default=None, help="wall-clock budget seconds")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"validation error [{args.command}]: {exc}", file=sys.stderr)
        return 1
    except (BudgetExceeded, TimeoutError) as exc:
        print(f"budget exhausted [{args.command}]: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error [{args.command}]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
