"""Experiment harness: single memory-time runs and (L, beta) sweeps with
scaling fits, persisted reproducibly.

A sweep estimates the memory time for one code family across lattice sizes
and temperatures, then fits log T_mem against L (exponential scaling) and
against log L (polynomial scaling); the two goodness-of-fits are the
headline diagnostic for whether the family self-corrects at fixed beta.
Censored estimates (success never fell below threshold inside the horizon)
are flagged and excluded from fits.
"""

from __future__ import annotations

import time

import numpy as np

from .fields import field_make
from .laurent import poly_parse, random_poly
from .families import (
    TORUS,
    CodeInstance,
    TannerSpec,
    classical_from_tanner,
    code_from_dict,
    instantiate,
)
from .dynamics import DecoderSpec, GlauberParams, MemoryTimeEstimate, estimate_memory_time
from . import reporting


class ConfigError(ValueError):
    """A config file failed validation; the message names the field."""


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def decoder_from_config(d: dict) -> DecoderSpec:
    _require(isinstance(d, dict) and "kind" in d, "decoder: need an object with 'kind'")
    kind = d["kind"]
    _require(kind in ("min_weight", "lookup", "greedy"), f"decoder.kind: unknown {kind!r}")
    return DecoderSpec(
        kind=kind,
        w_max=int(d.get("w_max", 2)),
        max_rounds=int(d.get("max_rounds", 0)),
        coset_budget=int(d.get("coset_budget", 1 << 16)),
    )


def checkpoints_from_config(d: dict) -> list:
    if isinstance(d, list):
        _require(all(t > 0 for t in d), "checkpoints: times must be positive")
        return [float(t) for t in d]
    _require(isinstance(d, dict), "checkpoints: need a list or a geometric spec")
    t0 = float(d.get("t0", 1.0))
    ratio = float(d.get("ratio", 2.0))
    count = int(d.get("count", 12))
    _require(t0 > 0 and ratio > 1 and count >= 1, "checkpoints: need t0>0, ratio>1, count>=1")
    return [t0 * ratio**i for i in range(count)]


def code_from_config(cfg: dict):
    """Build the symbolic code (or an explicit Tanner instance) named by a config."""
    _require("code" in cfg, "config: missing 'code'")
    code_cfg = cfg["code"]
    if code_cfg.get("family") == "tanner":
        fld = field_make(code_cfg["field"]["p"], code_cfg["field"].get("e", 1))
        return classical_from_tanner(TannerSpec.from_dict(code_cfg), fld)
    if code_cfg.get("family") == "classical_grid" and "entries" not in code_cfg.get(
        "params", {}
    ) and "draw_seed" in code_cfg:
        return _draw_classical_grid(code_cfg)
    return code_from_dict(code_cfg)


def _draw_classical_grid(code_cfg: dict):
    """Random grid family: every h entry a random nonzero combination of
    1, x, y, xy over the configured field, reproducible from draw_seed."""
    from .families import make_classical_grid

    fld = field_make(code_cfg["field"]["p"], code_cfg["field"].get("e", 1))
    m = int(code_cfg["m"])
    rng = np.random.default_rng(int(code_cfg["draw_seed"]))
    monos = [(0, 0), (1, 0), (0, 1), (1, 1)]
    f = {
        (i, j): random_poly(fld, 2, monos, rng)
        for i in range(1, m + 1)
        for j in range(1, m + 1)
    }
    return make_classical_grid(m, f)


def run_memory_estimate(
    inst: CodeInstance,
    beta: float,
    checkpoints: list,
    n_traj: int,
    seed: int,
    decoder: DecoderSpec,
    sector: str = "classical",
    workers: int = 1,
    records_out: list | None = None,
    extra: dict | None = None,
) -> MemoryTimeEstimate:
    params = GlauberParams(beta=beta, checkpoints=checkpoints, n_traj=n_traj, seed=seed)

    def record(traj, t, energy, ok):
        if records_out is not None:
            rec = {"traj": traj, "t": t, "energy": energy, "success": bool(ok)}
            if extra:
                rec.update(extra)
            records_out.append(rec)

    return estimate_memory_time(
        inst, params, decoder, sector=sector, workers=workers, record=record
    )


def run_simulate(cfg: dict, out_dir, workers: int = 1) -> dict:
    """One (code, L, beta) memory-time estimate, persisted with manifest."""
    import os

    t_start = time.time()
    _require("seed" in cfg, "config: stochastic commands need an explicit 'seed'")
    _require(int(cfg.get("N", 0)) >= 1, "config: N (trajectories) must be >= 1")
    code = code_from_config(cfg)
    if isinstance(code, CodeInstance):
        inst = code
    else:
        _require("L" in cfg, "config: missing 'L'")
        inst = instantiate(code, cfg["L"], cfg.get("bc", TORUS))
    decoder = decoder_from_config(cfg.get("decoder", {"kind": "min_weight"}))
    cps = checkpoints_from_config(cfg.get("checkpoints", {}))
    sector = cfg.get("sector", "classical" if inst.kind == "classical" else "X")
    records: list = []
    est = run_memory_estimate(
        inst, float(cfg["beta"]), cps, int(cfg["N"]), int(cfg["seed"]),
        decoder, sector, workers, records,
    )
    os.makedirs(out_dir, exist_ok=True)
    rec_path = os.path.join(out_dir, "records.jsonl")
    est_path = os.path.join(out_dir, "estimate.json")
    csv_path = os.path.join(out_dir, "success_curve.csv")
    reporting.write_jsonl(records, rec_path)
    reporting.write_json(est.to_dict(), est_path)
    lo_hi = est.intervals()
    reporting.write_csv(
        ["t", "successes", "n", "p_hat", "wilson_lo", "wilson_hi"],
        [
            (t, k, est.n_traj, k / est.n_traj, lo, hi)
            for t, k, (lo, hi) in zip(est.checkpoints, est.successes, lo_hi)
        ],
        csv_path,
    )
    outputs = [rec_path, est_path, csv_path]
    if cfg.get("svg"):
        svg_path = os.path.join(out_dir, "success_curve.svg")
        reporting.success_curves_svg(
            [
                {
                    "label": f"beta={est.beta}",
                    "t": est.checkpoints,
                    "p": est.p_hat,
                    "lo": [x[0] for x in lo_hi],
                    "hi": [x[1] for x in lo_hi],
                }
            ],
            svg_path,
        )
        outputs.append(svg_path)
    reporting.write_manifest(out_dir, cfg, [cfg["seed"]], outputs, time.time() - t_start)
    return est.to_dict()


def fit_scaling(Ls: list, t_mems: list) -> dict:
    """Least-squares fits of log T_mem against L and against log L.

    Returns slopes with standard errors and R^2 for the exponential and
    polynomial models; with fewer than three points the errors are null.
    """
    x = np.asarray(Ls, dtype=float)
    y = np.log(np.asarray(t_mems, dtype=float))

    def one_fit(xv):
        if len(xv) < 2:
            return None
        coeffs, res = np.polyfit(xv, y, 1, full=False), None
        pred = np.polyval(coeffs, xv)
        ss_res = float(np.sum((y - pred) ** 2))
        ss_tot = float(np.sum((y - np.mean(y)) ** 2))
        r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else None
        stderr = None
        if len(xv) >= 3:
            dof = len(xv) - 2
            sxx = float(np.sum((xv - np.mean(xv)) ** 2))
            if sxx > 0 and dof > 0:
                stderr = float(np.sqrt(ss_res / dof / sxx))
        return {"slope": float(coeffs[0]), "intercept": float(coeffs[1]),
                "stderr": stderr, "r2": r2}

    return {
        "exponential": one_fit(x),         # log T ~ b * L
        "polynomial": one_fit(np.log(x)),  # log T ~ b * log L
        "n_points": len(x),
    }


def run_sweep(cfg: dict, out_dir, workers: int = 1) -> dict:
    """Memory-time sweep over an L list and a beta grid for one code family.

    Emits per-(L, beta) records and estimates, a success-curve CSV, and a
    scaling-fit report per beta (exponential vs polynomial in L).
    """
    import os

    t_start = time.time()
    _require("seed" in cfg, "config: stochastic commands need an explicit 'seed'")
    _require(int(cfg.get("N", 0)) >= 1, "config: N (trajectories) must be >= 1")
    _require("L" in cfg and isinstance(cfg["L"], list) and cfg["L"], "config: 'L' must be a list")
    _require("beta" in cfg and isinstance(cfg["beta"], list) and cfg["beta"],
             "config: 'beta' must be a list")
    budget_s = float(cfg.get("budget_s", 14400.0))
    code = code_from_config(cfg)
    _require(not isinstance(code, CodeInstance), "sweep: code must be a lattice family")
    decoder = decoder_from_config(cfg.get("decoder", {"kind": "greedy"}))
    cps = checkpoints_from_config(cfg.get("checkpoints", {}))
    sector = cfg.get("sector", "classical" if code.kind == "classical" else "X")
    seed = int(cfg["seed"])
    n_traj = int(cfg["N"])

    os.makedirs(out_dir, exist_ok=True)
    records: list = []
    estimates: list = []
    curve_rows: list = []
    for iL, L in enumerate(cfg["L"]):
        inst = instantiate(code, L, cfg.get("bc", TORUS))
        for ib, beta in enumerate(cfg["beta"]):
            if time.time() - t_start > budget_s:
                raise TimeoutError(
                    f"sweep exceeded budget_s={budget_s}; completed {len(estimates)} combos"
                )
            combo_seed = int(
                np.random.SeedSequence([seed, iL, ib]).generate_state(1)[0]
            )
            est = run_memory_estimate(
                inst, float(beta), cps, n_traj, combo_seed, decoder, sector, workers,
                records, extra={"L": L, "beta": beta},
            )
            estimates.append({"L": L, "beta": beta, **est.to_dict()})
            for t, k, (lo, hi) in zip(est.checkpoints, est.successes, est.intervals()):
                curve_rows.append((L, beta, t, k, n_traj, k / n_traj, lo, hi))

    fits = {}
    for beta in cfg["beta"]:
        pts = [
            (e["L"], e["t_mem_point"])
            for e in estimates
            if e["beta"] == beta and not e["censored"] and e["t_mem_point"] > 0
        ]
        censored = [e["L"] for e in estimates if e["beta"] == beta and e["censored"]]
        entry = {"points": pts, "censored_L": censored}
        if len(pts) >= 2:
            entry.update(fit_scaling([p[0] for p in pts], [p[1] for p in pts]))
        fits[str(beta)] = entry

    rec_path = os.path.join(out_dir, "records.jsonl")
    est_path = os.path.join(out_dir, "estimates.json")
    csv_path = os.path.join(out_dir, "success_curves.csv")
    fit_path = os.path.join(out_dir, "scaling_fit.json")
    reporting.write_jsonl(records, rec_path)
    reporting.write_json(estimates, est_path)
    reporting.write_csv(
        ["L", "beta", "t", "successes", "n", "p_hat", "wilson_lo", "wilson_hi"],
        curve_rows, csv_path,
    )
    reporting.write_json(fits, fit_path)
    outputs = [rec_path, est_path, csv_path, fit_path]
    if cfg.get("svg"):
        for beta in cfg["beta"]:
            curves = []
            for e in estimates:
                if e["beta"] == beta:
                    curves.append(
                        {"label": f"L={e['L']}", "t": e["checkpoints"], "p": e["p_hat"],
                         "lo": e["wilson_lo"], "hi": e["wilson_hi"]}
                    )
            svg_path = os.path.join(out_dir, f"success_beta{beta}.svg")
            reporting.success_curves_svg(curves, svg_path)
            outputs.append(svg_path)
    reporting.write_manifest(
        out_dir, cfg, [seed], outputs, time.time() - t_start,
        budgets={"budget_s": budget_s},
    )
    return {"estimates": estimates, "fits": fits}
