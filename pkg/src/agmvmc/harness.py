"""Experiment orchestration behind the CLI subcommands.

Every command takes a parsed ExperimentConfig and an output directory,
writes its artifacts there (JSONL logs, checkpoints, CSV tables, JSON
reports), and returns the report dict.  Faults follow the exit-code
contract: ConfigError -> 2, NumericFault -> 3.
"""

import json
import math
import time
from dataclasses import asdict, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, NumericFault
from .exact import (all_configs, exact_conditionals, exact_weights, ground_state_dense,
                    variational_energy_exact)
from .hamiltonian import HamiltonianSpec, sample_disorder
from .runlog import RunLogWriter, export_csv
from .screening import evaluate_poly, order_profile, poly_to_csv, screen_exact
from .vmc import train


def _outdir(cfg, out_dir):
    out = Path(out_dir if out_dir is not None else cfg.output.run_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _need_train(cfg):
    if cfg.train is None:
        raise ConfigError("train", "this command requires a train block")
    return cfg.train


def _header(cfg, tcfg):
    return {
        "config": cfg.raw,
        "code_version": __version__,
        "seed": tcfg.seed,
        "n_sites": cfg.hamiltonian.n,
        "started_utc": datetime.now(timezone.utc).isoformat(),
    }


def _run_one(ham, tcfg, log_path, header):
    """Train with a streaming log; footer records faults before re-raising."""
    with RunLogWriter(log_path) as writer:
        writer.write_header(header)
        try:
            params, log = train(ham, tcfg, log_writer=writer)
        except NumericFault as e:
            writer.write_footer({"status": "numeric_fault", "error": str(e)})
            raise
        writer.write_footer(log.footer)
    return params, log


def cmd_train(cfg, out_dir=None):
    tcfg = _need_train(cfg)
    out = _outdir(cfg, out_dir)
    tcfg = replace(tcfg, checkpoint_path=str(out / "params.npz"))
    _, log = _run_one(cfg.hamiltonian, tcfg, out / "train.jsonl", _header(cfg, tcfg))
    return log.footer


def cmd_ed(cfg, out_dir=None):
    """Dense ground state + a loose-tolerance recompute as a self-check."""
    ham = cfg.hamiltonian
    out = _outdir(cfg, out_dir)
    if ham.n > 16:
        raise ConfigError("hamiltonian", f"n={ham.n} too large for dense diagonalization (max 16)")
    tol = cfg.oracle.tol
    state = ground_state_dense(ham, tol=tol)
    loose = ground_state_dense(ham, tol=min(tol * 1e3, 1e-6))
    report = {
        "n": ham.n,
        "variant": ham.variant,
        "g": ham.g,
        "energy": state.energy,
        "energy_per_site": state.energy / ham.n,
        "residual": state.residual,
        "tol": tol,
        "energy_loose": loose.energy,
        "loose_agreement": abs(state.energy - loose.energy),
    }
    (out / "ed.json").write_text(json.dumps(report, indent=2, sort_keys=True))
    if cfg.oracle.dump_weights:
        w = exact_weights(state)
        S = all_configs(ham.n)
        with open(out / "weights.csv", "w") as fh:
            fh.write("index,config,weight\n")
            for idx in range(len(w)):
                cfgstr = "".join("+" if v > 0 else "-" for v in S[idx])
                fh.write(f"{idx},{cfgstr},{w[idx]:.17g}\n")
    return report


def cmd_exact_learn(cfg, out_dir=None):
    """ED -> weights -> per-site screening -> order profiles + checks."""
    ham = cfg.hamiltonian
    out = _outdir(cfg, out_dir)
    if ham.n > 12:
        raise ConfigError("hamiltonian", f"n={ham.n} too large for full-order screening (max 12)")
    state = ground_state_dense(ham, tol=cfg.oracle.tol)
    w = exact_weights(state)
    n = ham.n
    max_err = 0.0
    flagged = {}
    agg = {}
    rows = []
    for i in range(n):
        max_order = n - 1 - i if cfg.oracle.max_order is None else min(cfg.oracle.max_order, n - 1 - i)
        res = screen_exact(w, i, max_order=max_order, floor=cfg.oracle.floor)
        poly_to_csv(res.poly, out / f"poly_site{i}.csv")
        if res.flagged_contexts:
            flagged[i] = list(res.flagged_contexts)
        F = evaluate_poly(res.poly, n)
        tab = exact_conditionals(w, i)
        ok = ~tab.flagged
        recon = 1.0 / (1.0 + np.exp(-2.0 * F[ok]))
        max_err = max(max_err, float(np.abs(recon - tab.p_up[ok]).max()))
        for order, (mx, l1) in order_profile(res.poly).items():
            rows.append((str(i), order, mx, l1))
            amx, al1 = agg.get(order, (0.0, 0.0))
            agg[order] = (max(amx, mx), al1 + l1)
    for order in sorted(agg):
        rows.append(("all", order, agg[order][0], agg[order][1]))
    with open(out / "orders.csv", "w") as fh:
        fh.write("site,order,max_abs,l1\n")
        for site, order, mx, l1 in rows:
            fh.write(f"{site},{order},{mx:.17g},{l1:.17g}\n")
    report = {
        "n": n,
        "variant": ham.variant,
        "g": ham.g,
        "max_conditional_error": max_err,
        "flagged_contexts": {str(k): v for k, v in flagged.items()},
        "ed_energy": state.energy,
        "ed_residual": state.residual,
    }
    (out / "exact_learn.json").write_text(json.dumps(report, indent=2, sort_keys=True))
    return report


def cmd_hyperopt(cfg, out_dir=None):
    """Random search over (alpha0, gamma); short low-sample trial runs.

    All trial draws come from the search seed up front, so the table is
    reproducible even when individual trials fault.
    """
    tcfg = _need_train(cfg)
    out = _outdir(cfg, out_dir)
    hyper = cfg.hyperopt
    rng = np.random.default_rng(np.random.SeedSequence([cfg.search_seed]))
    lo, hi = hyper.alpha0_range
    alphas = np.exp(rng.uniform(math.log(lo), math.log(hi), size=hyper.trials))
    glo, ghi = hyper.gamma_range
    gammas = rng.uniform(glo, ghi, size=hyper.trials)
    results = []
    for k in range(hyper.trials):
        trial_cfg = replace(tcfg, alpha0=float(alphas[k]), gamma=float(gammas[k]),
                            n_steps=hyper.steps, n_samples=hyper.samples,
                            checkpoint_path=None)
        header = _header(cfg, trial_cfg)
        header["trial"] = k
        header["alpha0"] = trial_cfg.alpha0
        header["gamma"] = trial_cfg.gamma
        try:
            _, log = _run_one(cfg.hamiltonian, trial_cfg, out / f"trial_{k:03d}.jsonl", header)
            results.append((k, trial_cfg.alpha0, trial_cfg.gamma, log.final_energy(), "ok"))
        except NumericFault:
            results.append((k, trial_cfg.alpha0, trial_cfg.gamma, math.nan, "numeric_fault"))
    with open(out / "trials.csv", "w") as fh:
        fh.write("trial,alpha0,gamma,final_energy,status\n")
        for k, a, gm, e, status in results:
            fh.write(f"{k},{a!r},{gm!r},{e!r},{status}\n")
    ok = [r for r in results if r[4] == "ok"]
    if not ok:
        raise NumericFault("every hyperopt trial faulted")
    best = min(ok, key=lambda r: r[3])
    report = {"trial": best[0], "alpha0": best[1], "gamma": best[2],
              "final_energy": best[3], "n_trials": hyper.trials, "n_failed": len(results) - len(ok)}
    (out / "best.json").write_text(json.dumps(report, indent=2, sort_keys=True))
    return report


def cmd_disorder_sweep(cfg, out_dir=None):
    """Train per disorder realization; couplings seeded base_seed + index.

    Realization r trains with seed train.seed + r.  Faults are isolated:
    a failed realization is recorded and skipped in the summary stats.
    For lattices small enough to diagonalize, each realization's report
    row also carries the dense ground energy and the exactly evaluated
    final variational energy.
    """
    tcfg = _need_train(cfg)
    ham = cfg.hamiltonian
    if ham.variant != "DTIM":
        raise ConfigError("hamiltonian.variant", "disorder-sweep requires the DTIM variant")
    out = _outdir(cfg, out_dir)
    rows = []
    finals = []
    for r in range(cfg.sweep.realizations):
        dseed = cfg.sweep.base_seed + r
        ham_r = HamiltonianSpec(variant="DTIM", graph=ham.graph, g=ham.g,
                                couplings=sample_disorder(ham.graph, dseed),
                                z_field=ham.z_field)
        rdir = out / f"real_{r:02d}"
        rdir.mkdir(parents=True, exist_ok=True)
        run_cfg = replace(tcfg, seed=tcfg.seed + r, checkpoint_path=str(rdir / "params.npz"))
        header = _header(cfg, run_cfg)
        header["realization"] = r
        header["disorder_seed"] = dseed
        row = {"realization": r, "disorder_seed": dseed, "train_seed": run_cfg.seed,
               "status": "ok", "final_energy": math.nan,
               "e_var_exact": math.nan, "e0_exact": math.nan}
        try:
            params, log = _run_one(ham_r, run_cfg, rdir / "train.jsonl", header)
            row["final_energy"] = log.final_energy()
            if ham.n <= 16:
                state = ground_state_dense(ham_r, tol=cfg.oracle.tol)
                row["e0_exact"] = state.energy
                row["e_var_exact"] = variational_energy_exact(ham_r, params)
            finals.append(row["final_energy"])
        except NumericFault as e:
            row["status"] = "numeric_fault"
            row["error"] = str(e)
        rows.append(row)
    cols = ("realization", "disorder_seed", "train_seed", "status",
            "final_energy", "e_var_exact", "e0_exact")
    with open(out / "realizations.csv", "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c])
                              for c in cols) + "\n")
    n_ok = len(finals)
    mean = float(np.mean(finals)) if finals else math.nan
    stderr = float(np.std(finals, ddof=1) / math.sqrt(n_ok)) if n_ok > 1 else 0.0
    summary = {"g": ham.g, "mean_energy": mean, "stderr": stderr,
               "n_ok": n_ok, "n_failed": len(rows) - n_ok}
    with open(out / "summary.csv", "w") as fh:
        fh.write("g,mean_energy,stderr,n_ok,n_failed\n")
        fh.write(f"{ham.g!r},{mean!r},{stderr!r},{n_ok},{len(rows) - n_ok}\n")
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    return summary


def cmd_export_csv(log_path, out_dir=None):
    log_path = Path(log_path)
    if not log_path.exists():
        raise ConfigError("<log>", f"run log not found: {log_path}")
    dest_dir = Path(out_dir) if out_dir is not None else log_path.parent
    dest_dir.mkdir(parents=True, exist_ok=True)
    dest = dest_dir / (log_path.stem + ".csv")
    try:
        return export_csv(log_path, dest)
    except ValueError as e:
        raise ConfigError("<log>", str(e)) from e
