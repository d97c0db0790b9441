"""Stochastic energy minimization: sampled estimators + ADAM with a
staircase learning-rate schedule.

Per step: draw a batch from the current model, evaluate local energies,
form the centred gradient estimate (1/N) sum (E_loc - mean) grad log P,
and apply one bias-corrected ADAM update with lr = alpha0 *
gamma^floor(step/1000).  Everything is reproducible from (config, seed):
the step-t batch uses SeedSequence([seed, 1, t]) and the initial
parameter draw SeedSequence([seed, 0]), independent of worker count.
"""

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .ansatz import features, sample_batch, scores, softplus
from .errors import ConfigError, NumericFault
from .hamiltonian import check_stoquastic
from .localenergy import local_energies
from .params import AgmParams, init_params, save_checkpoint
from .runlog import RunLog, StepRecord
from .symmetry import chain_reflection_group, global_flip_group, sym_sample

LR_STAIRCASE_STEPS = 1000


@dataclass
class TrainConfig:
    n_steps: int
    alpha0: float
    gamma: float
    n_samples: int = 4096  # 2**12
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0
    symmetrize: bool = False
    time_budget: float = None  # wall-clock seconds
    sigma0: float = 0.01  # init std-dev
    cap: float = 30.0  # |f| clip inside ratio exponentials
    order: tuple = None  # site permutation the model conditions in
    checkpoint_interval: int = None  # steps between checkpoint writes
    checkpoint_path: str = None

    def __post_init__(self):
        if self.n_samples < 1 or self.n_steps < 0:
            raise ConfigError("train", f"n_samples={self.n_samples}, n_steps={self.n_steps}")
        if not self.alpha0 > 0:
            raise ConfigError("train.alpha0", f"must be > 0, got {self.alpha0}")
        if not 0 < self.gamma <= 1:
            raise ConfigError("train.gamma", f"must lie in (0, 1], got {self.gamma}")
        if not (0 <= self.adam_beta1 < 1 and 0 <= self.adam_beta2 < 1 and self.adam_eps > 0):
            raise ConfigError("train.adam", "beta1, beta2 in [0,1), eps > 0")
        if self.sigma0 < 0:
            raise ConfigError("train.sigma0", "must be >= 0")
        if self.order is not None:
            self.order = tuple(int(k) for k in self.order)
            if sorted(self.order) != list(range(len(self.order))):
                raise ConfigError("train.order",
                                  f"must be a permutation of 0..{len(self.order) - 1}")


def lr_at(cfg, step):
    return cfg.alpha0 * cfg.gamma ** (step // LR_STAIRCASE_STEPS)


@dataclass
class OptimizerState:
    m: AgmParams
    v: AgmParams
    t: int = 0


def init_optimizer(n):
    zeros = lambda: AgmParams(np.zeros(n), np.zeros((n, n)))
    return OptimizerState(m=zeros(), v=zeros(), t=0)


def adam_update(state, grad, lr, beta1=0.9, beta2=0.999, eps=1e-8):
    """One bias-corrected ADAM step; returns (new state, parameter delta)."""
    if not (np.isfinite(grad.bias).all() and np.isfinite(grad.pair).all()):
        raise NumericFault("non-finite gradient, step rejected")
    t = state.t + 1
    m = AgmParams(beta1 * state.m.bias + (1 - beta1) * grad.bias,
                  beta1 * state.m.pair + (1 - beta1) * grad.pair)
    v = AgmParams(beta2 * state.v.bias + (1 - beta2) * grad.bias**2,
                  beta2 * state.v.pair + (1 - beta2) * grad.pair**2)
    c1 = 1 - beta1**t
    c2 = 1 - beta2**t
    delta = AgmParams(-lr * (m.bias / c1) / (np.sqrt(v.bias / c2) + eps),
                      -lr * np.triu((m.pair / c1) / (np.sqrt(v.pair / c2) + eps), k=1))
    return OptimizerState(m=m, v=v, t=t), delta


def estimate_energy(local_values):
    """(mean, stderr) with stderr = sample std (ddof=1) / sqrt(N)."""
    x = np.asarray(local_values, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("need a nonempty 1-d list of local energies")
    mean = float(x.mean())
    stderr = 0.0 if x.size == 1 else float(x.std(ddof=1) / math.sqrt(x.size))
    return mean, stderr


def estimate_gradient(local_values, score_list):
    """Centred estimator (1/N) sum (E_loc - mean) * grad log P.

    score_list holds per-sample gradients in AgmParams layout.  Same
    expectation as the uncentred form (the score has zero mean); the
    centring only removes variance.
    """
    x = np.asarray(local_values, dtype=np.float64)
    if len(score_list) != x.size or x.size == 0:
        raise ValueError("locals and scores must have the same nonzero length")
    w = (x - x.mean()) / x.size
    n = score_list[0].n
    gb = np.zeros(n)
    gp = np.zeros((n, n))
    for wt, sc in zip(w, score_list):
        gb += wt * sc.bias
        gp += wt * sc.pair
    return AgmParams(gb, gp)


def gradient_from_batch(params, S, local_values, group=None):
    """Fast array form of estimate_gradient.

    Plain model: grad bias = A^T w, grad pair = (A * w)^T S (upper part),
    with A[t, i] = 2 s_i (1 - P(s_i|ctx)).  Symmetrised model: the score
    is the softmax-weighted mix over transformed copies, handled by
    stacking (g, t) rows with weights w_t * softmax_g(log P(g s_t)).
    """
    S = np.atleast_2d(np.asarray(S, dtype=np.float64))
    x = np.asarray(local_values, dtype=np.float64)
    w = (x - x.mean()) / x.size
    if group is None or len(group) == 1:
        A = scores(params, S)
        gb = A.T @ w
        gp = np.triu((A * w[:, None]).T @ S, k=1)
        return _gradient_params(gb, gp)
    blocks_S, blocks_A, blocks_w = [], [], []
    LL = np.empty((len(group), S.shape[0]))
    for gi, g in enumerate(group.elements):
        Sg = g.apply_batch(S)
        Fg = features(params, Sg)
        LL[gi] = -softplus(-2.0 * Sg * Fg).sum(axis=1)
        blocks_S.append(Sg)
        blocks_A.append(scores(params, Sg, F=Fg))
    omega = np.exp(LL - LL.max(axis=0)[None, :])
    omega /= omega.sum(axis=0)[None, :]
    for gi in range(len(group)):
        blocks_w.append(w * omega[gi])
    Sall = np.concatenate(blocks_S, axis=0)
    Aall = np.concatenate(blocks_A, axis=0)
    wall = np.concatenate(blocks_w)
    gb = Aall.T @ wall
    gp = np.triu((Aall * wall[:, None]).T @ Sall, k=1)
    return _gradient_params(gb, gp)


def _gradient_params(gb, gp):
    try:
        return AgmParams(gb, gp)
    except ValueError as e:
        raise NumericFault(f"non-finite gradient estimate: {e}") from e


def default_group(ham):
    """Symmetrization default: reflection x global flip on chains, global
    flip otherwise."""
    n = ham.n
    if 1 in ham.graph.shape and n > 1:
        return chain_reflection_group(n, with_flip=True)
    return global_flip_group(n)


def train(ham, cfg, group=None, log_writer=None, on_step=None):
    """Run the optimization loop; returns (params, RunLog).

    Refuses non-stoquastic Hamiltonians.  On a numeric fault the last
    checkpoint is written (if a path is configured) before re-raising.
    log_writer (RunLogWriter) receives each record as it is produced;
    on_step(step, params, record) is a test/inspection hook.  group is
    honored only when cfg.symmetrize is set.
    """
    rep = check_stoquastic(ham)
    if not rep.ok:
        raise ConfigError("hamiltonian", f"not stoquastic: {rep.message}")
    work = ham if cfg.order is None else _permuted(ham, cfg.order)
    if cfg.symmetrize and group is None:
        group = default_group(work)
    if not cfg.symmetrize:
        group = None
    n = work.n
    params = init_params(n, cfg.sigma0, np.random.SeedSequence([cfg.seed, 0]))
    state = init_optimizer(n)
    records = []
    n_clips = 0
    t0 = time.perf_counter()

    def checkpoint():
        if cfg.checkpoint_path is not None:
            save_checkpoint(cfg.checkpoint_path, params, order=cfg.order,
                            seed_info={"seed": cfg.seed, "step": state.t})

    for step in range(cfg.n_steps):
        ss = np.random.SeedSequence([cfg.seed, 1, step])
        if group is not None:
            S = sym_sample(params, group, cfg.n_samples, ss)
        else:
            S = sample_batch(params, cfg.n_samples, ss)
        try:
            eloc, nc = local_energies(work, params, S, group=group, cap=cfg.cap)
            n_clips += nc
            mean, stderr = estimate_energy(eloc)
            grad = gradient_from_batch(params, S, eloc, group=group)
            state, delta = adam_update(state, grad, lr_at(cfg, step),
                                       cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps)
            try:
                params = AgmParams(params.bias + delta.bias, params.pair + delta.pair)
            except ValueError as e:
                raise NumericFault(f"step {step}: parameter update overflowed: {e}") from e
        except NumericFault:
            checkpoint()
            raise
        rec = StepRecord(step=step, t_wall_s=time.perf_counter() - t0, energy=mean,
                         stderr=stderr, lr=lr_at(cfg, step), grad_norm=grad.norm(),
                         n_samples=cfg.n_samples)
        records.append(rec)
        if log_writer is not None:
            log_writer.write_record(rec)
        if on_step is not None:
            on_step(step, params, rec)
        if cfg.checkpoint_interval and (step + 1) % cfg.checkpoint_interval == 0:
            checkpoint()
        if cfg.time_budget is not None and rec.t_wall_s > cfg.time_budget:
            break
    checkpoint()
    log = RunLog(header={"seed": cfg.seed, "n_samples": cfg.n_samples,
                         "symmetrize": cfg.symmetrize},
                 records=records,
                 footer={"status": "ok",
                         "t_total_s": records[-1].t_wall_s if records else 0.0,
                         "n_steps_run": len(records),
                         "n_cap_clips": n_clips})
    if records:
        log.footer["final_energy"] = log.final_energy()
    return params, log


def _permuted(ham, order):
    from .hamiltonian import permuted_spec

    return permuted_spec(ham, order)
