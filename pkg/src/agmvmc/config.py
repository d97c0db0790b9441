"""Experiment configs: JSON files validated against a strict schema.

Top-level keys: hamiltonian (required), train, oracle, output, hyperopt,
sweep, search_seed.  Unknown keys anywhere are rejected with the field
path.  See README for the full schema and defaults.
"""

import json
from dataclasses import dataclass, field

from .errors import ConfigError
from .hamiltonian import VARIANTS, HamiltonianSpec, sample_disorder
from .lattice import build_square
from .vmc import TrainConfig

_MISSING = object()


def _block(raw, name, allowed):
    blk = raw.get(name, {})
    if not isinstance(blk, dict):
        raise ConfigError(name, f"must be an object, got {type(blk).__name__}")
    unknown = set(blk) - set(allowed)
    if unknown:
        raise ConfigError(f"{name}.{sorted(unknown)[0]}", "unknown key")
    return blk


def _get(blk, path, key, types, default=_MISSING):
    if key not in blk:
        if default is _MISSING:
            raise ConfigError(f"{path}.{key}", "required key missing")
        return default
    v = blk[key]
    if isinstance(v, bool) and bool not in types:
        raise ConfigError(f"{path}.{key}", "expected a number, got a boolean")
    if not isinstance(v, types):
        names = "/".join(t.__name__ for t in types)
        raise ConfigError(f"{path}.{key}", f"expected {names}, got {type(v).__name__}")
    return v


@dataclass
class OracleConfig:
    tol: float = 1e-12
    max_order: int = None
    dump_weights: bool = False
    floor: float = 1e-12


@dataclass
class OutputConfig:
    run_dir: str = "runs/run"
    checkpoint_interval: int = None


@dataclass
class HyperoptConfig:
    trials: int = 30
    steps: int = 10000
    samples: int = 256  # 2**8
    alpha0_range: tuple = (1e-4, 1e-2)
    gamma_range: tuple = (0.8, 1.0)


@dataclass
class SweepConfig:
    realizations: int = 1
    base_seed: int = 0


@dataclass
class ExperimentConfig:
    hamiltonian: HamiltonianSpec
    train: TrainConfig = None
    oracle: OracleConfig = field(default_factory=OracleConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    hyperopt: HyperoptConfig = field(default_factory=HyperoptConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    search_seed: int = 0
    raw: dict = field(default_factory=dict)


def build_hamiltonian(blk):
    variant = _get(blk, "hamiltonian", "variant", (str,))
    if variant not in VARIANTS:
        raise ConfigError("hamiltonian.variant", f"{variant!r} not one of {VARIANTS}")
    lx = _get(blk, "hamiltonian", "lx", (int,))
    ly = _get(blk, "hamiltonian", "ly", (int,))
    g = float(_get(blk, "hamiltonian", "g", (int, float)))
    alpha = float(_get(blk, "hamiltonian", "alpha", (int, float), 0.0))
    z_field = float(_get(blk, "hamiltonian", "z_field", (int, float), 0.0))
    if lx < 1 or ly < 1:
        raise ConfigError("hamiltonian.lx", f"lattice shape ({lx}, {ly}) invalid")
    graph = build_square(lx, ly, with_nnn=(variant == "ANNNI"))
    couplings = None
    if variant == "DTIM":
        disorder_seed = _get(blk, "hamiltonian", "disorder_seed", (int,))
        couplings = sample_disorder(graph, disorder_seed)
    elif "disorder_seed" in blk:
        raise ConfigError("hamiltonian.disorder_seed", f"{variant} takes no disorder seed")
    try:
        return HamiltonianSpec(variant=variant, graph=graph, g=g, alpha=alpha,
                               couplings=couplings, z_field=z_field)
    except ValueError as e:
        raise ConfigError("hamiltonian", str(e)) from e


_HAM_KEYS = ("variant", "lx", "ly", "g", "alpha", "disorder_seed", "z_field")
_TRAIN_KEYS = ("n_steps", "alpha0", "gamma", "n_samples", "adam_beta1", "adam_beta2",
               "adam_eps", "seed", "symmetrize", "time_budget", "sigma0", "cap", "order")
_ORACLE_KEYS = ("tol", "max_order", "dump_weights", "floor")
_OUTPUT_KEYS = ("run_dir", "checkpoint_interval")
_HYPEROPT_KEYS = ("trials", "steps", "samples", "alpha0_range", "gamma_range")
_SWEEP_KEYS = ("realizations", "base_seed")


def _build_train(blk, checkpoint_interval):
    t = _get(blk, "train", "time_budget", (int, float), None)
    order = _get(blk, "train", "order", (list,), None)
    try:
        return TrainConfig(
            n_steps=_get(blk, "train", "n_steps", (int,)),
            alpha0=float(_get(blk, "train", "alpha0", (int, float))),
            gamma=float(_get(blk, "train", "gamma", (int, float))),
            n_samples=_get(blk, "train", "n_samples", (int,), 4096),
            adam_beta1=float(_get(blk, "train", "adam_beta1", (int, float), 0.9)),
            adam_beta2=float(_get(blk, "train", "adam_beta2", (int, float), 0.999)),
            adam_eps=float(_get(blk, "train", "adam_eps", (int, float), 1e-8)),
            seed=_get(blk, "train", "seed", (int,), 0),
            symmetrize=_get(blk, "train", "symmetrize", (bool,), False),
            time_budget=None if t is None else float(t),
            sigma0=float(_get(blk, "train", "sigma0", (int, float), 0.01)),
            cap=float(_get(blk, "train", "cap", (int, float), 30.0)),
            order=None if order is None else tuple(order),
            checkpoint_interval=checkpoint_interval,
        )
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError("train", str(e)) from e


def parse_config(raw):
    """Validate a parsed JSON dict into an ExperimentConfig."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    allowed = ("hamiltonian", "train", "oracle", "output", "hyperopt", "sweep", "search_seed")
    unknown = set(raw) - set(allowed)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    if "hamiltonian" not in raw:
        raise ConfigError("hamiltonian", "required block missing")
    ham = build_hamiltonian(_block(raw, "hamiltonian", _HAM_KEYS))

    blk = _block(raw, "output", _OUTPUT_KEYS)
    output = OutputConfig(
        run_dir=_get(blk, "output", "run_dir", (str,), "runs/run"),
        checkpoint_interval=_get(blk, "output", "checkpoint_interval", (int,), None),
    )

    train = None
    if "train" in raw:
        train = _build_train(_block(raw, "train", _TRAIN_KEYS), output.checkpoint_interval)
        if train.order is not None and sorted(train.order) != list(range(ham.n)):
            raise ConfigError("train.order", f"must be a permutation of 0..{ham.n - 1}")

    blk = _block(raw, "oracle", _ORACLE_KEYS)
    floor = _get(blk, "oracle", "floor", (int, float), 1e-12)
    oracle = OracleConfig(
        tol=float(_get(blk, "oracle", "tol", (int, float), 1e-12)),
        max_order=_get(blk, "oracle", "max_order", (int,), None),
        dump_weights=_get(blk, "oracle", "dump_weights", (bool,), False),
        floor=None if floor is None else float(floor),
    )
    if oracle.tol <= 0:
        raise ConfigError("oracle.tol", "must be > 0")

    blk = _block(raw, "hyperopt", _HYPEROPT_KEYS)
    a_range = _get(blk, "hyperopt", "alpha0_range", (list,), [1e-4, 1e-2])
    g_range = _get(blk, "hyperopt", "gamma_range", (list,), [0.8, 1.0])
    hyper = HyperoptConfig(
        trials=_get(blk, "hyperopt", "trials", (int,), 30),
        steps=_get(blk, "hyperopt", "steps", (int,), 10000),
        samples=_get(blk, "hyperopt", "samples", (int,), 256),
        alpha0_range=tuple(float(x) for x in a_range),
        gamma_range=tuple(float(x) for x in g_range),
    )
    for name, rng in (("alpha0_range", hyper.alpha0_range), ("gamma_range", hyper.gamma_range)):
        if len(rng) != 2 or not rng[0] < rng[1] or rng[0] <= 0:
            raise ConfigError(f"hyperopt.{name}", f"need 0 < lo < hi, got {rng}")
    if hyper.trials < 1:
        raise ConfigError("hyperopt.trials", "must be >= 1")

    blk = _block(raw, "sweep", _SWEEP_KEYS)
    sweep = SweepConfig(
        realizations=_get(blk, "sweep", "realizations", (int,), 1),
        base_seed=_get(blk, "sweep", "base_seed", (int,), 0),
    )
    if sweep.realizations < 1:
        raise ConfigError("sweep.realizations", "must be >= 1")

    search_seed = _get(raw, "<root>", "search_seed", (int,), 0)
    return ExperimentConfig(hamiltonian=ham, train=train, oracle=oracle, output=output,
                            hyperopt=hyper, sweep=sweep, search_seed=search_seed, raw=raw)


def load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError("<file>", f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError("<file>", f"invalid JSON in {path}: {e}")
    return parse_config(raw)
