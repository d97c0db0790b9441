"""Parameter container for the autoregressive pairwise ansatz.

A model over n spins has one bias per site and one pair weight per ordered
pair (i, j) with i < j, stored as a strictly upper-triangular (n, n) matrix.
"""

import json
from dataclasses import dataclass

import numpy as np

CHECKPOINT_VERSION = 1


@dataclass
class AgmParams:
    bias: np.ndarray  # (n,)
    pair: np.ndarray  # (n, n), strictly upper-triangular

    def __post_init__(self):
        self.bias = np.asarray(self.bias, dtype=np.float64)
        self.pair = np.asarray(self.pair, dtype=np.float64)
        n = self.bias.shape[0]
        if self.bias.ndim != 1 or self.pair.shape != (n, n):
            raise ValueError(f"shape mismatch: bias {self.bias.shape}, pair {self.pair.shape}")
        if not (np.isfinite(self.bias).all() and np.isfinite(self.pair).all()):
            raise ValueError("parameters must be finite")
        if np.any(np.tril(self.pair) != 0.0):
            raise ValueError("pair block must be strictly upper-triangular")

    @property
    def n(self):
        return self.bias.shape[0]

    def copy(self):
        return AgmParams(self.bias.copy(), self.pair.copy())

    def norm(self):
        return float(np.sqrt(np.sum(self.bias**2) + np.sum(self.pair**2)))


def zero_params(n):
    return AgmParams(np.zeros(n), np.zeros((n, n)))


def init_params(n, sigma0, seed):
    """Independent Gaussian draws, scale sigma0, for bias and upper pairs."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng = np.random.default_rng(ss)
    bias = sigma0 * rng.standard_normal(n)
    pair = sigma0 * rng.standard_normal((n, n))
    pair = np.triu(pair, k=1)
    return AgmParams(bias, pair)


def _pack_upper(pair):
    n = pair.shape[0]
    iu = np.triu_indices(n, k=1)
    return pair[iu]


def _unpack_upper(packed, n):
    pair = np.zeros((n, n))
    pair[np.triu_indices(n, k=1)] = packed
    return pair


def save_checkpoint(path, params, order=None, seed_info=None):
    """Write an .npz checkpoint; float64 values round-trip exactly.

    order is the site permutation the model conditions in (identity if
    None); seed_info is an arbitrary JSON-serialisable provenance dict.
    """
    n = params.n
    order = np.arange(n) if order is None else np.asarray(order, dtype=np.int64)
    if sorted(order.tolist()) != list(range(n)):
        raise ValueError("order must be a permutation of 0..n-1")
    np.savez(
        path,
        version=np.int64(CHECKPOINT_VERSION),
        n=np.int64(n),
        order=order,
        bias=params.bias,
        pair_upper=_pack_upper(params.pair),
        seed_info=np.bytes_(json.dumps(seed_info or {}, sort_keys=True).encode()),
    )


def load_checkpoint(path):
    """Read a checkpoint; returns (AgmParams, order array, seed_info dict)."""
    with np.load(path) as z:
        version = int(z["version"])
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        n = int(z["n"])
        params = AgmParams(z["bias"], _unpack_upper(z["pair_upper"], n))
        order = z["order"].copy()
        seed_info = json.loads(bytes(z["seed_info"]).decode())
    return params, order, seed_info
