"""Dense small-system ground truth.

Basis-index convention (shared by every module): bit b of the index holds
site b (0-based); bit value 0 means sigma = +1, bit value 1 means
sigma = -1.  A context over the sites after i is indexed the same way:
bit m of the context index holds site i+1+m.

The ground state comes from power iteration on (c I - H): for stoquastic
H and c >= max diagonal + max off-diagonal row mass, that operator is
entrywise nonnegative, so the iteration converges to the Perron vector,
which is the ground state with nonnegative amplitudes.
"""

from dataclasses import dataclass

import numpy as np

from .ansatz import log_prob_batch
from .errors import ConvergenceError
from .hamiltonian import diagonal_bond_terms
from .symmetry import sym_log_prob_batch

MAX_DENSE_SITES = 16


def all_configs(n):
    """(2^n, n) matrix of every configuration under the bit convention."""
    if n > MAX_DENSE_SITES:
        raise ValueError(f"n={n} exceeds the dense-enumeration guard ({MAX_DENSE_SITES})")
    idx = np.arange(2**n, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n)[None, :]) & 1
    return 1.0 - 2.0 * bits


def config_to_index(s):
    s = np.asarray(s)
    bits = (s < 0).astype(np.int64)
    return int((bits << np.arange(len(s))).sum())


def diagonal_table(ham):
    """Diagonal of H over all 2^n basis states, vectorized over bits."""
    n = ham.n
    if n > MAX_DENSE_SITES:
        raise ValueError(f"n={n} exceeds the dense-enumeration guard ({MAX_DENSE_SITES})")
    idx = np.arange(2**n, dtype=np.int64)
    out = np.zeros(2**n)
    bonds, coeffs = diagonal_bond_terms(ham)
    for (i, j), c in zip(bonds, coeffs):
        parity = ((idx >> i) ^ (idx >> j)) & 1  # s_i s_j = 1 - 2*parity
        out += c * (1.0 - 2.0 * parity)
    if ham.z_field != 0.0:
        for i in range(n):
            out -= ham.z_field * (1.0 - 2.0 * ((idx >> i) & 1))
    return out


def apply_dense(ham, psi, diag=None):
    """H @ psi without materializing the 2^n x 2^n matrix."""
    n = ham.n
    psi = np.asarray(psi, dtype=np.float64)
    if diag is None:
        diag = diagonal_table(ham)
    out = diag * psi
    idx = np.arange(2**n, dtype=np.int64)
    if ham.variant == "XXZ":
        for a, b in ham.graph.nn_bonds:
            anti = (((idx >> a) ^ (idx >> b)) & 1).astype(bool)
            src = idx[anti]
            out[src] += -2.0 * ham.g * psi[src ^ ((1 << a) | (1 << b))]
    else:
        for k in range(n):
            out += -ham.g * psi[idx ^ (1 << k)]
    return out


def _offdiag_row_mass(ham):
    """max over s of sum_{s'} |H_{ss'}|, s' != s."""
    if ham.variant == "XXZ":
        # 2g per antiparallel bond; the worst row has every bond antiparallel
        # iff the graph is bipartite, but the count below is exact either way.
        n = ham.n
        idx = np.arange(2**n, dtype=np.int64)
        anti = np.zeros(2**n)
        for a, b in ham.graph.nn_bonds:
            anti += ((idx >> a) ^ (idx >> b)) & 1
        return 2.0 * ham.g * float(anti.max())
    return ham.g * ham.n


@dataclass(frozen=True)
class DenseState:
    amplitudes: np.ndarray  # (2^n,), nonnegative, unit norm
    energy: float
    residual: float  # ||H psi - E psi||
    n: int


def ground_state_dense(ham, tol=1e-12, max_iter=500000):
    """Extremal eigenpair via power iteration on the shifted operator."""
    n = ham.n
    if n > MAX_DENSE_SITES:
        raise ValueError(f"n={n} exceeds the dense guard ({MAX_DENSE_SITES})")
    from .hamiltonian import check_stoquastic

    rep = check_stoquastic(ham)
    if not rep.ok:
        raise ValueError(f"not stoquastic: {rep.message}")
    diag = diagonal_table(ham)
    shift = float(diag.max()) + _offdiag_row_mass(ham)
    v = np.full(2**n, 2.0**(-n / 2))
    energy = None
    check_every = 10
    for it in range(1, max_iter + 1):
        hv = apply_dense(ham, v, diag=diag)
        w = shift * v - hv
        w /= np.linalg.norm(w)
        if it % check_every == 0 or it == max_iter:
            hv = apply_dense(ham, w, diag=diag)
            energy = float(w @ hv)
            residual = float(np.linalg.norm(hv - energy * w))
            if residual < tol:
                v = w
                break
        v = w
    else:
        raise ConvergenceError(
            f"power iteration: residual {residual:.3e} > tol {tol:.1e} after {max_iter} iterations")
    # Perron vector of the nonnegative shifted operator; clamp the tiny
    # negative roundoff so downstream weight tables stay nonnegative.
    if v.min() < -1e-10:
        raise ConvergenceError(f"negative amplitude {v.min():.3e} in the converged vector")
    v = np.maximum(v, 0.0)
    v /= np.linalg.norm(v)
    return DenseState(amplitudes=v, energy=energy, residual=residual, n=n)


def exact_weights(state):
    """Ground-state weight table w(s) = amplitude(s)^2."""
    amp = state.amplitudes if isinstance(state, DenseState) else np.asarray(state)
    return amp**2


def marginal_masses(w, i):
    """(M_plus, M_minus) per context over sites > i, marginalizing sites < i.

    Context c (bit m <-> site i+1+m) has mass M_plus[c] on sigma_i = +1.
    """
    w = np.asarray(w)
    n = int(round(np.log2(w.size)))
    blocks = w.reshape(2**(n - 1 - i), 2, 2**i)
    masses = blocks.sum(axis=2)
    return masses[:, 0].copy(), masses[:, 1].copy()


def context_configs(n, i):
    """(C, n-1-i) matrix of sigma values for the sites after i."""
    return all_configs(n - 1 - i)


@dataclass(frozen=True)
class ConditionalTable:
    site: int
    p_up: np.ndarray  # (C,) P(sigma_i = +1 | context); NaN on zero-mass contexts
    mass: np.ndarray  # (C,) total context probability
    flagged: np.ndarray  # (C,) bool, zero-mass contexts


def exact_conditionals(w, i):
    mp, mm = marginal_masses(w, i)
    mass = mp + mm
    flagged = mass == 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        p_up = np.where(flagged, np.nan, mp / np.where(flagged, 1.0, mass))
    return ConditionalTable(site=i, p_up=p_up, mass=mass, flagged=flagged)


def closed_form_conditional_energy(w, i):
    """Per-context minimizer F* = (1/2) ln(M_plus / M_minus).

    Returns (F, degenerate) where degenerate marks contexts with a
    zero-mass side (F set to NaN there; callers must regularize).
    """
    mp, mm = marginal_masses(w, i)
    degenerate = (mp == 0.0) | (mm == 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        f = np.where(degenerate, np.nan, 0.5 * np.log(np.where(mp == 0, 1.0, mp) /
                                                      np.where(mm == 0, 1.0, mm)))
    return f, degenerate


def weights_from_conditionals(tables):
    """Chain-rule product over all sites; inverse of exact_conditionals."""
    n = len(tables)
    S = all_configs(n)
    out = np.ones(2**n)
    idx = np.arange(2**n, dtype=np.int64)
    for i, tab in enumerate(tables):
        ctx = (idx >> (i + 1)).astype(np.int64)
        up = S[:, i] > 0
        p = np.where(up, tab.p_up[ctx], 1.0 - tab.p_up[ctx])
        out *= np.where(tab.flagged[ctx], 0.0, p)
    return out


def variational_energy_exact(ham, params, group=None):
    """<psi|H|psi> with psi(s) = sqrt(P(s)), summed over all 2^n configs."""
    n = ham.n
    if n > MAX_DENSE_SITES:
        raise ValueError(f"n={n} exceeds the dense guard ({MAX_DENSE_SITES})")
    S = all_configs(n)
    if group is not None and len(group) > 1:
        lp = sym_log_prob_batch(params, group, S)
    else:
        lp = log_prob_batch(params, S)
    psi = np.exp(0.5 * lp)
    return float(psi @ apply_dense(ham, psi))
