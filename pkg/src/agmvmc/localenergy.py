"""Local energy E_loc(s) = H_ss + sum_{s'} H_ss' exp((log P(s') - log P(s))/2).

The batch path evaluates all single-flip (or exchange) log-probability
ratios with O(n) work per move via the conditional structure instead of
recomputing log P from scratch (O(n^2) per move).  Feature values are
clipped to |f| <= cap inside these ratio exponentials only; the clip
count is reported so runs can flag parameter blow-up.  Non-finite local
energies raise NumericFault naming the offending sample.
"""

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap

from .ansatz import features, log_prob_delta, softplus
from .errors import NumericFault
from .hamiltonian import connected_configs, diagonal_energies, diagonal_energy
from .symmetry import sym_log_prob


@njit(cache=True, fastmath=True)
def _flip_deltas_kernel(S, F, pairT, cap, out):
    """out[t, k] = log P(flip site k of S[t]) - log P(S[t]).

    Flipping site k leaves conditionals i > k untouched; conditional k
    contributes exactly -2 s_k f_k and each i < k a softplus difference.
    pairT is the transposed pair matrix (pairT[k, i] = pair_ik) for
    contiguous access.  Returns the number of cap clips.
    """
    N, n = S.shape
    capped = 0
    sp0 = np.empty(n)
    for t in range(N):
        for i in range(n):
            fi = F[t, i]
            if fi > cap:
                fi = cap
                capped += 1
            elif fi < -cap:
                fi = -cap
                capped += 1
            x0 = -2.0 * S[t, i] * fi
            v = x0 if x0 > 0.0 else 0.0
            sp0[i] = v + math.log1p(math.exp(-abs(x0)))
        for k in range(n):
            fk = F[t, k]
            if fk > cap:
                fk = cap
            elif fk < -cap:
                fk = -cap
            d = -2.0 * S[t, k] * fk
            sk2 = 2.0 * S[t, k]
            for i in range(k):
                fs = F[t, i] - sk2 * pairT[k, i]
                if fs > cap:
                    fs = cap
                    capped += 1
                elif fs < -cap:
                    fs = -cap
                    capped += 1
                x1 = -2.0 * S[t, i] * fs
                v = x1 if x1 > 0.0 else 0.0
                d += sp0[i] - (v + math.log1p(math.exp(-abs(x1))))
            out[t, k] = d
    return capped


@njit(cache=True, fastmath=True)
def _exchange_deltas_kernel(S, F, pair, bonds, cap, out):
    """out[t, r] = log-ratio for swapping the antiparallel pair bonds[r].

    Rows where the pair is parallel are left at 0 (callers mask them).
    """
    N, n = S.shape
    B = bonds.shape[0]
    capped = 0
    for t in range(N):
        for r in range(B):
            a = bonds[r, 0]
            b = bonds[r, 1]
            sa = S[t, a]
            if sa == S[t, b]:
                out[t, r] = 0.0
                continue
            d = 0.0
            for i in range(b):
                si = S[t, i]
                fi = F[t, i]
                if i < a:
                    fs = fi - 2.0 * sa * (pair[i, a] - pair[i, b])
                elif i == a:
                    fs = fi + 2.0 * sa * pair[a, b]
                else:
                    fs = fi + 2.0 * sa * pair[i, b]
                if fi > cap:
                    fi = cap
                    capped += 1
                elif fi < -cap:
                    fi = -cap
                    capped += 1
                if fs > cap:
                    fs = cap
                    capped += 1
                elif fs < -cap:
                    fs = -cap
                    capped += 1
                x0 = -2.0 * si * fi
                v0 = x0 if x0 > 0.0 else 0.0
                # site a itself flips sign, so its new argument is +2 s_a f'
                x1 = (2.0 if i == a else -2.0) * si * fs
                v1 = x1 if x1 > 0.0 else 0.0
                d += v0 + math.log1p(math.exp(-abs(x0))) - v1 - math.log1p(math.exp(-abs(x1)))
            fb = F[t, b]
            if fb > cap:
                fb = cap
                capped += 1
            elif fb < -cap:
                fb = -cap
                capped += 1
            out[t, r] = d + 2.0 * sa * fb
    return capped


def _clip(F, cap):
    return np.clip(F, -cap, cap), int((np.abs(F) > cap).sum())


def _flip_deltas_numpy(S, F, pair, cap):
    """Vectorised reference for the flip kernel (same formulas)."""
    N, n = S.shape
    Fc, ncap = _clip(F, cap)
    sp0 = softplus(-2.0 * S * Fc)
    out = np.empty((N, n))
    for k in range(n):
        shifted = F[:, :k] - 2.0 * S[:, k:k + 1] * pair[:k, k][None, :]
        shifted, c = _clip(shifted, cap)
        ncap += c
        sp1 = softplus(-2.0 * S[:, :k] * shifted)
        out[:, k] = -2.0 * S[:, k] * Fc[:, k] + (sp0[:, :k] - sp1).sum(axis=1)
    return out, ncap


def _exchange_deltas_numpy(S, F, pair, bonds, cap):
    N, n = S.shape
    Fc, ncap = _clip(F, cap)
    sp0 = softplus(-2.0 * S * Fc)
    out = np.zeros((N, len(bonds)))
    for r, (a, b) in enumerate(bonds):
        anti = S[:, a] != S[:, b]
        sa = S[anti, a]
        d = np.zeros(anti.sum())
        if a > 0:
            shifted, c = _clip(F[anti, :a] - 2.0 * sa[:, None] * (pair[:a, a] - pair[:a, b])[None, :], cap)
            ncap += c
            d += (sp0[anti, :a] - softplus(-2.0 * S[anti, :a] * shifted)).sum(axis=1)
        fa2, c = _clip(F[anti, a] + 2.0 * sa * pair[a, b], cap)
        ncap += c
        d += sp0[anti, a] - softplus(2.0 * sa * fa2)
        if b - a > 1:
            shifted, c = _clip(F[anti, a + 1:b] + 2.0 * sa[:, None] * pair[a + 1:b, b][None, :], cap)
            ncap += c
            d += (sp0[anti, a + 1:b] - softplus(-2.0 * S[anti, a + 1:b] * shifted)).sum(axis=1)
        d += 2.0 * sa * Fc[anti, b]
        out[anti, r] = d
    return out, ncap


def flip_log_ratios(params, S, F=None, cap=np.inf, use_numba=HAVE_NUMBA):
    """(N, n) matrix of single-flip log-probability ratios + clip count."""
    S = np.ascontiguousarray(np.atleast_2d(np.asarray(S, dtype=np.float64)))
    if F is None:
        F = features(params, S)
    F = np.ascontiguousarray(F)
    if not use_numba:
        return _flip_deltas_numpy(S, F, params.pair, cap)
    out = np.empty_like(F)
    pairT = np.ascontiguousarray(params.pair.T)
    ncap = _flip_deltas_kernel(S, F, pairT, float(cap), out)
    return out, int(ncap)


def exchange_log_ratios(params, S, bonds, F=None, cap=np.inf, use_numba=HAVE_NUMBA):
    """(N, n_bonds) exchange log ratios; parallel-pair entries are zero."""
    S = np.ascontiguousarray(np.atleast_2d(np.asarray(S, dtype=np.float64)))
    if F is None:
        F = features(params, S)
    F = np.ascontiguousarray(F)
    bonds_arr = np.asarray([(min(a, b), max(a, b)) for a, b in bonds], dtype=np.int64).reshape(-1, 2)
    if not use_numba:
        return _exchange_deltas_numpy(S, F, params.pair, bonds_arr, cap)
    out = np.empty((S.shape[0], bonds_arr.shape[0]))
    ncap = _exchange_deltas_kernel(S, F, params.pair, bonds_arr, float(cap), out)
    return out, int(ncap)


def _logsumexp_rows(stack):
    """LSE over axis 0 of a (G, N) stack, fixed summation order."""
    m = stack.max(axis=0)
    return m + np.log(np.exp(stack - m[None, :]).sum(axis=0))


def _sym_move_ratios(params, group, S, kind, bonds=None, cap=np.inf):
    """Log ratios of the symmetrised distribution for flip/exchange moves.

    log P_sym(m s) - log P_sym(s) = LSE_g[LL_g + D_g] - LSE_g[LL_g], where
    the move m maps to a move on each transformed copy g s (site k goes to
    the slot holding k, i.e. perm^{-1}(k)).
    """
    S = np.atleast_2d(np.asarray(S, dtype=np.float64))
    N = S.shape[0]
    G = len(group.elements)
    n_moves = params.n if kind == "flip" else len(bonds)
    LL = np.empty((G, N))
    D = np.empty((G, N, n_moves))
    ncap = 0
    for gi, g in enumerate(group.elements):
        Sg = np.ascontiguousarray(g.apply_batch(S))
        Fg = features(params, Sg)
        LL[gi] = -softplus(-2.0 * Sg * Fg).sum(axis=1)
        inv = g.inverse().perm
        if kind == "flip":
            Dg, c = flip_log_ratios(params, Sg, F=Fg, cap=cap)
            D[gi] = Dg[:, list(inv)]
        else:
            bonds_g = [(inv[a], inv[b]) for a, b in bonds]
            Dg, c = exchange_log_ratios(params, Sg, bonds_g, F=Fg, cap=cap)
            D[gi] = Dg
        ncap += c
    base = _logsumexp_rows(LL)
    out = np.empty((N, n_moves))
    for m in range(n_moves):
        out[:, m] = _logsumexp_rows(LL + D[:, :, m]) - base
    return out, ncap


def local_energies(ham, params, S, group=None, cap=30.0):
    """Batch local energies; returns (energies, cap-clip count)."""
    S = np.atleast_2d(np.asarray(S, dtype=np.float64))
    energies = diagonal_energies(ham, S)
    sym = group is not None and len(group) > 1
    if ham.variant == "XXZ":
        bonds = ham.graph.nn_bonds
        if sym:
            D, ncap = _sym_move_ratios(params, group, S, "exchange", bonds=bonds, cap=cap)
        else:
            D, ncap = exchange_log_ratios(params, S, bonds, cap=cap)
        anti = np.stack([S[:, a] != S[:, b] for a, b in bonds], axis=1)
        energies = energies - 2.0 * ham.g * (anti * np.exp(0.5 * D)).sum(axis=1)
    else:
        if sym:
            D, ncap = _sym_move_ratios(params, group, S, "flip", cap=cap)
        else:
            D, ncap = flip_log_ratios(params, S, cap=cap)
        energies = energies - ham.g * np.exp(0.5 * D).sum(axis=1)
    bad = ~np.isfinite(energies)
    if bad.any():
        t = int(np.argmax(bad))
        raise NumericFault(f"non-finite local energy at sample {t}, config {S[t].astype(int).tolist()}")
    return energies, ncap


def local_energy(ham, params, s, group=None):
    """Single-configuration reference path built from log-prob differences."""
    s = np.asarray(s, dtype=np.float64)
    sym = group is not None and len(group) > 1
    e = diagonal_energy(ham, s)
    if sym:
        base = sym_log_prob(params, group, s)
        for s2, h in connected_configs(ham, s):
            e += h * math.exp(0.5 * (sym_log_prob(params, group, s2) - base))
    else:
        f = features(params, s[None, :])[0]
        for s2, h in connected_configs(ham, s):
            flips = [k for k in range(len(s)) if s2[k] != s[k]]
            e += h * math.exp(0.5 * log_prob_delta(params, s, flips, f=f))
    if not np.isfinite(e):
        raise NumericFault(f"non-finite local energy for config {s.astype(int).tolist()}")
    return float(e)
