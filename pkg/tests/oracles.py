"""Independent reference implementations used only by tests.

Everything here is built by a different route than the package code:
dense Hamiltonians from explicit 2x2 operator Kronecker products, log
probabilities from direct sigmoid products, gradients from central
finite differences.  Frozen constants were computed once from scipy in
the build environment and pinned here so the test suite needs no scipy.
"""

import math

import numpy as np

# Basis convention shared with the package: bit b of the index holds site b,
# bit value 0 <-> sigma=+1, 1 <-> sigma=-1.  kron(A, B) puts A on the slower
# (higher-bit) factor, so site 0 is the innermost factor.
_Z = np.diag([1.0, -1.0])
_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_I = np.eye(2)


def site_op(n, ops):
    """Kronecker product with ops = {site: 2x2 matrix}, identity elsewhere."""
    out = np.eye(1)
    for b in range(n - 1, -1, -1):
        out = np.kron(out, ops.get(b, _I))
    return out


def dense_hamiltonian(ham):
    """Dense matrix of a HamiltonianSpec via Pauli kron products."""
    from agmvmc.hamiltonian import diagonal_bond_terms

    n = ham.n
    H = np.zeros((2**n, 2**n))
    bonds, coeffs = diagonal_bond_terms(ham)
    for (i, j), c in zip(bonds, coeffs):
        H += c * site_op(n, {i: _Z, j: _Z})
    if ham.z_field != 0.0:
        for i in range(n):
            H -= ham.z_field * site_op(n, {i: _Z})
    if ham.variant == "XXZ":
        # exchange of an antiparallel pair with element -2g:
        # -2g * (|+-><-+| + |-+><+-|) per bond = -g (XX + YY) in operator form
        swap_offdiag = np.zeros((4, 4))
        swap_offdiag[1, 2] = swap_offdiag[2, 1] = 1.0
        for a, b in ham.graph.nn_bonds:
            # build the two-site projector via X_a X_b restricted to antiparallel
            xx = site_op(n, {a: _X, b: _X})
            za = site_op(n, {a: _Z})
            zb = site_op(n, {b: _Z})
            anti = 0.5 * (np.eye(2**n) - za @ zb)
            H += -2.0 * ham.g * (anti @ xx @ anti)
        return H
    for k in range(n):
        H += -ham.g * site_op(n, {k: _X})
    return H


def ground_energy_dense(ham):
    vals = np.linalg.eigvalsh(dense_hamiltonian(ham))
    return float(vals[0])


def ground_pair_dense(ham):
    vals, vecs = np.linalg.eigh(dense_hamiltonian(ham))
    v = vecs[:, 0]
    if v.sum() < 0:
        v = -v
    return float(vals[0]), v


def log_prob_reference(bias, pair, s):
    """Direct product of conditionals, no softplus shortcuts."""
    n = len(bias)
    lp = 0.0
    for i in range(n):
        f = bias[i]
        for j in range(i + 1, n):
            f += pair[i][j] * s[j]
        p = 1.0 / (1.0 + math.exp(-2.0 * s[i] * f))
        lp += math.log(p)
    return lp


def fd_grad_log_prob(params, s, h=1e-5):
    """Central finite differences of log_prob over every parameter."""
    from agmvmc.ansatz import log_prob
    from agmvmc.params import AgmParams

    n = params.n
    gb = np.zeros(n)
    gp = np.zeros((n, n))
    for i in range(n):
        for sign in (1, -1):
            b = params.bias.copy()
            b[i] += sign * h
            gb[i] += sign * log_prob(AgmParams(b, params.pair.copy()), s)
        gb[i] /= 2 * h
        for j in range(i + 1, n):
            for sign in (1, -1):
                p = params.pair.copy()
                p[i, j] += sign * h
                gp[i, j] += sign * log_prob(AgmParams(params.bias.copy(), p), s)
            gp[i, j] /= 2 * h
    return gb, gp


def fd_energy_gradient(ham, params, h=1e-6):
    """Central finite differences of the exact variational energy."""
    from agmvmc.exact import variational_energy_exact
    from agmvmc.params import AgmParams

    n = params.n
    gb = np.zeros(n)
    gp = np.zeros((n, n))
    for i in range(n):
        for sign in (1, -1):
            b = params.bias.copy()
            b[i] += sign * h
            gb[i] += sign * variational_energy_exact(ham, AgmParams(b, params.pair.copy()))
        gb[i] /= 2 * h
        for j in range(i + 1, n):
            for sign in (1, -1):
                p = params.pair.copy()
                p[i, j] += sign * h
                gp[i, j] += sign * variational_energy_exact(ham, AgmParams(params.bias.copy(), p))
            gp[i, j] /= 2 * h
    return gb, gp


# chi-square 0.999 quantiles (scipy.stats.chi2.ppf(0.999, df), frozen)
CHI2_PPF_999 = {
    3: 16.26623619623813,
    7: 24.321886347856854,
    15: 37.69729821835383,
}

SQRT5 = 2.23606797749979
