"""Stoquastic spin Hamiltonians on classical configurations sigma in {+1, -1}^n.

Four variants share one interface:

  TIM    diagonal -sum_<ij> s_i s_j,          off-diagonal -g per single site flip
  DTIM   diagonal +sum_<ij> J_ij s_i s_j,     off-diagonal -g per single site flip
  XXZ    diagonal +sum_<ij> s_i s_j,          off-diagonal -2g per antiparallel
                                              nearest-neighbour pair exchange
  ANNNI  diagonal -sum_col s s - (1-alpha) sum_row s s + alpha sum_row-nnn s s,
                                              off-diagonal -g per single site flip

An optional longitudinal field adds -z_field * sum_i s_i to the diagonal
(used to break the XXZ ground-state degeneracy).
"""

from dataclasses import dataclass

import numpy as np

from .lattice import LatticeGraph

VARIANTS = ("TIM", "DTIM", "XXZ", "ANNNI")


@dataclass(frozen=True)
class HamiltonianSpec:
    variant: str
    graph: LatticeGraph
    g: float
    alpha: float = 0.0
    couplings: tuple = None  # DTIM only: +-1 per nn bond, aligned with graph.nn_bonds
    z_field: float = 0.0
    diag_terms: tuple = None  # explicit ((bonds), (coeffs)) override; set by permuted_spec

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if self.variant == "DTIM":
            if self.couplings is None or len(self.couplings) != len(self.graph.nn_bonds):
                raise ValueError("DTIM needs one coupling per nearest-neighbour bond")
            if any(c not in (-1, 1) for c in self.couplings):
                raise ValueError("DTIM couplings must be +-1")
        elif self.couplings is not None:
            raise ValueError(f"{self.variant} takes no couplings")
        if self.variant == "ANNNI":
            if not (0.0 <= self.alpha <= 1.0):
                raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
            if not self.graph.nnn_bonds_row and self.alpha != 0.0 and self.diag_terms is None:
                raise ValueError("ANNNI with alpha != 0 needs a graph built with row nnn pairs")
        elif self.alpha != 0.0:
            raise ValueError(f"{self.variant} takes no alpha")

    @property
    def n(self):
        return self.graph.n_sites


def diagonal_bond_terms(ham):
    """(bonds, coeffs) defining the diagonal sum_b c_b s_i s_j."""
    if ham.diag_terms is not None:
        bonds, coeffs = ham.diag_terms
        return tuple(bonds), np.asarray(coeffs, dtype=np.float64)
    g = ham.graph
    if ham.variant == "TIM":
        bonds = g.nn_bonds
        coeffs = [-1.0] * len(bonds)
    elif ham.variant == "DTIM":
        bonds = g.nn_bonds
        coeffs = [float(c) for c in ham.couplings]
    elif ham.variant == "XXZ":
        bonds = g.nn_bonds
        coeffs = [1.0] * len(bonds)
    else:  # ANNNI
        row = g.nn_bonds_row
        col = g.nn_bonds_col
        bonds = row + col + g.nnn_bonds_row
        coeffs = [-(1.0 - ham.alpha)] * len(row) + [-1.0] * len(col) + [ham.alpha] * len(g.nnn_bonds_row)
    return tuple(bonds), np.asarray(coeffs, dtype=np.float64)


def diagonal_energies(ham, S):
    """Diagonal matrix elements for a batch S of shape (N, n), values +-1."""
    S = np.atleast_2d(np.asarray(S, dtype=np.float64))
    bonds, coeffs = diagonal_bond_terms(ham)
    out = np.zeros(S.shape[0])
    for (i, j), c in zip(bonds, coeffs):
        out += c * S[:, i] * S[:, j]
    if ham.z_field != 0.0:
        out -= ham.z_field * S.sum(axis=1)
    return out


def diagonal_energy(ham, s):
    return float(diagonal_energies(ham, np.asarray(s)[None, :])[0])


def connected_configs(ham, s):
    """All (s', element) with s' != s and <s|H|s'> != 0.

    TIM/DTIM/ANNNI connect via single site flips (element -g); XXZ via
    exchanging each antiparallel nearest-neighbour pair (element -2g).
    """
    s = np.asarray(s, dtype=np.float64)
    out = []
    if ham.variant == "XXZ":
        for a, b in ham.graph.nn_bonds:
            if s[a] != s[b]:
                t = s.copy()
                t[a], t[b] = s[b], s[a]
                out.append((t, -2.0 * ham.g))
    else:
        for k in range(ham.n):
            t = s.copy()
            t[k] = -t[k]
            out.append((t, -ham.g))
    return out


@dataclass(frozen=True)
class StoquasticityReport:
    ok: bool
    message: str = ""


def check_stoquastic(ham):
    """Off-diagonal elements are -g (or -2g); nonpositive iff g >= 0."""
    if ham.g < 0.0:
        return StoquasticityReport(False, f"g={ham.g} < 0 makes off-diagonal elements positive")
    return StoquasticityReport(True)


def sample_disorder(graph, seed):
    """Draw +-1 couplings, one per nn bond, uniform and independent."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    draws = rng.integers(0, 2, size=len(graph.nn_bonds))
    return tuple(int(2 * d - 1) for d in draws)


def permuted_spec(ham, order):
    """Relabel sites so lattice site order[k] occupies slot k.

    Energies are invariant; only the autoregressive conditioning order
    seen by the ansatz changes.  The diagonal term structure is carried
    over explicitly since relabelled bonds lose their grid geometry.
    """
    n = ham.n
    order = tuple(int(k) for k in order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order must be a permutation of 0..{n - 1}")
    pos = {site: slot for slot, site in enumerate(order)}
    remap = lambda b: tuple(sorted((pos[b[0]], pos[b[1]])))
    bonds, coeffs = diagonal_bond_terms(ham)
    diag = tuple(zip(*sorted(zip(map(remap, bonds), coeffs)))) if bonds else ((), ())
    nn = sorted(zip(map(remap, ham.graph.nn_bonds),
                    ham.couplings if ham.couplings is not None else [None] * len(ham.graph.nn_bonds)))
    graph = LatticeGraph(n_sites=n, shape=(1, n), nn_bonds=tuple(b for b, _ in nn))
    coup = tuple(c for _, c in nn) if ham.couplings is not None else None
    return HamiltonianSpec(variant=ham.variant, graph=graph, g=ham.g, alpha=ham.alpha,
                           couplings=coup, z_field=ham.z_field, diag_terms=diag)
