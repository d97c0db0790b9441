"""Exact conditional-energy learning from a ground-state weight table.

For site i, the conditional energy F_i(s_{>i}) is expanded over products
of later spins (one coefficient per subset up to max_order) and fit by
minimizing the convex objective

    L(theta) = sum_s w(s) exp(-sigma_i F_i(s_{>i}; theta))
             = sum_ctx [ M+ exp(-F) + M- exp(+F) ],

whose full-order minimizer matches the closed form (1/2) ln(M+/M-)
context by context.  Zero-mass sides make the full-order problem
unbounded; weights are floored (default 1e-12) and such contexts are
flagged.  Minimization is damped Newton with a backtracking line search
(the Hessian is tiny: at most 2^m coefficients for m later sites).
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ConvergenceError
from .exact import all_configs, marginal_masses


class UnboundedScreeningError(RuntimeError):
    """Full-order screening with a zero-mass side and no flooring."""


@dataclass(frozen=True)
class PolyEnergy:
    """Polynomial energy for one conditional: F = sum_S coeff_S prod_{j in S} s_j."""

    site: int
    subsets: tuple  # sorted tuples of sites > site; () is the constant
    coeffs: np.ndarray

    def __post_init__(self):
        if len(self.subsets) != len(self.coeffs):
            raise ValueError("subsets and coeffs must align")
        if len(set(self.subsets)) != len(self.subsets):
            raise ValueError("duplicate subsets")
        for sub in self.subsets:
            if any(j <= self.site for j in sub) or list(sub) != sorted(sub):
                raise ValueError(f"subset {sub} invalid for owner site {self.site}")

    @property
    def terms(self):
        return dict(zip(self.subsets, self.coeffs))


def subset_basis(n, i, max_order):
    """All sorted subsets of the sites after i, sizes 0..max_order."""
    later = range(i + 1, n)
    out = []
    for k in range(max_order + 1):
        out.extend(combinations(later, k))
    return tuple(out)


def design_matrix(n, i, max_order):
    """(subsets, Phi) with Phi[c, t] = prod_{j in subset t} sigma_j(context c)."""
    subsets = subset_basis(n, i, max_order)
    ctx = all_configs(n - 1 - i)  # column m <-> site i+1+m
    Phi = np.ones((ctx.shape[0], len(subsets)))
    for t, sub in enumerate(subsets):
        for j in sub:
            Phi[:, t] *= ctx[:, j - (i + 1)]
    return subsets, Phi


def screening_objective(theta, Phi, m_plus, m_minus):
    """(value, gradient) of the convex screening loss."""
    F = Phi @ theta
    ep = m_plus * np.exp(-F)
    em = m_minus * np.exp(F)
    return float((ep + em).sum()), Phi.T @ (em - ep)


@dataclass(frozen=True)
class ScreeningResult:
    poly: PolyEnergy
    flagged_contexts: tuple  # context indices with a zero-mass side before flooring
    grad_norm: float
    n_iter: int


def screen_exact(w, i, max_order=None, floor=1e-12, gtol=1e-10, max_iter=100000):
    """Fit the conditional energy of site i from weight table w.

    floor=None disables regularization; a degenerate context then makes
    the full-order problem unbounded and raises UnboundedScreeningError
    naming the context.
    """
    w = np.asarray(w, dtype=np.float64)
    n = int(round(np.log2(w.size)))
    if 2**n != w.size:
        raise ValueError("weight table length must be a power of two")
    m = n - 1 - i
    if max_order is None:
        max_order = m
    if not 0 <= max_order <= m:
        raise ValueError(f"max_order {max_order} outside [0, {m}]")
    mp, mm = marginal_masses(w, i)
    degenerate = np.flatnonzero((mp == 0.0) | (mm == 0.0))
    if floor is not None:
        mp, mm = marginal_masses(np.maximum(w, floor), i)
    elif degenerate.size and max_order == m:
        c = int(degenerate[0])
        raise UnboundedScreeningError(
            f"site {i}: context {c} has a zero-mass spin side; the full-order "
            f"objective decreases without bound along that coefficient")
    subsets, Phi = design_matrix(n, i, max_order)
    theta = np.zeros(len(subsets))
    value, grad = screening_objective(theta, Phi, mp, mm)
    it = 0
    while np.linalg.norm(grad) >= gtol:
        if it >= max_iter:
            raise ConvergenceError(
                f"screening site {i}: gradient norm {np.linalg.norm(grad):.3e} "
                f"after {max_iter} iterations")
        F = Phi @ theta
        curv = mp * np.exp(-F) + mm * np.exp(F)
        H = Phi.T @ (curv[:, None] * Phi)
        damp = 1e-12 * max(np.trace(H) / H.shape[0], 1.0)
        step = np.linalg.solve(H + damp * np.eye(H.shape[0]), -grad)
        t = 1.0
        slope = float(grad @ step)
        for _ in range(80):
            v2, g2 = screening_objective(theta + t * step, Phi, mp, mm)
            if v2 <= value + 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            raise ConvergenceError(f"screening site {i}: line search stalled at iter {it}")
        theta = theta + t * step
        value, grad = v2, g2
        it += 1
    poly = PolyEnergy(site=i, subsets=subsets, coeffs=theta)
    return ScreeningResult(poly=poly, flagged_contexts=tuple(int(c) for c in degenerate),
                           grad_norm=float(np.linalg.norm(grad)), n_iter=it)


def evaluate_poly(poly, n):
    """F values of the polynomial over all contexts of its owner site."""
    subsets, Phi = design_matrix(n, poly.site, max_order=n - 1 - poly.site)
    col = {sub: t for t, sub in enumerate(subsets)}
    theta = np.zeros(len(subsets))
    for sub, c in poly.terms.items():
        theta[col[sub]] = c
    return Phi @ theta


def order_profile(poly):
    """{order: (max_abs, l1)} over the polynomial's subset sizes."""
    out = {}
    for sub, c in poly.terms.items():
        k = len(sub)
        mx, l1 = out.get(k, (0.0, 0.0))
        out[k] = (max(mx, abs(float(c))), l1 + abs(float(c)))
    return dict(sorted(out.items()))


def poly_to_csv(poly, path):
    """Rows sorted by (order, subset); sites dash-joined; 17 significant digits."""
    rows = sorted(poly.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
    with open(path, "w") as fh:
        fh.write("subset,coefficient\n")
        for sub, c in rows:
            fh.write(f"{'-'.join(map(str, sub))},{float(c):.17g}\n")
    return path
