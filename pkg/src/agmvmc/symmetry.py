"""Site-permutation symmetries with an optional global spin flip.

A transform g acts as (g s)[j] = sign * s[perm[j]].  A SymmetryGroup is a
finite set of transforms containing the identity and closed under
composition; averaging the model over the group gives

    P_sym(s) = (1/|G|) sum_g P(g s),

which is invariant under every g by construction.  Summation order is
fixed (values sorted ascending) so the invariance holds bit for bit.
"""

from dataclasses import dataclass

import numpy as np

from .ansatz import log_prob_batch


@dataclass(frozen=True)
class Transform:
    perm: tuple
    flip: bool = False

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("perm must be a permutation of 0..n-1")

    @property
    def sign(self):
        return -1.0 if self.flip else 1.0

    def apply_batch(self, S):
        S = np.atleast_2d(np.asarray(S, dtype=np.float64))
        return self.sign * S[:, list(self.perm)]

    def apply(self, s):
        return self.apply_batch(np.asarray(s)[None, :])[0]

    def compose(self, other):
        """self after other: (self*other)(s) = self(other(s))."""
        p1, p2 = self.perm, other.perm
        return Transform(tuple(p2[p1[j]] for j in range(len(p1))), self.flip ^ other.flip)

    def inverse(self):
        inv = tuple(int(k) for k in np.argsort(self.perm))
        return Transform(inv, self.flip)


def identity_transform(n):
    return Transform(tuple(range(n)), False)


@dataclass(frozen=True)
class SymmetryGroup:
    elements: tuple

    def __post_init__(self):
        els = set(self.elements)
        if len(els) != len(self.elements):
            raise ValueError("duplicate group elements")
        n = len(self.elements[0].perm)
        if any(len(g.perm) != n for g in self.elements):
            raise ValueError("mixed permutation lengths")
        if identity_transform(n) not in els:
            raise ValueError("identity element missing")
        for g in self.elements:
            if g.inverse() not in els:
                raise ValueError(f"inverse of {g} missing")
            for h in self.elements:
                if g.compose(h) not in els:
                    raise ValueError(f"composition {g} * {h} leaves the set")

    @property
    def n(self):
        return len(self.elements[0].perm)

    def __len__(self):
        return len(self.elements)


def trivial_group(n):
    return SymmetryGroup((identity_transform(n),))


def global_flip_group(n):
    return SymmetryGroup((identity_transform(n), Transform(tuple(range(n)), True)))


def chain_reflection_group(n, with_flip=False):
    """{id, reflect} about the chain midpoint, optionally x {id, flip}."""
    els = [identity_transform(n), Transform(tuple(range(n - 1, -1, -1)), False)]
    if with_flip:
        els += [Transform(g.perm, True) for g in els]
    return SymmetryGroup(tuple(els))


def group_from_generators(gens):
    """Close a generator list (plus identity) under composition."""
    n = len(gens[0].perm)
    els = {identity_transform(n)}
    frontier = set(gens)
    while frontier:
        els |= frontier
        nxt = set()
        for g in frontier:
            for h in els:
                for c in (g.compose(h), h.compose(g)):
                    if c not in els:
                        nxt.add(c)
        frontier = nxt
    return SymmetryGroup(tuple(sorted(els, key=lambda g: (g.flip, g.perm))))


def group_log_probs(params, group, S):
    """LL[t, k] = log P(g_k S[t]) for every group element, batch layout."""
    S = np.atleast_2d(np.asarray(S, dtype=np.float64))
    LL = np.empty((S.shape[0], len(group)))
    for k, g in enumerate(group.elements):
        LL[:, k] = log_prob_batch(params, g.apply_batch(S))
    return LL


def sym_log_prob_batch(params, group, S):
    """log P_sym per sample; log-sum-exp over sorted values, so the result
    is bitwise invariant under s -> g s."""
    LL = np.sort(group_log_probs(params, group, S), axis=1)
    m = LL[:, -1]
    return m + np.log(np.exp(LL - m[:, None]).sum(axis=1)) - np.log(len(group))


def sym_log_prob(params, group, s):
    return float(sym_log_prob_batch(params, group, np.asarray(s)[None, :])[0])


def sym_sample(params, group, n_samples, seed):
    """Sample the group-averaged law: base draw, then a uniform element.

    Exact because P_sym is the uniform mixture of the |G| pushforwards.
    """
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    ss_base, ss_pick = root.spawn(2)
    from .ansatz import sample_batch

    S = sample_batch(params, n_samples, ss_base)
    picks = np.random.default_rng(ss_pick).integers(0, len(group), size=n_samples)
    out = np.empty_like(S)
    for k, g in enumerate(group.elements):
        rows = picks == k
        if rows.any():
            out[rows] = g.apply_batch(S[rows])
    return out
