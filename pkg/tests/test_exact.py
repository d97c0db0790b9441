import numpy as np
import pytest

from agmvmc.exact import (MAX_DENSE_SITES, apply_dense, closed_form_conditional_energy,
                          exact_conditionals, exact_weights, ground_state_dense,
                          marginal_masses, variational_energy_exact,
                          weights_from_conditionals)
from agmvmc.freefermion import tfim_chain_energy
from agmvmc.hamiltonian import HamiltonianSpec, sample_disorder
from agmvmc.lattice import build_chain, build_square
from agmvmc.params import AgmParams, init_params, zero_params

from oracles import SQRT5, dense_hamiltonian, ground_pair_dense


# ---------------------------------------------------------------- dense apply

def test_apply_dense_matches_matrix():
    for variant in ("TIM", "XXZ"):
        graph = build_chain(4)
        ham = HamiltonianSpec(variant=variant, graph=graph, g=1.3)
        H = dense_hamiltonian(ham)
        rng = np.random.default_rng(0)
        psi = rng.standard_normal(16)
        out = apply_dense(ham, psi)
        assert np.max(np.abs(out - H @ psi)) < 1e-12


# ---------------------------------------------------------------- ground state

def test_single_site_ground_energy():
    graph = build_chain(1)
    for g in (0.3, 1.0, 2.5):
        ham = HamiltonianSpec(variant="TIM", graph=graph, g=g)
        st = ground_state_dense(ham)
        assert abs(st.energy - (-g)) < 1e-12


def test_two_site_ground_energy_and_weights():
    graph = build_chain(2)
    ham = HamiltonianSpec(variant="TIM", graph=graph, g=1.0)
    st = ground_state_dense(ham)
    assert abs(st.energy - (-SQRT5)) < 1e-12
    w = exact_weights(st)
    # golden-ratio weight table, frozen
    target = np.array([0.3618034, 0.1381966, 0.1381966, 0.3618034])
    assert np.max(np.abs(w - target)) < 1e-7
    assert abs(w.sum() - 1.0) < 1e-12


def test_seven_site_matches_free_fermion():
    graph = build_chain(7)
    ham = HamiltonianSpec(variant="TIM", graph=graph, g=1.0)
    st = ground_state_dense(ham)
    assert abs(st.energy - tfim_chain_energy(7, 1.0)) < 1e-9


@pytest.mark.parametrize("variant,n,g", [("TIM", 5, 0.5), ("TIM", 5, 2.0),
                                         ("XXZ", 4, 1.0), ("XXZ", 6, 0.7)])
def test_matches_eigensolver(variant, n, g):
    # XXZ cases use even chains: the odd-chain ground state is degenerate,
    # so only the even-n amplitude vector is comparable across solvers
    graph = build_chain(n)
    ham = HamiltonianSpec(variant=variant, graph=graph, g=g)
    st = ground_state_dense(ham)
    e_ref, v_ref = ground_pair_dense(ham)
    assert abs(st.energy - e_ref) < 1e-9
    # amplitudes match up to global sign (both normalized)
    v = v_ref * np.sign(v_ref[np.argmax(np.abs(v_ref))])
    a = st.amplitudes * np.sign(st.amplitudes[np.argmax(np.abs(st.amplitudes))])
    assert np.max(np.abs(a - v)) < 1e-7


def test_dtim_matches_eigensolver():
    graph = build_chain(5)
    couplings = sample_disorder(graph, seed=3)
    ham = HamiltonianSpec(variant="DTIM", graph=graph, g=0.8, couplings=couplings)
    st = ground_state_dense(ham)
    e_ref, _ = ground_pair_dense(ham)
    assert abs(st.energy - e_ref) < 1e-9


def test_annni_matches_eigensolver():
    graph = build_square(2, 4, with_nnn=True)
    ham = HamiltonianSpec(variant="ANNNI", graph=graph, g=1.0, alpha=1.0 / 3.0)
    st = ground_state_dense(ham)
    e_ref, _ = ground_pair_dense(ham)
    assert abs(st.energy - e_ref) < 1e-9


def test_z_field_matches_eigensolver():
    graph = build_chain(4)
    ham = HamiltonianSpec(variant="TIM", graph=graph, g=1.0, z_field=1e-3)
    st = ground_state_dense(ham)
    e_ref, _ = ground_pair_dense(ham)
    assert abs(st.energy - e_ref) < 1e-9


def test_amplitudes_nonnegative():
    graph = build_chain(6)
    ham = HamiltonianSpec(variant="TIM", graph=graph, g=0.7)
    st = ground_state_dense(ham)
    assert np.min(st.amplitudes) >= 0.0  # clamped Perron vector
    assert abs(np.sum(st.amplitudes ** 2) - 1.0) < 1e-12


def test_residual_reported():
    graph = build_chain(4)
    ham = HamiltonianSpec(variant="TIM", graph=graph, g=1.0)
    st = ground_state_dense(ham, tol=1e-12)
    assert st.residual < 1e-12


def test_oversize_refused():
    graph = build_chain(MAX_DENSE_SITES + 1)
    ham = HamiltonianSpec(variant="TIM", graph=graph, g=1.0)
    with pytest.raises(ValueError):
        ground_state_dense(ham)


# ---------------------------------------------------------------- conditionals

def test_marginal_masses_two_site():
    # frozen two-site weights: index bit 0 <-> site 0, bit value 1 <-> spin -1
    w = np.array([0.3618034, 0.1381966, 0.1381966, 0.3618034])
    mp, mm = marginal_masses(w, 1)
    # site 1 has an empty context -> single row; symmetric weights -> 1/2, 1/2
    assert mp.shape == (1,)
    assert abs(mp[0] - 0.5) < 1e-7
    assert abs(mm[0] - 0.5) < 1e-7
    mp0, mm0 = marginal_masses(w, 0)
    # context bit 0 <-> site 1; context 0 means site 1 = +1
    assert mp0.shape == (2,)
    assert abs(mp0[0] - 0.3618034) < 1e-7
    assert abs(mm0[0] - 0.1381966) < 1e-7
    assert abs((mp0 + mm0).sum() - 1.0) < 1e-7


def test_chain_rule_reconstruction():
    graph = build_chain(6)
    ham = HamiltonianSpec(variant="TIM", graph=graph, g=1.2)
    st = ground_state_dense(ham)
    w = exact_weights(st)
    tables = [exact_conditionals(w, i) for i in range(6)]
    w2 = weights_from_conditionals(tables)
    assert np.max(np.abs(w - w2)) < 1e-10


def test_closed_form_conditional_energy():
    # single site, masses (0.8, 0.2): F* = (1/2) ln 4
    F, degen = closed_form_conditional_energy(np.array([0.8, 0.2]), 0)
    assert not degen[0]
    assert abs(F[0] - 0.5 * np.log(4.0)) < 1e-15
    F0, degen0 = closed_form_conditional_energy(np.array([0.5, 0.5]), 0)
    assert not degen0[0] and F0[0] == 0.0
    Fd, degend = closed_form_conditional_energy(np.array([1.0, 0.0]), 0)
    assert degend[0] and np.isnan(Fd[0])


def test_conditionals_and_flags():
    # w puts all mass on the all-up config: site-0 context "site1=-1" is
    # unreachable (zero mass) and must be flagged
    w = np.array([1.0, 0.0, 0.0, 0.0])
    t0 = exact_conditionals(w, 0)
    assert t0.site == 0
    assert list(t0.flagged) == [False, True]
    assert t0.p_up[0] == 1.0
    assert np.isnan(t0.p_up[1])
    t1 = exact_conditionals(w, 1)
    assert list(t1.flagged) == [False]
    assert t1.p_up[0] == 1.0
    # chain rule still reproduces the degenerate table
    w2 = weights_from_conditionals([t0, t1])
    assert np.max(np.abs(w - w2)) < 1e-15


def test_conditionals_uniform():
    w = np.full(8, 1.0 / 8.0)
    for i in range(3):
        tab = exact_conditionals(w, i)
        assert np.max(np.abs(tab.p_up - 0.5)) < 1e-15
        assert not np.any(tab.flagged)


# ---------------------------------------------------------------- variational

def test_variational_energy_zero_params_tim():
    # uniform state on the TIM chain: every flip ratio is 1 -> <H> = -g*n;
    # the diagonal part averages to zero
    n = 3
    graph = build_chain(n)
    ham = HamiltonianSpec(variant="TIM", graph=graph, g=1.0)
    e = variational_energy_exact(ham, zero_params(n))
    assert abs(e - (-3.0)) < 1e-12


def test_variational_energy_above_ground():
    graph = build_chain(5)
    ham = HamiltonianSpec(variant="TIM", graph=graph, g=1.0)
    st = ground_state_dense(ham)
    for seed in range(5):
        p = init_params(5, 0.4, seed)
        e = variational_energy_exact(ham, p)
        assert e >= st.energy - 1e-10


def test_variational_energy_two_site_exact_params():
    c = 0.48121182505960386
    pair = np.zeros((2, 2))
    pair[0, 1] = c
    p = AgmParams(np.zeros(2), pair)
    graph = build_chain(2)
    ham = HamiltonianSpec(variant="TIM", graph=graph, g=1.0)
    e = variational_energy_exact(ham, p)
    assert abs(e - (-SQRT5)) < 1e-7
