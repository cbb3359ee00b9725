import numpy as np
import pytest

from mqgsim.nmr import (
    KIND_TARGET,
    LatticeConfig,
    LatticeError,
    PulseGroup,
    RefocusSequence,
    SpinRef,
    apply_sequence,
    build_hamiltonian,
    canonical_sequence,
    effective_evolution,
    pulse_operator,
    spin_index,
    target_terms,
    verify_identity,
)


def cfg_random(rows=2, boundary="periodic", seed=0):
    rng = np.random.default_rng(seed)
    return LatticeConfig(rows, tuple(rng.uniform(0.2, 2.0, 6)), boundary)


def random_state(dim, seed):
    rng = np.random.default_rng(seed)
    state = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return state / np.linalg.norm(state)


def test_hamiltonian_term_counts():
    assert len(build_hamiltonian(cfg_random(2, "periodic"))) == 12
    assert len(build_hamiltonian(cfg_random(2, "open"))) == 10
    assert len(build_hamiltonian(cfg_random(3, "periodic"))) == 18


def test_hamiltonian_keeps_zero_couplings():
    cfg = LatticeConfig(2, (1.0, 1.0, 1.0, 1.0, 0.0, 1.0), "periodic")
    e_terms = [t for t in build_hamiltonian(cfg) if t.coupling == "e"]
    assert len(e_terms) == 2 and all(t.coeff == 0.0 for t in e_terms)


def test_lattice_validation():
    with pytest.raises(LatticeError):
        LatticeConfig(1, (1,) * 6)
    with pytest.raises(LatticeError):
        LatticeConfig(2, (1,) * 5)
    with pytest.raises(LatticeError):
        LatticeConfig(2, (1,) * 6, boundary="twisted")


def test_spin_classes():
    assert SpinRef("A", 1).pulse_class == "A_odd"
    assert SpinRef("A", 2).pulse_class == "A_even"
    assert SpinRef("B", 3).pulse_class == "B"
    assert SpinRef("D", 2).pulse_class == "D_even"
    cfg = cfg_random(3)
    assert cfg.class_spins("A_odd") == (SpinRef("A", 1), SpinRef("A", 3))
    assert cfg.class_spins("B") == tuple(SpinRef("B", l) for l in (1, 2, 3))


def test_pulse_operator_b_class():
    cfg = cfg_random(2)
    mask, phase = pulse_operator(PulseGroup(frozenset({"B"})), cfg)
    expected = (1 << spin_index(SpinRef("B", 1))) | (1 << spin_index(SpinRef("B", 2)))
    assert mask == expected
    assert phase == (-1j) ** 2


def test_pulse_operator_a_odd_single_spin():
    cfg = cfg_random(2)
    mask, phase = pulse_operator(PulseGroup(frozenset({"A_odd"})), cfg)
    assert mask == 1 << spin_index(SpinRef("A", 1))
    assert phase == -1j


def test_pulse_twice_is_pure_phase():
    cfg = cfg_random(2)
    group = PulseGroup(frozenset({"B", "C"}))
    mask, phase = pulse_operator(group, cfg)
    state = random_state(1 << cfg.num_spins, 11)
    idx = np.arange(1 << cfg.num_spins)
    once = phase * state[idx ^ mask]
    twice = phase * once[idx ^ mask]
    assert np.allclose(twice, (-1) ** bin(mask).count("1") * state, atol=1e-14)


def test_canonical_sequence_groups():
    seq = canonical_sequence(1, 0.5)
    base = frozenset({"D_odd", "D_even"})
    assert [g.classes for g in seq.groups] == [base, base | {"B"}, base, base | {"B"}]
    seq3 = canonical_sequence(3, 0.5)
    assert seq3.groups[1].classes == frozenset({"B", "C", "A_even", "D_even"})


def test_canonical_sequence_invalid_kind():
    with pytest.raises(LatticeError):
        canonical_sequence(7, 0.5)


@pytest.mark.parametrize("kind", range(1, 7))
def test_net_pulse_flips_are_even(kind):
    cfg = cfg_random(3, "open")
    eff = effective_evolution(canonical_sequence(kind, 0.3), cfg)
    assert eff.net_flips == frozenset()


def test_effective_evolution_kind1_sign_table():
    cfg = cfg_random(2)
    eff = effective_evolution(canonical_sequence(1, 0.5), cfg)
    by_coupling = {}
    for row in eff.sign_table:
        by_coupling.setdefault(row["coupling"], []).append(row)
    assert all(r["signs"] == [1, 1, 1, 1] for r in by_coupling["a"])
    for label in "bcdef":
        assert all(sum(r["signs"]) == 0 for r in by_coupling[label])
    surviving_labels = {t.coupling for t in eff.surviving}
    assert surviving_labels == {"a"}
    a = cfg.couplings[0]
    assert all(abs(t.coeff - 4 * 0.5 * a) < 1e-15 for t in eff.surviving)


@pytest.mark.parametrize("kind", range(1, 7))
@pytest.mark.parametrize("boundary", ["periodic", "open"])
def test_effective_evolution_matches_published(kind, boundary):
    cfg = cfg_random(2, boundary, seed=kind)
    eff = effective_evolution(canonical_sequence(kind, 0.7), cfg)
    expected = {(t.i, t.j): 4 * 0.7 * t.coeff for t in target_terms(kind, cfg)}
    got = {(t.i, t.j): t.coeff for t in eff.surviving}
    assert got.keys() == expected.keys()
    assert all(abs(got[k] - expected[k]) < 1e-12 for k in got)


def test_zz_terms_commute_numerically():
    cfg = cfg_random(2)
    seq = canonical_sequence(2, 0.9)
    state = random_state(1 << cfg.num_spins, 21)
    out1 = apply_sequence(seq, cfg, state)
    shuffled = LatticeConfig(cfg.rows, cfg.couplings, cfg.boundary)
    # Term order inside the Hamiltonian build is fixed; emulate a reorder by
    # summing phases in reverse via a reversed-coupling equivalent config.
    terms = build_hamiltonian(cfg)
    from mqgsim.nmr import _diagonal_phase

    d1 = _diagonal_phase(terms, cfg, 0.9)
    d2 = _diagonal_phase(list(reversed(terms)), cfg, 0.9)
    assert np.max(np.abs(d1 - d2)) < 1e-14
    assert np.allclose(out1, apply_sequence(seq, shuffled, state), atol=1e-14)


def test_apply_sequence_zero_couplings_is_phase():
    cfg = LatticeConfig(2, (0.0,) * 6, "periodic")
    seq = canonical_sequence(1, 0.7)
    state = random_state(1 << cfg.num_spins, 4)
    out = apply_sequence(seq, cfg, state)
    ratio = out[np.abs(state) > 1e-3] / state[np.abs(state) > 1e-3]
    assert np.allclose(ratio, ratio[0], atol=1e-12)
    assert abs(abs(ratio[0]) - 1.0) < 1e-12


def test_apply_sequence_t_zero():
    cfg = cfg_random(2)
    eff = effective_evolution(canonical_sequence(3, 0.0), cfg)
    assert all(t.coeff == 0.0 for t in eff.surviving)


def test_apply_sequence_preserves_norm():
    cfg = cfg_random(3, "open", seed=2)
    seq = canonical_sequence(4, 1.3)
    state = random_state(1 << cfg.num_spins, 8)
    out = apply_sequence(seq, cfg, state)
    assert abs(np.linalg.norm(out) - 1.0) < 1e-12


def test_apply_sequence_dimension_mismatch():
    cfg = cfg_random(2)
    with pytest.raises(LatticeError):
        apply_sequence(canonical_sequence(1, 0.1), cfg, np.zeros(7, dtype=complex))


@pytest.mark.parametrize("kind", range(1, 7))
def test_verify_identity_passes(kind):
    cfg = cfg_random(2, seed=31)
    rep = verify_identity(kind, cfg, t=0.7, trials=20, tol=1e-10, seed=7)
    assert rep.passed
    assert rep.matches_published
    assert rep.min_fidelity >= 1 - 1e-10
    assert abs(abs(rep.global_phase) - 1.0) < 1e-9


def test_verify_identity_global_phase_is_fourth_root():
    cfg = cfg_random(2, seed=13)
    rep = verify_identity(1, cfg, t=0.4, trials=3, seed=5)
    assert min(abs(rep.global_phase - p) for p in (1, -1, 1j, -1j)) < 1e-9


def test_verify_identity_deterministic_given_seed():
    cfg = cfg_random(2, seed=1)
    r1 = verify_identity(2, cfg, t=0.7, trials=5, seed=9)
    r2 = verify_identity(2, cfg, t=0.7, trials=5, seed=9)
    assert r1.to_dict() == r2.to_dict()


def test_verify_identity_mutation_fails():
    cfg = cfg_random(2, seed=6)
    seq = canonical_sequence(1, 0.7)
    groups = list(seq.groups)
    groups[1] = PulseGroup(frozenset({"D_odd", "D_even"}))  # drop B from P2
    mutated = RefocusSequence(0.7, tuple(groups), kind=1)
    rep = verify_identity(1, cfg, t=0.7, trials=5, seed=3, sequence=mutated)
    assert not rep.passed
    assert rep.min_fidelity < 1 - 1e-6


def test_verify_identity_odd_periodic_parity_seam():
    # An odd periodic ring cannot 2-color rows, so kinds 3 and 6 cannot
    # isolate their coupling there; the sign algebra and the numerics still
    # agree with each other.
    cfg = cfg_random(3, "periodic", seed=12)
    for kind in (3, 6):
        rep = verify_identity(kind, cfg, t=0.7, trials=5, seed=2)
        assert rep.passed
        assert not rep.matches_published
    for kind in (1, 2, 4, 5):
        rep = verify_identity(kind, cfg, t=0.7, trials=5, seed=2)
        assert rep.passed and rep.matches_published


def test_kind_targets():
    assert KIND_TARGET == {1: "a", 2: "b", 3: "c", 4: "d", 5: "e", 6: "f"}
