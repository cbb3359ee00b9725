import pytest

from mqgsim.circuit import CircuitError, QubitRef, Toffoli, metrics
from mqgsim.sim import all_outputs
from mqgsim.synthesis import (
    PaddedSpec,
    SynthesisSpec,
    synth_baseline_dirty,
    synth_mqg_network,
    synth_padded,
    table1_compare,
)


def T(c1, c2, t):
    return Toffoli(QubitRef(*c1), QubitRef(*c2), QubitRef(*t))


def test_spec_derived_quantities():
    spec = SynthesisSpec(2)
    assert spec.rows == 4
    assert spec.qubit_count == 17
    assert spec.control_count == 9
    assert spec.simulated_gate_qubits == 10


def test_spec_rejects_n_zero():
    with pytest.raises(CircuitError):
        SynthesisSpec(0)


def test_network_layer_structure_n1():
    c = synth_mqg_network(SynthesisSpec(1))
    assert len(c.layers) == 8
    type1 = (T(("A", 0), ("C", 1), ("D", 1)), T(("A", 1), ("C", 2), ("D", 2)))
    type2 = (T(("B", 1), ("D", 1), ("A", 1)), T(("B", 2), ("D", 2), ("A", 2)))
    for i, layer in enumerate(c.layers):
        assert layer.gates == (type1 if i % 2 == 0 else type2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_network_layer_support(n):
    c = synth_mqg_network(SynthesisSpec(n))
    for layer in c.layers:
        assert len(layer.support) == 3 * 2**n


@pytest.mark.parametrize("n", [1, 2, 3])
def test_network_never_targets_controls(n):
    c = synth_mqg_network(SynthesisSpec(n))
    targets = {g.target for layer in c.layers for g in layer.gates}
    assert QubitRef("A", 0) not in targets
    assert not any(t.role in ("B", "C") for t in targets)


def test_network_all_controls_one():
    # Only the target flips when every control is 1 and the rest start at 0.
    c = synth_mqg_network(SynthesisSpec(1))
    idx = c.index_of
    word = 0
    for ref in [QubitRef("A", 0)] + [QubitRef(r, l) for l in (1, 2) for r in "BC"]:
        word |= 1 << idx[ref]
    out = int(all_outputs(c)[word])
    assert out == word | (1 << idx[QubitRef("A", 2)])


def test_network_identity_when_a_control_is_zero():
    c = synth_mqg_network(SynthesisSpec(1))
    idx = c.index_of
    c2_bit = 1 << idx[QubitRef("C", 2)]
    outs = all_outputs(c)
    for word in range(1 << 9):
        if not word & c2_bit:
            assert int(outs[word]) == word


@pytest.mark.parametrize(
    "active,pinned_labels",
    [
        (5, set()),
        (4, {"C2"}),
        (3, {"C2", "B2"}),
        (2, {"C2", "B2", "C1"}),
    ],
)
def test_padding_pin_policy(active, pinned_labels):
    circuit, pinned = synth_padded(PaddedSpec(SynthesisSpec(1), active))
    assert {p.label for p in pinned} == pinned_labels
    assert circuit == synth_mqg_network(SynthesisSpec(1))


def test_padding_rejects_out_of_range():
    with pytest.raises(CircuitError):
        PaddedSpec(SynthesisSpec(1), 6)
    with pytest.raises(CircuitError):
        PaddedSpec(SynthesisSpec(1), 1)


def test_baseline_m3_gate_list():
    c = synth_baseline_dirty(3)
    gates = [g for layer in c.layers for g in layer.gates]
    t_gate = T(("C", 3), ("D", 1), ("A", 0))
    peak = T(("C", 1), ("C", 2), ("D", 1))
    assert gates == [t_gate, peak, t_gate, peak]


@pytest.mark.parametrize("m,count", [(3, 4), (4, 8), (5, 12), (9, 28)])
def test_baseline_gate_counts(m, count):
    assert metrics(synth_baseline_dirty(m)).toffoli_count == count
    assert metrics(synth_baseline_dirty(m)).qubit_count == 2 * m - 1


def test_baseline_rejects_small_m():
    with pytest.raises(CircuitError):
        synth_baseline_dirty(2)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_baseline_exhaustive_with_dirty_ancillas(m):
    c = synth_baseline_dirty(m)
    M = c.num_qubits
    control_mask = (1 << m) - 1
    target_mask = 1 << (M - 1)
    outs = all_outputs(c)
    for word in range(1 << M):
        expected = word ^ target_mask if (word & control_mask) == control_mask else word
        assert int(outs[word]) == expected


def test_baseline_dirty_example_m4():
    c = synth_baseline_dirty(4)
    idx = c.index_of
    word = 0b1111  # controls all 1
    word |= (1 << idx[QubitRef("D", 1)]) | (1 << idx[QubitRef("D", 2)])  # dirty
    out = int(all_outputs(c)[word])
    assert out == word | (1 << idx[QubitRef("A", 0)])


@pytest.mark.parametrize(
    "n,N,proposed,baseline",
    [(1, 6, 8, 12), (2, 10, 16, 28), (3, 18, 32, 60), (4, 34, 64, 124)],
)
def test_table1_rows(n, N, proposed, baseline):
    row = table1_compare(n)
    assert (row.N, row.proposed_units, row.baseline_units) == (N, proposed, baseline)
    assert row.proposed_qubits == 2 ** (n + 2) + 1
    assert row.baseline_qubits == 2 * N - 3
