"""Construction of the layered Toffoli networks.

Three builders live here: the 2^(n+2)-layer network whose only net effect
is to flip a_{2^n} when all 2^(n+1)+1 controls are 1, the padded variant
that pins surplus controls to 1 so smaller multi-controlled NOTs fall out,
and the conventional dirty-ancilla V-chain used for the unit-count
comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import (
    Circuit,
    CircuitError,
    QubitRef,
    Toffoli,
    metrics,
    mqg_roles,
    push_layer,
)


@dataclass(frozen=True)
class SynthesisSpec:
    """Parameters of the n-network; m = 2^n rows."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise CircuitError(f"need n >= 1, got {self.n}")

    @property
    def rows(self) -> int:
        return 2**self.n

    @property
    def qubit_count(self) -> int:
        return 2 ** (self.n + 2) + 1

    @property
    def control_count(self) -> int:
        return 2 ** (self.n + 1) + 1

    @property
    def simulated_gate_qubits(self) -> int:
        # N in the C^(N-1)-NOT being simulated: controls + target.
        return 2 ** (self.n + 1) + 2


def synth_mqg_network(spec: SynthesisSpec) -> Circuit:
    """Build the 2^(n+2)-layer network.

    Layers alternate between type 1, T(a_{l-1}, c_l -> d_l) for every row,
    and type 2, T(b_l, d_l -> a_l); the pair repeats 2^(n+1) times.
    """
    m = spec.rows
    roles = mqg_roles(spec.n)
    circuit = Circuit(len(roles), roles)
    type1 = tuple(
        Toffoli(QubitRef("A", l - 1), QubitRef("C", l), QubitRef("D", l))
        for l in range(1, m + 1)
    )
    type2 = tuple(
        Toffoli(QubitRef("B", l), QubitRef("D", l), QubitRef("A", l))
        for l in range(1, m + 1)
    )
    for _ in range(2 * m):
        circuit = push_layer(circuit, type1)
        circuit = push_layer(circuit, type2)
    return circuit


def _pin_order(n: int) -> list[QubitRef]:
    # Highest rows first, c before b; a_0 is never pinned.
    order = []
    for l in range(2**n, 0, -1):
        order.append(QubitRef("C", l))
        order.append(QubitRef("B", l))
    return order


@dataclass(frozen=True)
class PaddedSpec:
    """Use the n-network as a C^(N'-1)-NOT by pinning surplus controls to 1."""

    base: SynthesisSpec
    active_controls: int
    pinned: frozenset[QubitRef] = field(init=False)

    def __post_init__(self):
        budget = self.base.control_count
        if not 2 <= self.active_controls <= budget:
            raise CircuitError(
                f"active control count {self.active_controls} outside 2..{budget}"
            )
        surplus = budget - self.active_controls
        object.__setattr__(
            self, "pinned", frozenset(_pin_order(self.base.n)[:surplus])
        )


def synth_padded(p: PaddedSpec) -> tuple[Circuit, frozenset[QubitRef]]:
    """The unmodified network plus the set of controls to hold at 1."""
    return synth_mqg_network(p.base), p.pinned


def baseline_roles(m_controls: int) -> tuple[QubitRef, ...]:
    """Wire order of the V-chain: controls, then ancillas, then target."""
    controls = tuple(QubitRef("C", i) for i in range(1, m_controls + 1))
    ancillas = tuple(QubitRef("D", i) for i in range(1, m_controls - 1))
    return controls + ancillas + (QubitRef("A", 0),)


def synth_baseline_dirty(m_controls: int) -> Circuit:
    """Two-pass V-chain computing t ^= c_1...c_m with dirty ancillas.

    Uses m-2 ancillas whose initial values may be arbitrary; they are
    restored by the second pass. Gate count 4(m-2), one gate per layer.
    """
    if m_controls < 3:
        raise CircuitError(f"need at least 3 controls, got {m_controls}")
    m = m_controls
    c = {i: QubitRef("C", i) for i in range(1, m + 1)}
    x = {i: QubitRef("D", i) for i in range(1, m - 1)}
    t = QubitRef("A", 0)

    down = [Toffoli(c[m], x[m - 2], t)]
    down += [Toffoli(c[i + 2], x[i], x[i + 1]) for i in range(m - 3, 0, -1)]
    peak = Toffoli(c[1], c[2], x[1])
    gates = (
        down + [peak] + down[::-1] + down[1:] + [peak] + down[:0:-1]
    )

    roles = baseline_roles(m)
    circuit = Circuit(len(roles), roles)
    for g in gates:
        circuit = push_layer(circuit, [g])
    return circuit


@dataclass(frozen=True)
class ComparisonRow:
    """One unit-count comparison row; units follow 2N-4 vs 4(N-3)."""

    N: int
    proposed_units: int
    proposed_qubits: int
    baseline_units: int
    baseline_qubits: int


def table1_compare(n: int) -> ComparisonRow:
    """Formula row cross-checked against the actual constructions."""
    spec = SynthesisSpec(n)
    N = spec.simulated_gate_qubits
    row = ComparisonRow(
        N=N,
        proposed_units=2 * N - 4,
        proposed_qubits=spec.qubit_count,
        baseline_units=4 * (N - 3),
        baseline_qubits=2 * N - 3,
    )
    proposed = metrics(synth_mqg_network(spec))
    baseline = metrics(synth_baseline_dirty(N - 1))
    if proposed.mqg_count != row.proposed_units:
        raise CircuitError(
            f"layer count {proposed.mqg_count} != 2N-4 = {row.proposed_units}"
        )
    if baseline.toffoli_count != row.baseline_units:
        raise CircuitError(
            f"baseline gate count {baseline.toffoli_count} != 4(N-3) = {row.baseline_units}"
        )
    if proposed.qubit_count != row.proposed_qubits:
        raise CircuitError("proposed qubit count mismatch")
    if baseline.qubit_count != row.baseline_qubits:
        raise CircuitError("baseline qubit count mismatch")
    return row
