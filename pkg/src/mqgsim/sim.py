"""Execution backends over a Circuit.

Three ways to run the same circuit: per-basis-state bit pushing, symbolic
GF(2) simulation (exact for any width), and dense state-vector application
via the circuit's basis permutation. The exhaustive checker compares the
whole truth table against a reference permutation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .circuit import Circuit, CircuitError, QubitRef
from .gf2 import Anf, block_A, block_D_final, block_Z
from .synthesis import SynthesisSpec, synth_mqg_network

DEFAULT_EXHAUSTIVE_LIMIT = 24


def bits_to_word(bits: Sequence[int]) -> int:
    word = 0
    for i, b in enumerate(bits):
        if b:
            word |= 1 << i
    return word


def word_to_bits(word: int, width: int) -> tuple[int, ...]:
    return tuple((word >> i) & 1 for i in range(width))


def bitstring(word: int, width: int) -> str:
    """Flat-index order, lowest index first."""
    return "".join(str((word >> i) & 1) for i in range(width))


def _gate_masks(circuit: Circuit) -> list[tuple[int, int, int]]:
    idx = circuit.index_of
    masks = []
    for layer in circuit.layers:
        for g in layer.gates:
            masks.append((1 << idx[g.ctrl1], 1 << idx[g.ctrl2], 1 << idx[g.target]))
    return masks


def run_word(circuit: Circuit, word: int) -> int:
    for c1, c2, t in _gate_masks(circuit):
        if word & c1 and word & c2:
            word ^= t
    return word


def run_basis(circuit: Circuit, bits: Sequence[int]) -> tuple[int, ...]:
    """Apply all layers in order to one basis state given as a bit sequence."""
    if len(bits) != circuit.num_qubits:
        raise CircuitError(
            f"input width {len(bits)} != circuit width {circuit.num_qubits}"
        )
    return word_to_bits(run_word(circuit, bits_to_word(bits)), circuit.num_qubits)


def all_outputs(circuit: Circuit) -> np.ndarray:
    """Vectorized truth table: outputs[s] = circuit applied to basis state s."""
    M = circuit.num_qubits
    states = np.arange(1 << M, dtype=np.uint64)
    for c1, c2, t in _gate_masks(circuit):
        cond = (states & c1).astype(bool) & (states & c2).astype(bool)
        states[cond] ^= np.uint64(t)
    return states


@dataclass(frozen=True)
class EquivReport:
    mode: str  # exhaustive | symbolic | sampled
    states_checked: int
    passed: bool
    counterexample: dict | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "mode": self.mode,
                "states_checked": self.states_checked,
                "pass": self.passed,
                "counterexample": self.counterexample,
            },
            indent=2,
        )


def run_all(
    circuit: Circuit,
    reference: Callable[[int], int],
    max_qubits: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> EquivReport:
    """Exhaustive truth-table comparison; also asserts the map is a bijection."""
    M = circuit.num_qubits
    if M > max_qubits:
        raise CircuitError(
            f"{M} qubits exceeds the exhaustive limit {max_qubits}; "
            "use run_anf for a symbolic check"
        )
    outputs = all_outputs(circuit)
    if len(np.unique(outputs)) != 1 << M:
        raise CircuitError("circuit output map is not a bijection")
    expected = np.fromiter(
        (reference(s) for s in range(1 << M)), dtype=np.uint64, count=1 << M
    )
    bad = np.nonzero(outputs != expected)[0]
    if bad.size:
        s = int(bad[0])
        return EquivReport(
            mode="exhaustive",
            states_checked=1 << M,
            passed=False,
            counterexample={
                "input": bitstring(s, M),
                "expected": bitstring(int(expected[s]), M),
                "actual": bitstring(int(outputs[s]), M),
            },
        )
    return EquivReport(mode="exhaustive", states_checked=1 << M, passed=True)


def run_anf(circuit: Circuit) -> dict[QubitRef, Anf]:
    """Symbolic simulation; exact for any Toffoli circuit."""
    idx = circuit.index_of
    wires = [Anf.var(i) for i in range(circuit.num_qubits)]
    for layer in circuit.layers:
        # Snapshot not needed: supports are disjoint within a layer.
        for g in layer.gates:
            t = idx[g.target]
            wires[t] = wires[t] ^ (wires[idx[g.ctrl1]] & wires[idx[g.ctrl2]])
    return {ref: wires[i] for i, ref in enumerate(circuit.roles)}


def circuit_permutation(circuit: Circuit, max_qubits: int = 20) -> np.ndarray:
    if circuit.num_qubits > max_qubits:
        raise CircuitError(
            f"{circuit.num_qubits} qubits exceeds the state-vector limit {max_qubits}"
        )
    return all_outputs(circuit)


def run_statevector(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    """Apply the circuit's basis permutation to a dense amplitude vector."""
    perm = circuit_permutation(circuit)
    if state.shape != perm.shape:
        raise CircuitError(
            f"state dimension {state.shape} != {perm.shape} (2^qubits)"
        )
    out = np.empty_like(state)
    out[perm] = state
    return out


@dataclass(frozen=True)
class BlockTrace:
    """Numeric (A_l(k), Z_l(k), D_l(k)) read off the running simulation."""

    l: int
    k: int
    a: int
    z: int
    d: int


def trace_blocks(circuit: Circuit, n: int, bits: Sequence[int]) -> list[BlockTrace]:
    """Run the n-network layer by layer, reading block-boundary wire values.

    Z_l(k) is a_l after layer 4k-2; A_l(k) and D_l(k) are a_l and d_l after
    layer 4k. The circuit must be the canonical n-network.
    """
    reference = synth_mqg_network(SynthesisSpec(n))
    if circuit != reference:
        raise CircuitError("circuit is not the block-structured n-network")
    if len(bits) != circuit.num_qubits:
        raise CircuitError(
            f"input width {len(bits)} != circuit width {circuit.num_qubits}"
        )
    idx = circuit.index_of
    m = 2**n
    word = bits_to_word(bits)
    masks = [
        [(1 << idx[g.ctrl1], 1 << idx[g.ctrl2], 1 << idx[g.target]) for g in layer.gates]
        for layer in circuit.layers
    ]
    z_at: dict[tuple[int, int], int] = {}
    traces: list[BlockTrace] = []
    for layer_no, layer_masks in enumerate(masks, start=1):
        for c1, c2, t in layer_masks:
            if word & c1 and word & c2:
                word ^= t
        if layer_no % 4 == 2:
            k = (layer_no + 2) // 4
            for l in range(1, m + 1):
                z_at[(l, k)] = (word >> idx[QubitRef("A", l)]) & 1
        elif layer_no % 4 == 0:
            k = layer_no // 4
            for l in range(1, m + 1):
                traces.append(
                    BlockTrace(
                        l=l,
                        k=k,
                        a=(word >> idx[QubitRef("A", l)]) & 1,
                        z=z_at[(l, k)],
                        d=(word >> idx[QubitRef("D", l)]) & 1,
                    )
                )
    return traces


def oracle_trace(n: int, bits: Sequence[int]) -> dict[tuple[int, int], tuple[int, int, int | None]]:
    """Evaluate the recurrence ANFs at one input: (l, k) -> (a, z, d or None).

    d is only pinned by the oracle at the final stage k = 2^n.
    """
    m = 2**n
    out = {}
    for k in range(1, m + 1):
        for l in range(1, m + 1):
            d = block_D_final(n, l).evaluate(bits) if k == m else None
            out[(l, k)] = (
                block_A(n, l, k).evaluate(bits),
                block_Z(n, l, k).evaluate(bits),
                d,
            )
    return out
