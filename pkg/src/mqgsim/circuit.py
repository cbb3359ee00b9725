"""Role-labeled reversible circuits built from layers of disjoint Toffoli gates.

A circuit is a fixed set of wires, each tagged with a role label (``A0``,
``B1``, ...), plus a sequence of layers. Every gate in a layer touches a
disjoint set of wires, so the gates of one layer commute and can be thought
of as executing simultaneously. Basis states are plain integers with bit 0
corresponding to flat wire index 0 (little-endian).
"""
from __future__ import annotations

from dataclasses import dataclass, field

ROLES = ("A", "B", "C", "D")

FORMAT_MAGIC = "MQGC1"


class CircuitError(ValueError):
    """Invalid circuit construction."""


class LayerDisjointnessError(CircuitError):
    """Two gates in one layer share a wire."""


class CircuitParseError(CircuitError):
    """Malformed circuit file; carries the 1-based offending line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True, order=True)
class QubitRef:
    """A wire identified by role letter and row index, e.g. B3."""

    role: str
    index: int

    def __post_init__(self):
        if self.role not in ROLES:
            raise CircuitError(f"unknown role {self.role!r}")
        if self.index < 0:
            raise CircuitError(f"negative qubit index {self.index}")

    @property
    def label(self) -> str:
        return f"{self.role}{self.index}"

    @classmethod
    def from_label(cls, label: str) -> "QubitRef":
        role, digits = label[:1], label[1:]
        if role not in ROLES or not digits.isdigit():
            raise CircuitError(f"bad qubit label {label!r}")
        return cls(role, int(digits))

    def __repr__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Toffoli:
    """C2-NOT: flips ``target`` iff both controls are 1."""

    ctrl1: QubitRef
    ctrl2: QubitRef
    target: QubitRef

    def __post_init__(self):
        if len({self.ctrl1, self.ctrl2, self.target}) != 3:
            raise CircuitError(f"duplicate wire in gate {self}")

    @property
    def support(self) -> frozenset[QubitRef]:
        return frozenset((self.ctrl1, self.ctrl2, self.target))

    def __repr__(self) -> str:
        return f"T({self.ctrl1},{self.ctrl2}->{self.target})"


@dataclass(frozen=True)
class MqgLayer:
    """One simultaneous layer of support-disjoint Toffoli gates."""

    gates: tuple[Toffoli, ...]

    def __post_init__(self):
        if not self.gates:
            raise CircuitError("empty layer")
        seen: set[QubitRef] = set()
        for g in self.gates:
            if seen & g.support:
                raise LayerDisjointnessError(
                    f"gate {g} overlaps wires {sorted(seen & g.support)}"
                )
            seen |= g.support

    @property
    def support(self) -> frozenset[QubitRef]:
        return frozenset().union(*(g.support for g in self.gates))


@dataclass(frozen=True)
class Metrics:
    qubit_count: int
    mqg_count: int
    toffoli_count: int
    depth: int


@dataclass(frozen=True)
class Circuit:
    """Immutable circuit: role map (flat index -> QubitRef) plus layers."""

    num_qubits: int
    roles: tuple[QubitRef, ...]
    layers: tuple[MqgLayer, ...] = ()
    index_of: dict[QubitRef, int] = field(
        init=False, repr=False, compare=False, hash=False, default=None
    )

    def __post_init__(self):
        if len(self.roles) != self.num_qubits:
            raise CircuitError(
                f"role map covers {len(self.roles)} of {self.num_qubits} qubits"
            )
        index_of = {ref: i for i, ref in enumerate(self.roles)}
        if len(index_of) != self.num_qubits:
            raise CircuitError("role map is not a bijection (duplicate labels)")
        object.__setattr__(self, "index_of", index_of)
        for layer in self.layers:
            for g in layer.gates:
                for ref in g.support:
                    if ref not in index_of:
                        raise CircuitError(f"gate wire {ref} not in role map")


def make_circuit(n_qubits: int, roles: dict[int, QubitRef]) -> Circuit:
    """Build an empty circuit from a flat-index -> QubitRef map."""
    if sorted(roles) != list(range(n_qubits)):
        raise CircuitError(
            f"role map keys must be exactly 0..{n_qubits - 1}, got {sorted(roles)}"
        )
    return Circuit(n_qubits, tuple(roles[i] for i in range(n_qubits)))


def push_layer(circuit: Circuit, gates) -> Circuit:
    """Return a copy of ``circuit`` with one more layer appended."""
    layer = MqgLayer(tuple(gates))
    for ref in layer.support:
        if ref not in circuit.index_of:
            raise CircuitError(f"gate wire {ref} not in circuit")
    return Circuit(circuit.num_qubits, circuit.roles, circuit.layers + (layer,))


def apply_gate(bits: dict[QubitRef, int], g: Toffoli) -> dict[QubitRef, int]:
    """Apply one Toffoli to a wire-valued bit assignment."""
    out = dict(bits)
    out[g.target] = bits[g.target] ^ (bits[g.ctrl1] & bits[g.ctrl2])
    return out


def metrics(circuit: Circuit) -> Metrics:
    return Metrics(
        qubit_count=circuit.num_qubits,
        mqg_count=len(circuit.layers),
        toffoli_count=sum(len(layer.gates) for layer in circuit.layers),
        depth=len(circuit.layers),
    )


def mqg_roles(n: int) -> tuple[QubitRef, ...]:
    """Canonical wire order of the 2^(n+2)+1-qubit network.

    a_0 first, then per row l = 1..2^n the block (b_l, c_l, d_l, a_l); keeps
    each layer's support contiguous.
    """
    if n < 1:
        raise CircuitError(f"need n >= 1, got {n}")
    refs = [QubitRef("A", 0)]
    for l in range(1, 2**n + 1):
        refs += [QubitRef("B", l), QubitRef("C", l), QubitRef("D", l), QubitRef("A", l)]
    return tuple(refs)


def serialize(circuit: Circuit) -> str:
    lines = [FORMAT_MAGIC, f"qubits {circuit.num_qubits}"]
    for i, ref in enumerate(circuit.roles):
        lines.append(f"role {i} {ref.label}")
    for layer in circuit.layers:
        lines.append("layer")
        for g in layer.gates:
            idx = circuit.index_of
            lines.append(f"toff {idx[g.ctrl1]} {idx[g.ctrl2]} {idx[g.target]}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> Circuit:
    """Strict parser for the MQGC1 format; raises CircuitParseError."""
    lines = text.splitlines()

    def fail(lineno: int, msg: str):
        raise CircuitParseError(lineno, msg)

    if not lines or lines[0] != FORMAT_MAGIC:
        fail(1, f"expected header {FORMAT_MAGIC!r}")
    if len(lines) < 2 or not lines[1].startswith("qubits "):
        fail(2, "expected 'qubits <M>'")
    try:
        num_qubits = int(lines[1].split()[1])
    except (IndexError, ValueError):
        fail(2, f"bad qubit count in {lines[1]!r}")
    if num_qubits < 1:
        fail(2, f"qubit count must be positive, got {num_qubits}")

    roles: dict[int, QubitRef] = {}
    pos = 2
    for i in range(num_qubits):
        lineno = pos + i + 1
        if pos + i >= len(lines):
            fail(lineno, "missing role line")
        parts = lines[pos + i].split()
        if len(parts) != 3 or parts[0] != "role":
            fail(lineno, f"expected 'role <index> <label>', got {lines[pos + i]!r}")
        try:
            flat = int(parts[1])
            ref = QubitRef.from_label(parts[2])
        except (ValueError, CircuitError) as e:
            fail(lineno, str(e))
        if flat != i:
            fail(lineno, f"role index {flat} out of order (expected {i})")
        roles[flat] = ref
    pos += num_qubits

    try:
        circuit = make_circuit(num_qubits, roles)
    except CircuitError as e:
        fail(pos, str(e))

    current: list[Toffoli] | None = None
    layer_start = pos

    def close_layer():
        nonlocal circuit, current
        if current is not None:
            try:
                circuit = push_layer(circuit, current)
            except CircuitError as e:
                fail(layer_start + 1, str(e))
            current = None

    for off, line in enumerate(lines[pos:]):
        lineno = pos + off + 1
        if line == "layer":
            close_layer()
            current = []
            layer_start = pos + off
        elif line.startswith("toff "):
            if current is None:
                fail(lineno, "toff outside a layer block")
            parts = line.split()
            if len(parts) != 4:
                fail(lineno, f"expected 'toff <c1> <c2> <t>', got {line!r}")
            try:
                c1, c2, t = (int(p) for p in parts[1:])
            except ValueError:
                fail(lineno, f"non-integer index in {line!r}")
            for idx in (c1, c2, t):
                if not 0 <= idx < num_qubits:
                    fail(lineno, f"index {idx} out of range 0..{num_qubits - 1}")
            try:
                current.append(
                    Toffoli(circuit.roles[c1], circuit.roles[c2], circuit.roles[t])
                )
            except CircuitError as e:
                fail(lineno, str(e))
        elif line.strip() == "":
            fail(lineno, "blank line not allowed")
        else:
            fail(lineno, f"unknown keyword in {line!r}")
    close_layer()
    return circuit
