"""Layered Toffoli-network synthesis with exact GF(2) and NMR verification."""

__version__ = "0.1.0"

from .circuit import (
    Circuit,
    CircuitError,
    CircuitParseError,
    LayerDisjointnessError,
    Metrics,
    MqgLayer,
    QubitRef,
    Toffoli,
    apply_gate,
    make_circuit,
    metrics,
    mqg_roles,
    parse,
    push_layer,
    serialize,
)
from .gf2 import Anf, block_A, block_Z, closed_form_outputs, verify_appendix
from .synthesis import (
    ComparisonRow,
    PaddedSpec,
    SynthesisSpec,
    synth_baseline_dirty,
    synth_mqg_network,
    synth_padded,
    table1_compare,
)
from .sim import (
    EquivReport,
    run_all,
    run_anf,
    run_basis,
    run_statevector,
    trace_blocks,
)
from .nmr import (
    LatticeConfig,
    RefocusSequence,
    SpinRef,
    ZZTerm,
    apply_sequence,
    build_hamiltonian,
    canonical_sequence,
    effective_evolution,
    verify_identity,
)
