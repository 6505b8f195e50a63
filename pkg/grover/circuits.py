"""
Ancilla-free circuits for the two-phase search, multiply-controlled phase
lowering, and OpenQASM 3 export.
"""
import logging
import math
from typing import List

import numpy as np

from .exceptions import DomainError
from .gates import (
    CNOT,
    Circuit,
    GateOp,
    GlobalPhase,
    H,
    MCPhase,
    MCX,
    Phase,
    X,
    apply_to_amplitudes,
    marked_phase_gates,
)
from .statevector import SearchSpec

logger = logging.getLogger(__name__)

# Constants
MAX_UNITARY_QUBITS = 10
SCHEDULE_TOLERANCE = 1e-12
QASM_HEADER = (
    'OPENQASM 3.0;\n'
    'include "stdgates.inc";\n'
    '// qubit 0 is the least significant bit of the basis-state index\n'
)


def build_preparation(n: int) -> Circuit:
    """Walsh-Hadamard layer taking |0...0> to the equal superposition."""
    return Circuit(n, [H(q) for q in range(n)])


def build_oracle(spec: SearchSpec, alpha: float = math.pi) -> Circuit:
    return Circuit(spec.n_qubits, marked_phase_gates(spec.n_qubits, spec.marked, alpha))


def build_reflection(n: int, theta: float) -> Circuit:
    """
    e^{i theta} (I - (1 - e^{-i theta}) |psi0><psi0|) exactly: the all-ones
    state picks up e^{-i theta} between the H/X layers and a GlobalPhase
    record carries the prefactor.
    """
    everything = tuple(range(n))
    hadamards = [H(q) for q in everything]
    flips = [X(q) for q in everything]
    return Circuit(n, hadamards + flips + [MCPhase(everything, -theta)] + flips + hadamards + [GlobalPhase(theta)])


def build_iterate(spec: SearchSpec, alpha: float, theta: float) -> Circuit:
    """G(alpha, theta) = -S_r(theta) S_o(alpha), sign included."""
    return (build_oracle(spec, alpha)
            + build_reflection(spec.n_qubits, theta)
            + Circuit(spec.n_qubits, [GlobalPhase(math.pi)]))


def build_d2p(spec: SearchSpec, schedule) -> Circuit:
    """Hadamard layer, then k iterates: odd-numbered use theta1, even-numbered theta2."""
    if abs(schedule.lam - spec.lam) > SCHEDULE_TOLERANCE:
        raise DomainError(f"schedule solved for lambda={schedule.lam!r}, search has lambda={spec.lam!r}")
    circuit = build_preparation(spec.n_qubits)
    iterates = (build_iterate(spec, schedule.alpha, schedule.theta1),
                build_iterate(spec, schedule.alpha, schedule.theta2))
    for i in range(schedule.k):
        circuit = circuit + iterates[i % 2]
    return circuit


def _mcphase_step(gate: MCPhase) -> List[GateOp]:
    """
    One recursion level for m >= 2 qubits, target = last qubit: the MCX pair
    sandwiches Phase(-theta/2) so that the target sees diag(e^{-i theta/2},
    e^{i theta/2}) when the controls are all ones, and the (m-1)-qubit
    MCPhase(theta/2) on the controls supplies the rest.
    """
    *controls, target = gate.qubits
    half = gate.theta / 2.0
    return [
        MCX(tuple(controls), target),
        Phase(target, -half),
        MCX(tuple(controls), target),
        Phase(target, half),
        MCPhase(tuple(controls), half),
    ]


def _register(gate, n_qubits):
    return n_qubits if n_qubits is not None else max(gate.qubits) + 1


def lower_mcphase(gate: MCPhase, n_qubits: int = None) -> Circuit:
    """
    Recursive MCX + single-qubit phase form of an m-qubit MCPhase:
    2(m-1) MCX gates and 2(m-1)+1 Phase gates, exact including global phase.
    """
    n_qubits = _register(gate, n_qubits)
    gates = []
    while len(gate.qubits) > 1:
        *head, gate = _mcphase_step(gate)
        gates.extend(head)
    gates.append(Phase(gate.qubits[0], gate.theta))
    return Circuit(n_qubits, gates)


def lower_cphase(gate: MCPhase, n_qubits: int = None) -> Circuit:
    """Two-qubit controlled phase from two CNOTs and three Phase gates."""
    if len(gate.qubits) != 2:
        raise DomainError(f"lower_cphase needs a two-qubit MCPhase, got {len(gate.qubits)} qubits")
    a, b = gate.qubits
    half = gate.theta / 2.0
    return Circuit(_register(gate, n_qubits), [
        Phase(a, half),
        Phase(b, half),
        CNOT(a, b),
        Phase(b, -half),
        CNOT(a, b),
    ])


def _lower_gate(gate: GateOp) -> List[GateOp]:
    if not isinstance(gate, MCPhase):
        return [gate]
    if len(gate.qubits) == 1:
        return [Phase(gate.qubits[0], gate.theta)]
    if len(gate.qubits) == 2:
        return list(lower_cphase(gate))
    *head, rest = _mcphase_step(gate)
    return head + _lower_gate(rest)


def lower_all(circuit: Circuit) -> Circuit:
    """Replace every MCPhase; the result uses H, X, Phase, CNOT, MCX and GlobalPhase only."""
    gates = [lowered for gate in circuit for lowered in _lower_gate(gate)]
    logger.debug("Lowered %d gates into %d", len(circuit), len(gates))
    return Circuit(circuit.n_qubits, gates)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the gate product (n <= 10)."""
    n = circuit.n_qubits
    if n > MAX_UNITARY_QUBITS:
        raise DomainError(f"dense unitaries are limited to {MAX_UNITARY_QUBITS} qubits, got {n}")
    unitary = np.eye(2 ** n, dtype=complex)
    for gate in circuit:
        unitary = apply_to_amplitudes(unitary, gate, n)
    return unitary


def _angle(theta: float) -> str:
    return format(theta, '.17g')


def _operands(qubits) -> str:
    return ', '.join(f'q[{q}]' for q in qubits)


def _qasm_line(gate: GateOp) -> str:
    if isinstance(gate, H):
        return f'h q[{gate.qubit}];'
    if isinstance(gate, X):
        return f'x q[{gate.qubit}];'
    if isinstance(gate, Phase):
        return f'p({_angle(gate.theta)}) q[{gate.qubit}];'
    if isinstance(gate, CNOT):
        return f'cx q[{gate.control}], q[{gate.target}];'
    if isinstance(gate, MCX):
        return f'ctrl({len(gate.controls)}) @ x {_operands(gate.qubits)};'
    if isinstance(gate, MCPhase):
        if len(gate.qubits) == 1:
            return f'p({_angle(gate.theta)}) q[{gate.qubits[0]}];'
        return f'ctrl({len(gate.qubits) - 1}) @ p({_angle(gate.theta)}) {_operands(gate.qubits)};'
    if isinstance(gate, GlobalPhase):
        return f'gphase({_angle(gate.theta)});'
    raise DomainError(f"unknown gate {gate!r}")


def to_qasm(circuit: Circuit) -> str:
    """OpenQASM 3.0 text, angles as 17-significant-digit literals, LF line endings."""
    lines = [f'qubit[{circuit.n_qubits}] q;']
    lines.extend(_qasm_line(gate) for gate in circuit)
    return QASM_HEADER + '\n'.join(lines) + '\n'
