"""
Exact n-qubit statevector simulation.

Amplitudes are indexed by basis state with qubit 0 as the least
significant bit. Besides gate-by-gate simulation this module applies the
reflection about an arbitrary initial state densely, which is what amplitude
amplification with a general preparation needs.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Tuple

import numpy as np

from .exceptions import DomainError, OutOfSubspace
from .gates import Circuit, GateOp, apply_to_amplitudes, marked_phase_gates
from .subspace import SubspaceState

logger = logging.getLogger(__name__)

# Constants
MAX_QUBITS = 24
NORM_TOLERANCE = 1e-10
SUBSPACE_TOLERANCE = 1e-8
OVERLAP_TOLERANCE = 1e-9


def _check_register(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= MAX_QUBITS:
        raise DomainError(f"qubit count must lie in [1, {MAX_QUBITS}], got {n!r}")
    return int(n)


def _marked_mask(n: int, marked: Iterable[int]) -> np.ndarray:
    mask = np.zeros(2 ** n, dtype=bool)
    for index in marked:
        if isinstance(index, bool) or int(index) != index or not 0 <= index < 2 ** n:
            raise DomainError(f"marked index {index!r} out of range for {n} qubits")
        mask[int(index)] = True
    return mask


@dataclass(frozen=True)
class SearchSpec:
    """A register of n qubits and the set of marked basis states."""
    n_qubits: int
    marked: FrozenSet[int]

    def __post_init__(self):
        n = _check_register(self.n_qubits)
        marked = frozenset(int(i) for i in self.marked)
        if len(marked) != len(tuple(self.marked)):
            raise DomainError("marked indices must be distinct")
        _marked_mask(n, marked)
        if not 1 <= len(marked) < 2 ** n:
            raise DomainError(f"need 1 <= M < N, got M={len(marked)} for N={2 ** n}")
        object.__setattr__(self, 'n_qubits', n)
        object.__setattr__(self, 'marked', marked)

    @property
    def N(self) -> int:
        return 2 ** self.n_qubits

    @property
    def M(self) -> int:
        return len(self.marked)

    @property
    def lam(self) -> float:
        return self.M / self.N


@dataclass(frozen=True, eq=False)
class StateVector:
    """2^n amplitudes; read-only once built."""
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        n = _check_register(self.n_qubits)
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape[0] != 2 ** n:
            raise DomainError(f"{n} qubits need {2 ** n} amplitudes, got {amplitudes.shape[0]}")
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise DomainError(f"state is not normalized (norm {norm!r})")
        amplitudes.setflags(write=False)
        object.__setattr__(self, 'n_qubits', n)
        object.__setattr__(self, 'amplitudes', amplitudes)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> 'StateVector':
        size = len(amplitudes)
        n = size.bit_length() - 1
        if size < 2 or 2 ** n != size:
            raise DomainError(f"amplitude count must be a power of two, got {size}")
        return cls(n, amplitudes)

    @classmethod
    def basis(cls, n: int, index: int) -> 'StateVector':
        amplitudes = np.zeros(2 ** _check_register(n), dtype=complex)
        amplitudes[index] = 1.0
        return cls(n, amplitudes)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def uniform_superposition(n: int) -> StateVector:
    n = _check_register(n)
    return StateVector(n, np.full(2 ** n, 2.0 ** (-n / 2.0), dtype=complex))


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    return StateVector(state.n_qubits, apply_to_amplitudes(state.amplitudes, gate, state.n_qubits))


def run(circuit: Circuit, init: StateVector) -> StateVector:
    """Apply the gates in list order. No measurement is performed."""
    if circuit.n_qubits != init.n_qubits:
        raise DomainError(f"circuit has {circuit.n_qubits} qubits, state has {init.n_qubits}")
    amplitudes = init.amplitudes
    for gate in circuit:
        amplitudes = apply_to_amplitudes(amplitudes, gate, circuit.n_qubits)
    return StateVector(circuit.n_qubits, amplitudes)


def success_probability(state: StateVector, marked: Iterable[int]) -> float:
    mask = _marked_mask(state.n_qubits, marked)
    return float(np.sum(np.abs(state.amplitudes[mask]) ** 2))


def marked_overlap(state: StateVector, marked: Iterable[int]) -> float:
    """lambda' = squared norm of the state's projection onto the marked basis states."""
    return success_probability(state, marked)


def project_subspace(state: StateVector, spec: SearchSpec, strict: bool = True) -> Tuple[SubspaceState, float]:
    """
    Amplitudes on |R> and |T> with the norm of the component left outside
    their span.

    Raises:
        OutOfSubspace: the residual exceeds 1e-8 and ``strict`` is set
    """
    if state.n_qubits != spec.n_qubits:
        raise DomainError(f"state has {state.n_qubits} qubits, search has {spec.n_qubits}")
    mask = _marked_mask(spec.n_qubits, spec.marked)
    amplitudes = state.amplitudes
    a_t = amplitudes[mask].sum() / math.sqrt(spec.M)
    a_r = amplitudes[~mask].sum() / math.sqrt(spec.N - spec.M)
    inside = np.where(mask, a_t / math.sqrt(spec.M), a_r / math.sqrt(spec.N - spec.M))
    residual = float(np.linalg.norm(amplitudes - inside))
    if strict and residual > SUBSPACE_TOLERANCE:
        raise OutOfSubspace(residual)
    return SubspaceState(complex(a_r), complex(a_t)), residual


def reflect_about(state: StateVector, axis_state: StateVector, beta: float) -> StateVector:
    """e^{i beta} (I - (1 - e^{-i beta}) |a><a|) applied densely, a = axis_state."""
    if state.n_qubits != axis_state.n_qubits:
        raise DomainError(f"state has {state.n_qubits} qubits, axis has {axis_state.n_qubits}")
    axis = axis_state.amplitudes
    overlap = np.vdot(axis, state.amplitudes)
    reflected = state.amplitudes - (1.0 - cmath.exp(-1j * beta)) * overlap * axis
    return StateVector(state.n_qubits, cmath.exp(1j * beta) * reflected)


def amplify(init: StateVector, marked: Iterable[int], schedule) -> StateVector:
    """
    Run a phase schedule from an arbitrary initial state: the oracle circuit
    on the marked indices alternates with the dense reflection about init.
    The schedule must be solved for lambda' = marked_overlap(init, marked).
    """
    marked = tuple(sorted(set(marked)))
    overlap = marked_overlap(init, marked)
    if abs(overlap - schedule.lam) > OVERLAP_TOLERANCE:
        raise DomainError(
            f"schedule solved for lambda={schedule.lam!r} but the state's overlap is {overlap!r}"
        )
    oracle = Circuit(init.n_qubits, marked_phase_gates(init.n_qubits, marked, schedule.alpha))
    phases = (schedule.theta1, schedule.theta2)
    state = init
    for i in range(schedule.k):
        state = reflect_about(run(oracle, state), init, phases[i % 2])
        state = StateVector(state.n_qubits, -state.amplitudes)
    logger.debug("Amplified %d-qubit state over %d iterates", init.n_qubits, schedule.k)
    return state
