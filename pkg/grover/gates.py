"""
Gate records, circuits and the numpy kernels that apply them.

Qubit 0 is the least significant bit of a basis-state index. Kernels view
the leading axis of length 2^n as an n-dimensional tensor, so qubit q is
tensor axis n - 1 - q; any trailing axes (e.g. the columns of a unitary
under construction) are carried along untouched.
"""
import cmath
import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Tuple, Union

import numpy as np

from .exceptions import DomainError

SQRT_HALF = 1.0 / math.sqrt(2.0)


def _check_qubits(qubits: Tuple[int, ...]):
    for qubit in qubits:
        if isinstance(qubit, bool) or int(qubit) != qubit or qubit < 0:
            raise DomainError(f"qubit indices must be non-negative integers, got {qubit!r}")
    if len(set(qubits)) != len(qubits):
        raise DomainError(f"qubit indices must be distinct within a gate, got {qubits}")


class Gate:
    def __post_init__(self):
        _check_qubits(self.qubits)


@dataclass(frozen=True)
class H(Gate):
    qubit: int

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class X(Gate):
    qubit: int

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class Phase(Gate):
    """diag(1, e^{i theta}) on one qubit."""
    qubit: int
    theta: float

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class CNOT(Gate):
    control: int
    target: int

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class MCX(Gate):
    """NOT on the target when every control is |1>."""
    controls: Tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, 'controls', tuple(self.controls))
        if not self.controls:
            raise DomainError("MCX needs at least one control")
        super().__post_init__()

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.controls + (self.target,)


@dataclass(frozen=True)
class MCPhase(Gate):
    """e^{i theta} on the all-ones subspace of its qubits; symmetric in them."""
    qubits: Tuple[int, ...]
    theta: float

    def __post_init__(self):
        object.__setattr__(self, 'qubits', tuple(self.qubits))
        if not self.qubits:
            raise DomainError("MCPhase needs at least one qubit")
        super().__post_init__()


@dataclass(frozen=True)
class GlobalPhase(Gate):
    theta: float

    @property
    def qubits(self) -> Tuple[int, ...]:
        return ()


GateOp = Union[H, X, Phase, CNOT, MCX, MCPhase, GlobalPhase]


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list on n_qubits qubits."""
    n_qubits: int
    gates: Tuple[GateOp, ...] = ()

    def __post_init__(self):
        if isinstance(self.n_qubits, bool) or int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise DomainError(f"a circuit needs a positive qubit count, got {self.n_qubits!r}")
        object.__setattr__(self, 'gates', tuple(self.gates))
        for gate in self.gates:
            if any(q >= self.n_qubits for q in gate.qubits):
                raise DomainError(f"{gate} acts outside a {self.n_qubits}-qubit register")

    def __add__(self, other: 'Circuit') -> 'Circuit':
        if other.n_qubits != self.n_qubits:
            raise DomainError(f"cannot join circuits on {self.n_qubits} and {other.n_qubits} qubits")
        return Circuit(self.n_qubits, self.gates + other.gates)

    def __iter__(self) -> Iterator[GateOp]:
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def gate_counts(self) -> Counter:
        return Counter(type(gate).__name__ for gate in self.gates)


def marked_phase_gates(n: int, marked: Iterable[int], alpha: float) -> List[GateOp]:
    """
    Oracle gates: for each marked index in ascending order, X on every
    qubit whose bit is 0, an n-qubit MCPhase(alpha), and the undoing X gates.
    """
    gates = []
    everything = tuple(range(n))
    for index in sorted(marked):
        flips = [X(q) for q in everything if not (index >> q) & 1]
        gates.extend(flips)
        gates.append(MCPhase(everything, alpha))
        gates.extend(flips)
    return gates


def _index(n: int, fixed: Dict[int, int]) -> tuple:
    index = [slice(None)] * n
    for qubit, bit in fixed.items():
        index[n - 1 - qubit] = bit
    return tuple(index)


def _swap(tensor: np.ndarray, n: int, controls: Tuple[int, ...], target: int):
    fixed = {c: 1 for c in controls}
    low = _index(n, {**fixed, target: 0})
    high = _index(n, {**fixed, target: 1})
    tensor[low], tensor[high] = tensor[high].copy(), tensor[low].copy()


def apply_to_amplitudes(amplitudes: np.ndarray, gate: GateOp, n: int) -> np.ndarray:
    """Apply one gate along the leading axis; returns a new array."""
    if any(q >= n for q in gate.qubits):
        raise DomainError(f"{gate} acts outside a {n}-qubit register")
    out = np.array(amplitudes, dtype=complex)
    if out.shape[0] != 2 ** n:
        raise DomainError(f"expected a leading axis of {2 ** n}, got {out.shape[0]}")
    tensor = out.reshape((2,) * n + out.shape[1:])

    if isinstance(gate, GlobalPhase):
        out *= cmath.exp(1j * gate.theta)
    elif isinstance(gate, H):
        low, high = _index(n, {gate.qubit: 0}), _index(n, {gate.qubit: 1})
        zero, one = tensor[low].copy(), tensor[high].copy()
        tensor[low] = (zero + one) * SQRT_HALF
        tensor[high] = (zero - one) * SQRT_HALF
    elif isinstance(gate, X):
        _swap(tensor, n, (), gate.qubit)
    elif isinstance(gate, CNOT):
        _swap(tensor, n, (gate.control,), gate.target)
    elif isinstance(gate, MCX):
        _swap(tensor, n, gate.controls, gate.target)
    elif isinstance(gate, Phase):
        tensor[_index(n, {gate.qubit: 1})] *= cmath.exp(1j * gate.theta)
    elif isinstance(gate, MCPhase):
        tensor[_index(n, {q: 1 for q in gate.qubits})] *= cmath.exp(1j * gate.theta)
    else:
        raise DomainError(f"unknown gate {gate!r}")
    return out
