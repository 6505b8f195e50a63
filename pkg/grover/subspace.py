"""
Exact arithmetic of the two-dimensional {|R>, |T>} search model.

|R> is the equal superposition of the unmarked basis states and |T> the
equal superposition of the marked ones; a state of the search is the pair
of amplitudes (a_R, a_T). The oracle, the reflection about the initial
state and the Grover iterate are 2x2 unitaries on that pair. Two alternating
iterates combine into an SU(2) rotation whose powers have a closed form,
which is what lets the solver evaluate hundreds of queries in O(1).
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .exceptions import DomainError

logger = logging.getLogger(__name__)

# Constants
UNITARY_TOLERANCE = 1e-12
DEGENERATE_SIN = 1e-12

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def check_lambda(lam: float) -> float:
    """Validate a marked fraction: finite and strictly inside (0, 1)."""
    if not math.isfinite(lam) or not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam!r}")
    return float(lam)


def check_query_count(k: int) -> int:
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise DomainError(f"query count k must be a positive integer, got {k!r}")
    return int(k)


@dataclass(frozen=True)
class SubspaceState:
    """Amplitudes of |R> and |T>."""
    a_R: complex
    a_T: complex

    @classmethod
    def from_vector(cls, vector) -> 'SubspaceState':
        return cls(complex(vector[0]), complex(vector[1]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a_R, self.a_T], dtype=complex)

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.a_R) ** 2 + abs(self.a_T) ** 2)

    @property
    def success(self) -> float:
        """Probability of measuring a marked state."""
        return abs(self.a_T) ** 2

    def rephased(self, angle: float) -> 'SubspaceState':
        phase = complex(math.cos(angle), math.sin(angle))
        return SubspaceState(self.a_R * phase, self.a_T * phase)

    def phase_fixed(self) -> 'SubspaceState':
        """
        Remove the global phase: the larger amplitude (a_R on ties) becomes
        real and non-negative. Well defined at both poles.
        """
        pivot = self.a_R if abs(self.a_R) >= abs(self.a_T) else self.a_T
        if pivot == 0:
            return self
        unit = pivot / abs(pivot)
        return SubspaceState(self.a_R / unit, self.a_T / unit)


@dataclass(frozen=True, eq=False)
class Unitary2:
    """A 2x2 complex matrix acting on (a_R, a_T)."""
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    def __matmul__(self, other: 'Unitary2') -> 'Unitary2':
        return Unitary2(self.matrix @ other.matrix)

    def __neg__(self) -> 'Unitary2':
        return Unitary2(-self.matrix)

    def dagger(self) -> 'Unitary2':
        return Unitary2(self.matrix.conj().T)

    def is_unitary(self, tol: float = UNITARY_TOLERANCE) -> bool:
        return bool(np.allclose((self.dagger() @ self).matrix, IDENTITY, rtol=0, atol=tol))


@dataclass(frozen=True)
class RotationDecomposition:
    """
    An SU(2) matrix written as cos(phi) I + i sin(phi) (n . sigma).

    phi is kept in [0, pi] with the sign carried by the axis. When sin(phi)
    vanishes the axis is undefined, ``degenerate`` is set and the matrix is
    cos(phi) I = +/- I.
    """
    phi: float
    n_x: float
    n_y: float
    n_z: float
    degenerate: bool = False

    @property
    def axis(self) -> np.ndarray:
        return np.array([self.n_x, self.n_y, self.n_z])

    @classmethod
    def from_components(cls, cos_phi: float, sx: float, sy: float, sz: float) -> 'RotationDecomposition':
        """Build from cos(phi) and the three products sin(phi) * n_j."""
        sin_phi = math.sqrt(sx * sx + sy * sy + sz * sz)
        phi = math.atan2(sin_phi, cos_phi)
        if sin_phi < DEGENERATE_SIN:
            return cls(phi=0.0 if cos_phi > 0 else math.pi, n_x=0.0, n_y=0.0, n_z=0.0, degenerate=True)
        return cls(phi=phi, n_x=sx / sin_phi, n_y=sy / sin_phi, n_z=sz / sin_phi)

    def pauli(self) -> np.ndarray:
        return self.n_x * PAULI_X + self.n_y * PAULI_Y + self.n_z * PAULI_Z


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)


def initial_state(lam: float) -> SubspaceState:
    """The equal superposition sqrt(1-lambda)|R> + sqrt(lambda)|T>."""
    lam = check_lambda(lam)
    return SubspaceState(complex(math.sqrt(1.0 - lam)), complex(math.sqrt(lam)))


def oracle_matrix(alpha: float) -> Unitary2:
    """S_o(alpha) = diag(1, e^{i alpha}): phase alpha on the marked states."""
    if not math.isfinite(alpha):
        raise DomainError(f"oracle phase must be finite, got {alpha!r}")
    return Unitary2(np.diag([1.0, np.exp(1j * alpha)]))


def reflection_matrix(beta: float, lam: float) -> Unitary2:
    """
    S_r(beta) = e^{i beta} (I - (1 - e^{-i beta}) |psi0><psi0|), written out
    entrywise with the prefactor folded in.
    """
    lam = check_lambda(lam)
    u = 1.0 - np.exp(1j * beta)
    off = u * math.sqrt(lam * (1.0 - lam))
    return Unitary2([
        [1.0 - u * lam, off],
        [off, 1.0 - u * (1.0 - lam)],
    ])


def grover_iterate(alpha: float, beta: float, lam: float) -> Unitary2:
    """G(alpha, beta) = -S_r(beta) S_o(alpha)."""
    return -(reflection_matrix(beta, lam) @ oracle_matrix(alpha))


def apply(unitary: Unitary2, state: SubspaceState) -> SubspaceState:
    return SubspaceState.from_vector(unitary.matrix @ state.vector)


def rotation_decomposition(unitary: Unitary2, global_phase: float = None) -> Tuple[RotationDecomposition, float]:
    """
    Split a 2x2 unitary into e^{i gamma} M with M in SU(2).

    gamma defaults to half the determinant's argument; pass it explicitly
    to pin the sign of M. Returns (decomposition of M, gamma).
    """
    if global_phase is None:
        global_phase = 0.5 * float(np.angle(np.linalg.det(unitary.matrix)))
    m = unitary.matrix * np.exp(-1j * global_phase)
    cos_phi = 0.5 * float((m[0, 0] + m[1, 1]).real)
    sx = 0.5 * float((m[0, 1] + m[1, 0]).imag)
    sy = 0.5 * float((m[0, 1] - m[1, 0]).real)
    sz = 0.5 * float((m[0, 0] - m[1, 1]).imag)
    return RotationDecomposition.from_components(max(-1.0, min(1.0, cos_phi)), sx, sy, sz), global_phase


def pair_iterate_decomposition(theta1: float, theta2: float, lam: float) -> RotationDecomposition:
    """
    Closed-form rotation of M = e^{-i(theta1+theta2)/2} G_d(theta2) G_d(theta1),
    G_d being the iterate with the standard oracle (alpha = pi).
    """
    lam = check_lambda(lam)
    root = math.sqrt(lam * (1.0 - lam))
    half1, half2 = math.sin(theta1 / 2.0), math.sin(theta2 / 2.0)
    cos_phi = math.cos((theta1 + theta2) / 2.0) + 8.0 * lam * (1.0 - lam) * half1 * half2
    return RotationDecomposition.from_components(
        max(-1.0, min(1.0, cos_phi)),
        2.0 * root * math.sin((theta1 - theta2) / 2.0),
        4.0 * (1.0 - 2.0 * lam) * root * half1 * half2,
        -(1.0 - 2.0 * lam) * math.sin((theta1 + theta2) / 2.0),
    )


def pair_matrix(lam: float, alpha: float, theta1: float, theta2: float) -> Unitary2:
    """Two consecutive iterates, theta1 first: G(alpha, theta2) G(alpha, theta1)."""
    return grover_iterate(alpha, theta2, lam) @ grover_iterate(alpha, theta1, lam)


def pair_global_phase(alpha: float, theta1: float, theta2: float) -> float:
    """
    gamma with det(e^{-i gamma} G(alpha, theta2) G(alpha, theta1)) = 1; equals
    (theta1 + theta2)/2 for the standard oracle.
    """
    return 0.5 * (theta1 + theta2) + (alpha - math.pi)


def pair_decomposition(lam: float, alpha: float, theta1: float, theta2: float) -> Tuple[RotationDecomposition, float]:
    return rotation_decomposition(pair_matrix(lam, alpha, theta1, theta2),
                                  global_phase=pair_global_phase(alpha, theta1, theta2))


def pair_power(decomposition: RotationDecomposition, m: int) -> Unitary2:
    """cos(m phi) I + i sin(m phi) (n . sigma); (+/- I)^m when degenerate."""
    if m < 0:
        raise DomainError(f"power must be non-negative, got {m}")
    angle = m * decomposition.phi
    if decomposition.degenerate:
        return Unitary2(round(math.cos(angle)) * IDENTITY)
    return Unitary2(math.cos(angle) * IDENTITY + 1j * math.sin(angle) * decomposition.pauli())


def final_state(lam: float, alpha: float, theta1: float, theta2: float, k: int) -> SubspaceState:
    """
    State after k iterates applied to the initial state, odd-numbered ones
    with theta1 and even-numbered ones with theta2. Full pairs go through
    the closed-form power, a trailing odd iterate is applied directly.
    """
    k = check_query_count(k)
    state = initial_state(lam)
    pairs, odd = divmod(k, 2)
    if pairs:
        decomposition, gamma = pair_decomposition(lam, alpha, theta1, theta2)
        state = apply(pair_power(decomposition, pairs), state).rephased(pairs * gamma)
    if odd:
        state = apply(grover_iterate(alpha, theta1, lam), state)
    return state


def iterate_states(lam: float, alpha: float, theta1: float, theta2: float, k: int) -> List[SubspaceState]:
    """The initial state followed by the state after each of the k iterates."""
    k = check_query_count(k)
    iterates = (grover_iterate(alpha, theta1, lam), grover_iterate(alpha, theta2, lam))
    states = [initial_state(lam)]
    for i in range(k):
        states.append(apply(iterates[i % 2], states[-1]))
    return states


def bloch_coords(state: SubspaceState) -> BlochVector:
    """Bloch vector with |R> at the north pole and |T> at the south pole."""
    fixed = state.phase_fixed()
    overlap = fixed.a_R.conjugate() * fixed.a_T
    return BlochVector(
        x=2.0 * overlap.real,
        y=2.0 * overlap.imag,
        z=abs(fixed.a_R) ** 2 - abs(fixed.a_T) ** 2,
    )


def trajectory(lam: float, alpha: float, theta1: float, theta2: float, k: int) -> List[BlochVector]:
    return [bloch_coords(state) for state in iterate_states(lam, alpha, theta1, theta2, k)]
