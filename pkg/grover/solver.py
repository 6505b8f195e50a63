"""
Query counts and diffusion phases for the deterministic two-parameter search.

The solver drives (theta1, theta2) to a root of the ground-truth residual
(Re, Im) of <R|psi_f>, built from the 2x2 model, with a damped Newton
iteration and a numerically differenced Jacobian. The printed closed-form
conditions (even and odd k) are only used as cross-checks.
"""
import itertools
import logging
import math
import sys
from dataclasses import dataclass, asdict
from typing import Callable, Iterator, Optional, Tuple

import numpy as np

from .exceptions import DomainError, LARGE_LAMBDA_GUIDANCE, NoConvergence
from .subspace import (
    SubspaceState,
    check_lambda,
    check_query_count,
    final_state,
)

logger = logging.getLogger(__name__)

# Constants
NEWTON_STOP = 1e-12
NEWTON_ACCEPT = 1e-10
NEWTON_MAX_STEPS = 100
JACOBIAN_STEP = 1e-7
MIN_DAMPING = 1.0 / 1024
MULTISTART_GRID = 16
K_CAP_FACTOR = 8
BOUNDARY_TOLERANCE = 1e-9
ASIN_SNAP = 4 * sys.float_info.epsilon
TRANSCRIPTION_TOLERANCE = 1e-6
MAX_SEARCH_FRACTION = 0.25

Residual = Tuple[float, float]


@dataclass(frozen=True)
class PhaseSchedule:
    """A protocol: k iterates alternating theta1, theta2 with oracle phase alpha."""
    lam: float
    alpha: float
    k: int
    theta1: float
    theta2: float
    residual_norm: float

    @property
    def solved(self) -> bool:
        return self.residual_norm < NEWTON_ACCEPT

    def final_state(self) -> SubspaceState:
        return final_state(self.lam, self.alpha, self.theta1, self.theta2, self.k)

    @property
    def success(self) -> float:
        return self.final_state().success

    def to_dict(self) -> dict:
        data = asdict(self)
        data['lambda'] = data.pop('lam')
        data['success'] = self.success
        return data


@dataclass(frozen=True)
class QueryPlan:
    k_opt: int
    k_prime_opt: int
    theta: float
    theta0: Optional[float]


def wrap_angle(angle: float) -> float:
    """Representative of angle mod 2pi in (-pi, pi]."""
    return math.pi - (math.pi - angle) % (2.0 * math.pi)


def angular_distance(a: float, b: float) -> float:
    return abs(wrap_angle(a - b))


def is_standard_oracle(alpha: float) -> bool:
    return angular_distance(alpha, math.pi) < 1e-12


def check_search_fraction(lam: float) -> float:
    """Lambda values the deterministic protocol covers: (0, 1/4]."""
    lam = check_lambda(lam)
    if lam > MAX_SEARCH_FRACTION:
        raise DomainError(f"lambda={lam!r} exceeds 1/4. {LARGE_LAMBDA_GUIDANCE}")
    return lam


def _check_below_half(lam: float) -> float:
    lam = check_lambda(lam)
    if lam >= 0.5:
        raise DomainError(f"lambda must lie in (0, 1/2), got {lam!r}")
    return lam


def polar_angle(lam: float) -> float:
    """theta = 2 asin(sqrt(lambda)), the polar angle of the initial state."""
    return 2.0 * math.asin(math.sqrt(check_lambda(lam)))


def _rotation_count(lam: float) -> float:
    return math.pi / (4.0 * math.asin(math.sqrt(lam))) - 0.5


def k_opt(lam: float) -> int:
    """Smallest query count admitting exact phases: ceil(pi/(4 asin sqrt(lambda)) - 1/2)."""
    lam = check_search_fraction(lam)
    return max(1, math.ceil(_rotation_count(lam) - BOUNDARY_TOLERANCE))


def k_prime_opt(lam: float) -> int:
    """Optimal count of the standard search: nearest integer, halves rounded up."""
    lam = _check_below_half(lam)
    return max(1, math.floor(_rotation_count(lam) + 0.5 + BOUNDARY_TOLERANCE))


def theta0(lam: float, k: int) -> float:
    """Phase of the controllable-oracle protocol: 2 asin(sin(pi/(4k+2)) / sqrt(lambda))."""
    lam = check_lambda(lam)
    k = check_query_count(k)
    argument = math.sin(math.pi / (4 * k + 2)) / math.sqrt(lam)
    if argument > 1.0 + ASIN_SNAP:
        raise DomainError(f"theta0 undefined for lambda={lam!r}, k={k}: {k} queries are too few")
    if argument > 1.0 - ASIN_SNAP:
        argument = 1.0
    return 2.0 * math.asin(argument)


def std_success(lam: float) -> float:
    """Success probability of the standard search after k'_opt queries."""
    lam = _check_below_half(lam)
    return math.sin((k_prime_opt(lam) + 0.5) * polar_angle(lam)) ** 2


def query_plan(lam: float) -> QueryPlan:
    lam = check_search_fraction(lam)
    k = k_opt(lam)
    try:
        reference = theta0(lam, k)
    except DomainError:
        reference = None
    return QueryPlan(k_opt=k, k_prime_opt=k_prime_opt(lam), theta=polar_angle(lam), theta0=reference)


def chebyshev_u(degree: int, x: float) -> float:
    """U_degree(x), so that U_{m-1}(cos phi) = sin(m phi)/sin(phi); U_{-1} = 0."""
    if degree < 0:
        return 0.0
    previous, current = 0.0, 1.0
    for _ in range(degree):
        previous, current = current, 2.0 * x * current - previous
    return current


def _pair_cos_phi(theta1: float, theta2: float, lam: float) -> float:
    value = math.cos((theta1 + theta2) / 2.0) + 8.0 * lam * (1.0 - lam) * math.sin(theta1 / 2.0) * math.sin(theta2 / 2.0)
    return max(-1.0, min(1.0, value))


def residual_even(theta1: float, theta2: float, lam: float, k: int) -> Residual:
    """
    Printed conditions for even k with the poles cleared.

    The first equation is multiplied by cos(k phi/2), turning
    tan(k phi/2)/sin(phi) into U_{k/2-1}(cos phi); the second is multiplied
    by cos(theta1/2) cos(theta2/2). Both vanish at a deterministic schedule.
    """
    lam = _check_below_half(lam)
    k = check_query_count(k)
    if k % 2:
        raise DomainError(f"residual_even needs an even k, got {k}")
    m = k // 2
    cos_phi = _pair_cos_phi(theta1, theta2, lam)
    phi = math.acos(cos_phi)
    first = (math.cos(m * phi)
             + 4.0 * lam * (1.0 - 2.0 * lam) * math.sin(theta1 / 2.0) * math.sin(theta2 / 2.0)
             * chebyshev_u(m - 1, cos_phi))
    second = ((1.0 - 4.0 * lam) * math.sin(theta1 / 2.0) * math.cos(theta2 / 2.0)
              + math.cos(theta1 / 2.0) * math.sin(theta2 / 2.0))
    return first, second


def residual_odd(theta1: float, theta2: float, lam: float, k: int) -> Residual:
    """Printed conditions for odd k, poles cleared by cos((k-1) phi/2)."""
    lam = _check_below_half(lam)
    k = check_query_count(k)
    if k % 2 == 0:
        raise DomainError(f"residual_odd needs an odd k, got {k}")
    m = (k - 1) // 2
    c = 1.0 - 2.0 * lam
    cos_phi = _pair_cos_phi(theta1, theta2, lam)
    phi = math.acos(cos_phi)
    cos_m = math.cos(m * phi)
    ratio = chebyshev_u(m - 1, cos_phi)
    s1, s2 = math.sin(theta1 / 2.0), math.sin(theta2 / 2.0)

    bracket = (math.sin(theta1) * math.cos(theta2 / 2.0)
               + (1.0 + 4.0 * lam - 8.0 * lam ** 2 + (1.0 - 8.0 * lam + 8.0 * lam ** 2) * math.cos(theta1)) * s2)
    first = cos_m * (2.0 * lam + c * math.cos(theta1)) - c * s1 * bracket * ratio

    bracket = (c * (8.0 * lam * (1.0 - lam) * s1 * math.sin(theta1) * s2
                    + math.cos(theta1) * math.sin((theta1 + theta2) / 2.0))
               - 2.0 * lam * math.sin((theta1 - theta2) / 2.0))
    second = cos_m * c * math.sin(theta1) + bracket * ratio
    return first, second


def residual_generic(theta1: float, theta2: float, lam: float, alpha: float, k: int) -> Residual:
    """(Re, Im) of <R|psi_f> after fixing the global phase; the solver's target."""
    a_r = final_state(lam, alpha, theta1, theta2, k).phase_fixed().a_R
    return a_r.real, a_r.imag


def printed_residual(schedule: PhaseSchedule) -> Residual:
    """Closed-form residual matching the parity of the schedule's k (alpha = pi only)."""
    if not is_standard_oracle(schedule.alpha):
        raise DomainError("the printed conditions assume the standard oracle (alpha = pi)")
    check = residual_even if schedule.k % 2 == 0 else residual_odd
    return check(schedule.theta1, schedule.theta2, schedule.lam, schedule.k)


def transcription_discrepancy(schedule: PhaseSchedule) -> float:
    return max(abs(v) for v in printed_residual(schedule))


def _objective(lam: float, alpha: float, k: int) -> Callable[[np.ndarray], np.ndarray]:
    def objective(x):
        return np.array(residual_generic(x[0], x[1], lam, alpha, k))
    return objective


def _jacobian(objective, x: np.ndarray) -> np.ndarray:
    jacobian = np.empty((2, 2))
    for j in range(2):
        step = np.zeros(2)
        step[j] = JACOBIAN_STEP
        jacobian[:, j] = (objective(x + step) - objective(x - step)) / (2.0 * JACOBIAN_STEP)
    return jacobian


def _newton(objective, start) -> Tuple[np.ndarray, float]:
    """
    Damped Newton: least-squares step (the Jacobian may be rank deficient,
    e.g. theta2 is idle when k = 1), halved until the residual norm drops.
    """
    x = np.array(start, dtype=float)
    f = objective(x)
    norm = float(np.hypot(*f))
    for _ in range(NEWTON_MAX_STEPS):
        if norm < NEWTON_STOP:
            break
        delta = np.linalg.lstsq(_jacobian(objective, x), -f, rcond=None)[0]
        damping = 1.0
        while damping >= MIN_DAMPING:
            trial = x + damping * delta
            f_trial = objective(trial)
            trial_norm = float(np.hypot(*f_trial))
            if trial_norm < norm:
                break
            damping *= 0.5
        else:
            break  # stalled
        x, f, norm = trial, f_trial, trial_norm
    return x, norm


def _preference_distance(point: Tuple[float, float], preferred: Tuple[float, float]) -> float:
    return angular_distance(point[0], preferred[0]) + angular_distance(point[1], preferred[1])


def preferred_start(lam: float, k: int) -> Tuple[float, float]:
    """(theta0, -theta0), or (pi, -pi) when theta0 is out of domain."""
    try:
        reference = theta0(lam, k)
    except DomainError:
        return math.pi, -math.pi
    return reference, -reference


def multistart_points(preferred: Tuple[float, float]) -> Iterator[Tuple[float, float]]:
    """Uniform grid over (-pi, pi]^2, nearest to the preferred point first."""
    axis = [-math.pi + (i + 1) * 2.0 * math.pi / MULTISTART_GRID for i in range(MULTISTART_GRID)]
    points = sorted(itertools.product(axis, axis), key=lambda p: _preference_distance(p, preferred))
    return iter(points)


def solve(lam: float, k: int, alpha: float = math.pi) -> PhaseSchedule:
    """
    Diffusion phases (theta1, theta2) for which k queries of the oracle with
    phase alpha land exactly on the marked states.

    Raises:
        DomainError: lambda > 1/4, or k < k_opt with the standard oracle
        NoConvergence: no start converged (k too small for this alpha)
    """
    lam = check_search_fraction(lam)
    k = check_query_count(k)
    if is_standard_oracle(alpha) and k < k_opt(lam):
        raise DomainError(f"k={k} is below k_opt={k_opt(lam)} for lambda={lam!r}")

    objective = _objective(lam, alpha, k)
    preferred = preferred_start(lam, k)

    root, norm = _newton(objective, preferred)
    if norm >= NEWTON_ACCEPT:
        logger.info(
            "Newton from (%.6f, %.6f) stalled at residual %.3e (lambda=%r, k=%d, alpha=%r); trying multistart",
            preferred[0], preferred[1], norm, lam, k, alpha
        )
        for start in multistart_points(preferred):
            root, norm = _newton(objective, start)
            if norm < NEWTON_ACCEPT:
                logger.debug("Multistart converged from (%.4f, %.4f)", start[0], start[1])
                break
        else:
            raise NoConvergence(
                f"No phases found for lambda={lam!r}, k={k}, alpha={alpha!r}",
                lam=lam, alpha=alpha, k=k,
            )

    theta1, theta2 = wrap_angle(root[0]), wrap_angle(root[1])
    if is_standard_oracle(alpha):
        # (-theta1, -theta2) gives the complex-conjugate trajectory, also a root
        mirrored = (wrap_angle(-theta1), wrap_angle(-theta2))
        if _preference_distance(mirrored, preferred) < _preference_distance((theta1, theta2), preferred):
            theta1, theta2 = mirrored

    schedule = PhaseSchedule(
        lam=lam,
        alpha=alpha,
        k=k,
        theta1=theta1,
        theta2=theta2,
        residual_norm=float(np.hypot(*residual_generic(theta1, theta2, lam, alpha, k))),
    )
    if is_standard_oracle(alpha):
        discrepancy = transcription_discrepancy(schedule)
        if discrepancy > TRANSCRIPTION_TOLERANCE:
            logger.warning(
                "Printed conditions disagree at lambda=%r, k=%d: residual %.3e",
                lam, k, discrepancy
            )
    return schedule


def solve_min_k(lam: float, alpha: float, k_cap: Optional[int] = None) -> PhaseSchedule:
    """
    Schedule with the fewest queries for the given oracle phase.

    No exact protocol beats k_opt, so the search starts there. Once k
    queries admit exact phases so do k + 1, which lets the search try
    k_opt, k_opt + 1, k_opt + 3, k_opt + 7, ... up to the cap and then
    bisect between the last failure and the first success. Every failed
    attempt costs a full multistart, so this keeps the number of failures
    logarithmic in the distance to the answer.

    Raises:
        DomainError: lambda > 1/4, or a cap below k_opt
        NoConvergence: no k up to the cap admits exact phases
    """
    lam = check_search_fraction(lam)
    lowest = k_opt(lam)
    cap = k_cap if k_cap is not None else K_CAP_FACTOR * lowest
    if cap < lowest:
        raise DomainError(f"k_cap={cap!r} is below k_opt={lowest} for lambda={lam!r}")

    def attempt(k):
        try:
            return solve(lam, k, alpha)
        except NoConvergence:
            logger.debug("No phases for lambda=%r, alpha=%r at k=%d", lam, alpha, k)
            return None

    failed, step = lowest - 1, 1
    while True:
        k = min(lowest + step - 1, cap)
        found = attempt(k)
        if found is not None:
            break
        failed = k
        if k == cap:
            raise NoConvergence(
                f"No phases for lambda={lam!r}, alpha={alpha!r} with k <= {cap}",
                lam=lam, alpha=alpha, k=cap,
            )
        step *= 2

    while found.k - failed > 1:
        middle = (failed + found.k) // 2
        schedule = attempt(middle)
        if schedule is not None:
            found = schedule
        else:
            failed = middle
    return found


def theta0_schedule(lam: float, k: int) -> PhaseSchedule:
    """
    The phase-matched protocol with a controllable oracle: oracle phase
    theta0 and reflection phase -theta0 (the sign that matches the e^{i beta}
    prefactor convention of the reflection).
    """
    reference = theta0(lam, k)
    phase = wrap_angle(-reference)
    return PhaseSchedule(
        lam=lam,
        alpha=reference,
        k=k,
        theta1=phase,
        theta2=phase,
        residual_norm=float(np.hypot(*residual_generic(phase, phase, lam, reference, k))),
    )


def standard_schedule(lam: float, k: Optional[int] = None) -> PhaseSchedule:
    """Original search: both phases pi, k'_opt queries unless k is given."""
    lam = _check_below_half(lam)
    k = check_query_count(k) if k is not None else k_prime_opt(lam)
    return PhaseSchedule(
        lam=lam,
        alpha=math.pi,
        k=k,
        theta1=math.pi,
        theta2=math.pi,
        residual_norm=float(np.hypot(*residual_generic(math.pi, math.pi, lam, math.pi, k))),
    )
