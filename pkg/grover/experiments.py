"""
Sweeps over the marked fraction and the oracle phase, trajectory data, and
CSV / JSON export of both.

A failing grid point never aborts a sweep: it becomes a row with a status
and the error text, and the remaining points are still evaluated.
"""
import csv
import io
import json
import logging
import math
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from .exceptions import DomainError, ExportError, NoConvergence
from .solver import (
    NEWTON_ACCEPT,
    TRANSCRIPTION_TOLERANCE,
    PhaseSchedule,
    angular_distance,
    is_standard_oracle,
    k_opt,
    query_plan,
    residual_generic,
    solve,
    solve_min_k,
    std_success,
    transcription_discrepancy,
)
from .subspace import BlochVector

logger = logging.getLogger(__name__)

# Defaults
LAMBDA_GRID_POINTS = 200
LAMBDA_MIN = 2.0 ** -16
LAMBDA_MAX = 0.25
ALPHA_GRID_POINTS = 721
ASYMPTOTIC_EXPONENTS = tuple(range(6, 17))

STATUS_SOLVED = 'solved'
STATUS_NO_CONVERGENCE = 'no_convergence'
STATUS_INVALID = 'invalid'

RECORD_COLUMNS = (
    'lambda', 'alpha', 'k', 'k_opt', 'k_prime_opt', 'theta0', 'theta1', 'theta2',
    'success_d2p', 'success_std', 'residual_norm', 'status', 'error',
)
TRAJECTORY_COLUMNS = ('step', 'x', 'y', 'z')


@dataclass(frozen=True)
class SweepRecord:
    """One grid point of a sweep. Phase columns are empty when the point failed."""
    lam: float
    alpha: float
    k: Optional[int] = None
    k_opt: Optional[int] = None
    k_prime_opt: Optional[int] = None
    theta0: Optional[float] = None
    theta1: Optional[float] = None
    theta2: Optional[float] = None
    success_d2p: Optional[float] = None
    success_std: Optional[float] = None
    residual_norm: Optional[float] = None
    status: str = STATUS_SOLVED
    error: str = ''

    @property
    def solved(self) -> bool:
        return self.status == STATUS_SOLVED

    def schedule(self) -> Optional[PhaseSchedule]:
        if not self.solved:
            return None
        return PhaseSchedule(
            lam=self.lam, alpha=self.alpha, k=self.k,
            theta1=self.theta1, theta2=self.theta2, residual_norm=self.residual_norm,
        )

    def to_dict(self) -> dict:
        data = asdict(self)
        data['lambda'] = data.pop('lam')
        return {column: data[column] for column in RECORD_COLUMNS}


def _evaluate(lam: float, alpha: float, solver) -> SweepRecord:
    try:
        plan = query_plan(lam)
    except DomainError as exc:
        return SweepRecord(lam=lam, alpha=alpha, status=STATUS_INVALID, error=str(exc))

    columns = dict(
        lam=lam,
        alpha=alpha,
        k_opt=plan.k_opt,
        k_prime_opt=plan.k_prime_opt,
        theta0=plan.theta0,
        success_std=std_success(lam),
    )
    try:
        schedule = solver()
    except NoConvergence as exc:
        logger.info("No convergence at lambda=%r alpha=%r: %s", lam, alpha, exc)
        return SweepRecord(status=STATUS_NO_CONVERGENCE, error=str(exc), **columns)
    except DomainError as exc:
        return SweepRecord(status=STATUS_INVALID, error=str(exc), **columns)

    return SweepRecord(
        k=schedule.k,
        theta1=schedule.theta1,
        theta2=schedule.theta2,
        success_d2p=schedule.success,
        residual_norm=schedule.residual_norm,
        **columns,
    )


def sweep_lambda(lambda_grid: Iterable[float], alpha: float = math.pi) -> List[SweepRecord]:
    """One record per lambda, solved at k = k_opt(lambda); rows keep grid order."""
    records = []
    for lam in lambda_grid:
        lam = float(lam)
        records.append(_evaluate(lam, alpha, lambda: solve(lam, k_opt(lam), alpha)))
    logger.info(
        "Lambda sweep done: %d points, %d solved",
        len(records), sum(r.solved for r in records)
    )
    return records


def sweep_alpha(lam: float, alpha_grid: Iterable[float], k_cap: Optional[int] = None) -> List[SweepRecord]:
    """One record per oracle phase, each at the smallest k that admits exact phases."""
    records = []
    for alpha in alpha_grid:
        alpha = float(alpha)
        records.append(_evaluate(lam, alpha, lambda: solve_min_k(lam, alpha, k_cap)))
    logger.info(
        "Alpha sweep at lambda=%r done: %d points, %d solved",
        lam, len(records), sum(r.solved for r in records)
    )
    return records


def log_lambda_grid(points: int = LAMBDA_GRID_POINTS, lo: float = LAMBDA_MIN, hi: float = LAMBDA_MAX) -> List[float]:
    if points < 1 or not 0.0 < lo <= hi:
        raise DomainError(f"invalid lambda grid: points={points!r}, range=[{lo!r}, {hi!r}]")
    return [float(v) for v in np.geomspace(lo, hi, points)]


def alpha_grid(points: int = ALPHA_GRID_POINTS) -> List[float]:
    """points phases evenly spaced inside (0, 2pi); an odd count hits pi."""
    if points < 1:
        raise DomainError(f"alpha grid needs at least one point, got {points!r}")
    grid = np.linspace(0.0, 2.0 * math.pi, points + 2)[1:-1]
    grid[np.abs(grid - math.pi) < 1e-12] = math.pi
    return [float(v) for v in grid]


@dataclass(frozen=True)
class AsymptoticPoint:
    j: int
    lam: float
    k: int
    theta0: float
    theta1: float
    theta2: float
    deviation: float

    def to_dict(self) -> dict:
        data = asdict(self)
        data['lambda'] = data.pop('lam')
        return data


def small_lambda_asymptotics(exponents: Iterable[int] = ASYMPTOTIC_EXPONENTS) -> List[AsymptoticPoint]:
    """
    Solved phases along lambda = 2^-j against the controllable-oracle phase
    theta0; deviation = max(|theta1 - theta0|, |theta2 + theta0|), wrapped.
    """
    points = []
    for j in exponents:
        lam = 2.0 ** -j
        plan = query_plan(lam)
        schedule = solve(lam, plan.k_opt)
        deviation = max(angular_distance(schedule.theta1, plan.theta0),
                        angular_distance(schedule.theta2, -plan.theta0))
        points.append(AsymptoticPoint(j, lam, plan.k_opt, plan.theta0, schedule.theta1, schedule.theta2, deviation))
    return points


def transcription_report(records: Sequence[SweepRecord]) -> List[dict]:
    """Solved standard-oracle rows where the printed closed-form conditions do not vanish."""
    report = []
    for index, record in enumerate(records):
        if not record.solved or not is_standard_oracle(record.alpha):
            continue
        discrepancy = transcription_discrepancy(record.schedule())
        if discrepancy > TRANSCRIPTION_TOLERANCE:
            report.append({'index': index, 'lambda': record.lam, 'k': record.k, 'discrepancy': discrepancy})
    return report


def verify_record(record: SweepRecord):
    """Recompute the residual of a solved row; raises DomainError if it is not a root."""
    if not record.solved:
        return
    residual = math.hypot(*residual_generic(record.theta1, record.theta2, record.lam, record.alpha, record.k))
    if residual >= NEWTON_ACCEPT:
        raise DomainError(
            f"row lambda={record.lam!r} alpha={record.alpha!r} is marked solved but has residual {residual:.3e}"
        )


ExportData = Union[Sequence[SweepRecord], Sequence[BlochVector]]


def _rows(data: ExportData):
    if data and isinstance(data[0], BlochVector):
        return TRAJECTORY_COLUMNS, [
            {'step': step, 'x': point.x, 'y': point.y, 'z': point.z} for step, point in enumerate(data)
        ]
    for record in data:
        verify_record(record)
    return RECORD_COLUMNS, [record.to_dict() for record in data]


def _csv_cell(value) -> str:
    if value is None:
        return ''
    if isinstance(value, float):
        return format(value, '.17g')
    return str(value)


def render(data: ExportData, fmt: str) -> str:
    """Export text: CSV with a fixed header, or a JSON array of objects."""
    columns, rows = _rows(list(data))
    if fmt == 'json':
        return json.dumps(rows, indent=2) + '\n'
    if fmt != 'csv':
        raise DomainError(f"unknown export format {fmt!r}; use csv or json")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row[column]) for column in columns])
    return buffer.getvalue()


def export(data: ExportData, fmt: str, path) -> Path:
    """
    Write records or a trajectory to path.

    Raises:
        DomainError: unknown format, or a solved row that fails re-verification
        ExportError: the file could not be written
    """
    text = render(data, fmt)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8', newline='\n')
    except OSError as exc:
        raise ExportError(path, exc) from exc
    logger.info("Wrote %s export to %s", fmt, path)
    return path
