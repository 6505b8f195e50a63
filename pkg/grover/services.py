"""
Service layer for stored sweeps.
Creates runs, evaluates them point by point into SweepRow objects, and
turns stored rows back into SweepRecord values for export.
"""
import logging
import math
from typing import Callable, Iterable, List, Optional

from django.db import transaction
from django.utils import timezone

from .exceptions import DomainError
from .experiments import SweepRecord, sweep_alpha, sweep_lambda
from .models import SweepRow, SweepRun

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int], None]


def create_sweep_run(kind: str, grid: Iterable[float], alpha: float = math.pi,
                     lambda_value: Optional[float] = None, k_cap: Optional[int] = None) -> SweepRun:
    """Creates a pending run; alpha sweeps need lambda_value."""
    grid = [float(v) for v in grid]
    if kind not in (SweepRun.KIND_LAMBDA, SweepRun.KIND_ALPHA):
        raise DomainError(f"unknown sweep kind {kind!r}")
    if not grid:
        raise DomainError("a sweep needs at least one grid point")
    if kind == SweepRun.KIND_ALPHA and lambda_value is None:
        raise DomainError("an alpha sweep needs a lambda value")
    return SweepRun.objects.create(
        kind=kind,
        grid=grid,
        alpha=alpha,
        lambda_value=lambda_value,
        k_cap=k_cap,
    )


def _evaluate_point(run: SweepRun, value: float) -> SweepRecord:
    if run.kind == SweepRun.KIND_ALPHA:
        return sweep_alpha(run.lambda_value, [value], run.k_cap)[0]
    return sweep_lambda([value], run.alpha)[0]


def _row_fields(record: SweepRecord) -> dict:
    data = record.to_dict()
    data['lambda_value'] = data.pop('lambda')
    return data


def run_sweep(run: SweepRun, progress: Optional[ProgressCallback] = None) -> SweepRun:
    """
    Evaluates every grid point of a run and stores one row per point, in
    grid order. Per-point failures are rows; anything else marks the run failed
    and is re-raised.
    """
    run.status = SweepRun.STATUS_RUNNING
    run.error = ''
    run.save(update_fields=['status', 'error'])
    total = len(run.grid)
    try:
        with transaction.atomic():
            run.rows.all().delete()
            for index, value in enumerate(run.grid):
                record = _evaluate_point(run, value)
                SweepRow.objects.create(run=run, index=index, **_row_fields(record))
                if progress:
                    progress(index + 1, total)
    except Exception as e:
        run.status = SweepRun.STATUS_FAILED
        run.error = str(e)
        run.finished_at = timezone.now()
        run.save(update_fields=['status', 'error', 'finished_at'])
        raise

    run.status = SweepRun.STATUS_DONE
    run.finished_at = timezone.now()
    run.save(update_fields=['status', 'finished_at'])
    logger.info("Sweep run %s finished with %d rows", run.pk, total)
    return run


def run_to_records(run: SweepRun) -> List[SweepRecord]:
    """Stored rows as SweepRecord values, in grid order."""
    records = []
    for row in run.rows.order_by('index'):
        records.append(SweepRecord(
            lam=row.lambda_value,
            alpha=row.alpha,
            k=row.k,
            k_opt=row.k_opt,
            k_prime_opt=row.k_prime_opt,
            theta0=row.theta0,
            theta1=row.theta1,
            theta2=row.theta2,
            success_d2p=row.success_d2p,
            success_std=row.success_std,
            residual_norm=row.residual_norm,
            status=row.status,
            error=row.error,
        ))
    return records
