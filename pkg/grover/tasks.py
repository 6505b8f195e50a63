"""
Celery tasks for running stored sweeps in the background.
"""
import logging
import json
from typing import Optional

import redis
from celery import shared_task
from django.conf import settings
from django.utils import timezone as django_timezone

from .models import SweepRun
from .services import run_sweep

# Configure logger for this module
logger = logging.getLogger(__name__)

# Constants
REDIS_PROGRESS_KEY = 'd2p_search:sweep_progress'


def get_redis_client() -> redis.Redis:
    """Get Redis client instance for progress tracking."""
    return redis.from_url(settings.REDIS_URL)


def update_progress(
    run_id: int,
    done: int,
    total: int,
    status: str = 'running',
    error: Optional[str] = None
) -> None:
    """
    Update sweep progress in Redis.

    Args:
        run_id: Primary key of the SweepRun
        done: Grid points evaluated so far
        total: Grid points in the run
        status: 'running', 'done' or 'error'
        error: Error message if status is 'error'
    """
    try:
        r = get_redis_client()
        progress_raw = r.get(REDIS_PROGRESS_KEY)
        progress = json.loads(progress_raw) if progress_raw else {}

        progress[str(run_id)] = {
            'updated_at': django_timezone.now().isoformat(),
            'done': done,
            'total': total,
            'status': status,
            'error': error
        }

        r.set(REDIS_PROGRESS_KEY, json.dumps(progress))
    except Exception as e:
        logger.exception("Error updating Redis progress: %s", e)


@shared_task
def run_sweep_task(run_id: int) -> str:
    """
    Evaluate a stored SweepRun and record its rows.

    Returns:
        Status message describing the result
    """
    try:
        run = SweepRun.objects.filter(pk=run_id).first()
        if not run:
            logger.warning("SweepRun %s not found", run_id)
            return f"SweepRun {run_id} not found"

        total = len(run.grid)
        logger.info("Starting %s sweep %s over %d points", run.kind, run_id, total)
        run_sweep(run, progress=lambda done, total: update_progress(run_id, done, total))

        solved = run.rows.filter(status='solved').count()
        update_progress(run_id, total, total, status='done')
        return f"Sweep {run_id}: {solved}/{total} points solved"

    except Exception as e:
        error_msg = f"Error running sweep {run_id}: {e}"
        logger.exception(error_msg)
        update_progress(run_id, 0, 0, status='error', error=str(e))
        return error_msg
