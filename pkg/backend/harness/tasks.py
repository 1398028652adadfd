"""
Celery tasks for stored sweeps. Points run one after another inside the sweep
task, or as a chord of point tasks when LOCKLAB['SWEEP_PARALLEL'] is on.
"""
import logging

from celery import chord, shared_task

from locklab.conf import lab_setting
from locklab.exceptions import LockLabError

logger = logging.getLogger(__name__)


@shared_task
def run_sweep_point_task(sweep_id: int, size: int) -> dict:
    from .models import SweepPoint, SweepRun
    from .services.sweep import sweep_point

    run = SweepRun.objects.get(id=sweep_id)
    record = sweep_point(run.plan(), size, run.attack_options())
    SweepPoint.store(run, record)
    return record.as_dict()


@shared_task
def finalize_sweep_task(results, sweep_id: int) -> dict:
    from .exceptions import DegenerateFitError
    from .models import SweepRun
    from .services.trend import fit_linear

    run = SweepRun.objects.get(id=sweep_id)
    records = run.records()
    try:
        run.fit = fit_linear(records).as_dict()
    except DegenerateFitError as exc:
        logger.info(f"SweepRun {sweep_id}: no trend fitted ({exc})")
        run.fit = {}
    run.status = SweepRun.COMPLETED
    run.save(update_fields=['fit', 'status', 'updated_at'])
    logger.info(f"SweepRun {sweep_id} completed with {len(records)} points")
    return {'sweep_id': sweep_id, 'points': len(records)}


@shared_task
def run_sweep_task(sweep_id: int) -> dict:
    from .models import SweepRun

    run = SweepRun.objects.get(id=sweep_id)
    run.status = SweepRun.RUNNING
    run.save(update_fields=['status', 'updated_at'])
    sizes = list(range(1, run.max_keys + 1))
    try:
        run.plan()
        if lab_setting('SWEEP_PARALLEL') and sizes:
            chord(run_sweep_point_task.s(sweep_id, size) for size in sizes)(finalize_sweep_task.s(sweep_id))
            return {'sweep_id': sweep_id, 'dispatched': len(sizes)}
        results = []
        for size in sizes:
            results.append(run_sweep_point_task(sweep_id, size))
            logger.info(f"SweepRun {sweep_id}: {len(results)}/{len(sizes)} points done")
        return finalize_sweep_task(results, sweep_id)
    except LockLabError as exc:
        run.status = SweepRun.FAILED
        run.error_message = f"{type(exc).__name__}: {exc}"
        run.save(update_fields=['status', 'error_message', 'updated_at'])
        logger.warning(f"SweepRun {sweep_id} failed: {run.error_message}")
        return {'sweep_id': sweep_id, 'error': run.error_message}
