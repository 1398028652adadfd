"""
Celery configuration for LockLab.
Runs sweep points and stored sweeps off the request path.
"""
import os
import sys
from celery import Celery

# Add the project directory to Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

# Set the default Django settings module for the 'celery' program.
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'locklab.settings')

app = Celery('locklab')

# Using a string here means the worker doesn't have to serialize
# the configuration object to child processes.
app.config_from_object('django.conf:settings', namespace='CELERY')

# Load task modules from all registered Django apps.
app.autodiscover_tasks()

app.conf.update(
    task_serializer='json',
    accept_content=['json'],
    result_serializer='json',
    timezone='UTC',
    enable_utc=True,

    # Attack runs are CPU-bound and long; one at a time per worker process
    task_acks_late=True,
    worker_prefetch_multiplier=1,
    task_time_limit=int(os.getenv('CELERY_TASK_TIME_LIMIT', 3600)),
    task_soft_time_limit=int(os.getenv('CELERY_TASK_SOFT_TIME_LIMIT', 3300)),

    task_routes={
        'harness.tasks.run_sweep_task': {'queue': 'sweeps'},
        'harness.tasks.run_sweep_point_task': {'queue': 'attacks'},
        'harness.tasks.finalize_sweep_task': {'queue': 'sweeps'},
    },

    result_expires=3600,  # 1 hour
    broker_connection_retry_on_startup=True,
    task_reject_on_worker_lost=True,
)
