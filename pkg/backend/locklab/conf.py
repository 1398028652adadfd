"""
Access to the LOCKLAB settings dict that also works when Django is not configured.
"""
from django.core.exceptions import ImproperlyConfigured

DEFAULTS = {
    'SOLVER_BACKEND': 'cdcl',
    'PYSAT_ENGINE': 'minisat22',
    'SOLVER': {
        'var_decay': 0.95,
        'restart_first': 100,
        'restart_inc': 1.5,
        'default_phase': False,
    },
    'KEYSPACE_LIMIT': 24,
    'EXHAUSTIVE_VERIFY_LIMIT': 16,
    'VERIFY_SAMPLES': 10000,
    'VERIFY_SEED': 2022,
    'ATTACK_MAX_ITERATIONS': None,
    'ATTACK_TIME_BUDGET': None,
    'KEY_INPUT_PREFIX': 'keyinput',
    'SWEEP_PARALLEL': False,
}


def lab_setting(name: str):
    try:
        from django.conf import settings
        configured = getattr(settings, 'LOCKLAB', {})
    except ImproperlyConfigured:
        configured = {}
    return configured.get(name, DEFAULTS[name])
