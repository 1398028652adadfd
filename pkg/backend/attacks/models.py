import logging

from django.db import models

logger = logging.getLogger(__name__)


class AttackRun(models.Model):
    """
    One SAT attack: the locked and oracle netlists it ran on, the options used,
    and the resulting trace.
    """
    PENDING = 'pending'
    RUNNING = 'running'
    COMPLETED = 'completed'
    FAILED = 'failed'
    STATUS_CHOICES = [
        (PENDING, 'Pending'),
        (RUNNING, 'Running'),
        (COMPLETED, 'Completed'),
        (FAILED, 'Failed'),
    ]

    name = models.CharField(max_length=255, blank=True)
    locked_bench = models.TextField()
    oracle_bench = models.TextField()
    key_inputs = models.JSONField(
        default=list,
        blank=True,
        help_text="Key input names in key order; empty means every input with the key prefix",
    )
    options = models.JSONField(
        default=dict,
        blank=True,
        help_text="Attack options: {constraints, replay, preload, max_iterations, time_budget}",
    )
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default=PENDING)

    trace = models.JSONField(default=dict, blank=True)
    recovered_key = models.CharField(max_length=4096, blank=True)
    key_verified = models.BooleanField(null=True, blank=True)
    total_iterations = models.PositiveIntegerField(null=True, blank=True)
    io_pairs = models.PositiveIntegerField(null=True, blank=True)
    total_seconds = models.FloatField(null=True, blank=True)
    unsat_seconds = models.FloatField(null=True, blank=True)
    error_message = models.TextField(blank=True)

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"AttackRun {self.id} - {self.name or 'unnamed'} - {self.status}"

    def build_inputs(self):
        """Parsed (LockedCircuit, oracle Circuit, AttackOptions) for this run."""
        from locking.services.keys import LockedCircuit
        from netlist.services.bench import parse_bench
        from .services.sat_attack import AttackOptions

        locked_circuit = parse_bench(self.locked_bench, name=self.name or 'locked')
        oracle = parse_bench(self.oracle_bench, name='oracle')
        locked = LockedCircuit.from_circuit(locked_circuit, key_inputs=self.key_inputs or None)
        opts = self.options or {}
        options = AttackOptions.from_settings(
            constraints={int(index): int(bit) for index, bit in opts.get('constraints', {}).items()},
            replay=[tuple(int(ch) for ch in dip) for dip in opts.get('replay', [])],
            replay_only=opts.get('replay_only'),
            preload=opts.get('preload'),
            max_iterations=opts.get('max_iterations'),
            time_budget=opts.get('time_budget'),
        )
        return locked, oracle, options

    def execute(self):
        """Run the attack now and store the outcome; domain errors mark the run failed."""
        from locklab.exceptions import LockLabError
        from .services.sat_attack import sat_attack

        self.status = self.RUNNING
        self.save(update_fields=['status', 'updated_at'])
        try:
            locked, oracle, options = self.build_inputs()
            trace = sat_attack(locked, oracle, options)
        except LockLabError as exc:
            partial = getattr(exc, 'trace', None)
            if partial is not None:
                self.record_trace(partial)
            self.status = self.FAILED
            self.error_message = f"{type(exc).__name__}: {exc}"
            logger.warning(f"AttackRun {self.id} failed: {self.error_message}")
        else:
            self.record_trace(trace)
            self.status = self.COMPLETED
        self.save()
        return self

    def record_trace(self, trace):
        self.trace = trace.as_dict()
        self.recovered_key = str(trace.key) if trace.key is not None else ''
        self.key_verified = trace.verified
        self.total_iterations = trace.total_iterations
        self.io_pairs = trace.io_pairs
        self.total_seconds = trace.total_seconds
        self.unsat_seconds = trace.unsat_seconds
