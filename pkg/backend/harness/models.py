import logging

from django.core.validators import MinValueValidator
from django.db import models

logger = logging.getLogger(__name__)


class SweepRun(models.Model):
    """
    A stored key-size sweep over one cone; points are filled in as they finish.
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
    cone_bench = models.TextField()
    max_keys = models.PositiveIntegerField(validators=[MinValueValidator(0)])
    scheme = models.CharField(max_length=20, default='xor')
    seed = models.IntegerField(default=0)
    options = models.JSONField(
        default=dict,
        blank=True,
        help_text="Per-point attack limits: {max_iterations, time_budget}",
    )
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default=PENDING)
    fit = models.JSONField(default=dict, blank=True, help_text="Least-squares TI trend: {slope, intercept, residual, deviations}")
    error_message = models.TextField(blank=True)
    task_id = models.CharField(max_length=255, blank=True)

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"SweepRun {self.id} - {self.name or 'unnamed'} - {self.status}"

    def plan(self):
        from netlist.services.bench import parse_bench
        from .services.sweep import plan_sweep

        cone = parse_bench(self.cone_bench, name=self.name or 'cone')
        return plan_sweep(cone, self.max_keys, seed=self.seed, scheme=self.scheme)

    def attack_options(self):
        from attacks.services.sat_attack import AttackOptions

        return AttackOptions.from_settings(
            max_iterations=self.options.get('max_iterations'),
            time_budget=self.options.get('time_budget'),
        )

    def records(self):
        return [point.to_record() for point in self.points.order_by('key_size')]


class SweepPoint(models.Model):
    """
    One key size of a sweep, with the timing columns of the sweep report.
    """
    run = models.ForeignKey(SweepRun, on_delete=models.CASCADE, related_name='points')
    key_size = models.PositiveIntegerField()
    io_pairs = models.PositiveIntegerField()
    total_iters = models.PositiveIntegerField()
    total_s = models.FloatField()
    io_pairs_s = models.FloatField()
    avg_s = models.FloatField()
    unsat_s = models.FloatField()
    unsat_pct = models.FloatField()
    complete = models.BooleanField(default=True)
    recovered_key = models.CharField(max_length=4096, blank=True)

    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['key_size']
        constraints = [
            models.UniqueConstraint(fields=['run', 'key_size'], name='unique_sweep_point'),
        ]

    def __str__(self):
        return f"SweepPoint {self.run_id}/|K|={self.key_size}: TI={self.total_iters}"

    @classmethod
    def store(cls, run, record):
        values = record.as_dict()
        key_size = values.pop('key_size')
        point, _ = cls.objects.update_or_create(run=run, key_size=key_size, defaults=values)
        return point

    def to_record(self):
        from .services.sweep import SweepRecord

        return SweepRecord(
            key_size=self.key_size,
            io_pairs=self.io_pairs,
            total_iters=self.total_iters,
            total_s=self.total_s,
            io_pairs_s=self.io_pairs_s,
            avg_s=self.avg_s,
            unsat_s=self.unsat_s,
            unsat_pct=self.unsat_pct,
            complete=self.complete,
            recovered_key=self.recovered_key,
        )
