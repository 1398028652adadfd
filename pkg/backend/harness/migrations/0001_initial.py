import django.core.validators
import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="SweepRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("name", models.CharField(blank=True, max_length=255)),
                ("cone_bench", models.TextField()),
                (
                    "max_keys",
                    models.PositiveIntegerField(
                        validators=[django.core.validators.MinValueValidator(0)]
                    ),
                ),
                ("scheme", models.CharField(default="xor", max_length=20)),
                ("seed", models.IntegerField(default=0)),
                (
                    "options",
                    models.JSONField(
                        blank=True,
                        default=dict,
                        help_text="Per-point attack limits: {max_iterations, time_budget}",
                    ),
                ),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("pending", "Pending"),
                            ("running", "Running"),
                            ("completed", "Completed"),
                            ("failed", "Failed"),
                        ],
                        default="pending",
                        max_length=20,
                    ),
                ),
                (
                    "fit",
                    models.JSONField(
                        blank=True,
                        default=dict,
                        help_text="Least-squares TI trend: {slope, intercept, residual, deviations}",
                    ),
                ),
                ("error_message", models.TextField(blank=True)),
                ("task_id", models.CharField(blank=True, max_length=255)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("updated_at", models.DateTimeField(auto_now=True)),
            ],
            options={
                "ordering": ["-created_at"],
            },
        ),
        migrations.CreateModel(
            name="SweepPoint",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("key_size", models.PositiveIntegerField()),
                ("io_pairs", models.PositiveIntegerField()),
                ("total_iters", models.PositiveIntegerField()),
                ("total_s", models.FloatField()),
                ("io_pairs_s", models.FloatField()),
                ("avg_s", models.FloatField()),
                ("unsat_s", models.FloatField()),
                ("unsat_pct", models.FloatField()),
                ("complete", models.BooleanField(default=True)),
                ("recovered_key", models.CharField(blank=True, max_length=4096)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                (
                    "run",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="points",
                        to="harness.sweeprun",
                    ),
                ),
            ],
            options={
                "ordering": ["key_size"],
            },
        ),
        migrations.AddConstraint(
            model_name="sweeppoint",
            constraint=models.UniqueConstraint(
                fields=("run", "key_size"), name="unique_sweep_point"
            ),
        ),
    ]
