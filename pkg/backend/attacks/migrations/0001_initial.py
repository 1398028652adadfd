from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="AttackRun",
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
                ("locked_bench", models.TextField()),
                ("oracle_bench", models.TextField()),
                (
                    "key_inputs",
                    models.JSONField(
                        blank=True,
                        default=list,
                        help_text="Key input names in key order; empty means every input with the key prefix",
                    ),
                ),
                (
                    "options",
                    models.JSONField(
                        blank=True,
                        default=dict,
                        help_text="Attack options: {constraints, replay, preload, max_iterations, time_budget}",
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
                ("trace", models.JSONField(blank=True, default=dict)),
                ("recovered_key", models.CharField(blank=True, max_length=4096)),
                ("key_verified", models.BooleanField(blank=True, null=True)),
                ("total_iterations", models.PositiveIntegerField(blank=True, null=True)),
                ("io_pairs", models.PositiveIntegerField(blank=True, null=True)),
                ("total_seconds", models.FloatField(blank=True, null=True)),
                ("unsat_seconds", models.FloatField(blank=True, null=True)),
                ("error_message", models.TextField(blank=True)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("updated_at", models.DateTimeField(auto_now=True)),
            ],
            options={
                "ordering": ["-created_at"],
            },
        ),
    ]
