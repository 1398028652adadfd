from django.apps import AppConfig


class ConesConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "cones"
    verbose_name = "Logic cones"
