from django.apps import AppConfig


class CnfConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "cnf"
    verbose_name = "CNF encoding"
