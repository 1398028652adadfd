from django.apps import AppConfig


class NetlistConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "netlist"
    verbose_name = "Gate-level netlists"
