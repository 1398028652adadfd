from django.apps import AppConfig


class LockingConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "locking"
    verbose_name = "Logic locking schemes"
