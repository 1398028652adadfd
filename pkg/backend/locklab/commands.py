"""
Shared base for the lab's management commands.
"""
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from locklab.exceptions import LockLabError

logger = logging.getLogger(__name__)


class LabCommand(BaseCommand):
    """
    Subclasses implement ``run``; domain and file errors leave the command as a
    CommandError so the process exits non-zero with the message on stderr.
    """

    def handle(self, *args, **options):
        try:
            return self.run(*args, **options)
        except LockLabError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}") from exc
        except OSError as exc:
            raise CommandError(str(exc)) from exc

    def run(self, *args, **options):
        raise NotImplementedError('subclasses of LabCommand must provide a run() method')

    def write_file(self, path, text: str) -> None:
        Path(path).write_text(text)
        self.stdout.write(self.style.SUCCESS(f"Wrote {path}"))
