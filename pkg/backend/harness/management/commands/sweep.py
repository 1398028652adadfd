from django.db import transaction

from attacks.services.sat_attack import AttackOptions
from harness.exceptions import DegenerateFitError
from harness.models import SweepPoint, SweepRun
from harness.services.report import report
from harness.services.sweep import SUPPORTED_SCHEMES, sweep
from harness.services.trend import fit_linear
from locklab.commands import LabCommand
from netlist.services.bench import read_bench_file, write_bench


class Command(LabCommand):
    help = "Attack a cone at every key size 1..N and report iterations and timings"

    def add_arguments(self, parser):
        parser.add_argument('bench', help="Single-output cone .bench file")
        parser.add_argument('--max-keys', type=int, required=True)
        parser.add_argument('--scheme', choices=SUPPORTED_SCHEMES, default='xor')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--max-iterations', type=int, help="Per-point iteration cap")
        parser.add_argument('--budget', type=float, help="Per-point time budget in seconds")
        parser.add_argument('--csv', help="Write the sweep records as CSV")
        parser.add_argument('--json', help="Write the sweep records and trend as JSON")
        parser.add_argument('--store', action='store_true', help="Persist the sweep as a SweepRun")

    def _progress(self, record):
        status = '' if record.complete else ' (incomplete)'
        self.stdout.write(f"|K|={record.key_size}: TI={record.total_iters} |P|={record.io_pairs} "
                          f"{record.total_s:.4f}s unsat {record.unsat_pct:.1f}%{status}")

    def run(self, *args, **options):
        cone = read_bench_file(options['bench'])
        attack_options = AttackOptions.from_settings(
            max_iterations=options['max_iterations'],
            time_budget=options['budget'],
        )
        records = sweep(cone, options['max_keys'], scheme=options['scheme'], seed=options['seed'],
                        options=attack_options, progress=self._progress)
        try:
            fit = fit_linear(records)
        except DegenerateFitError:
            fit = None
        self.stdout.write(report(records, 'text', fit), ending='')

        if options['csv']:
            self.write_file(options['csv'], report(records, 'csv'))
        if options['json']:
            self.write_file(options['json'], report(records, 'json', fit))
        if options['store']:
            with transaction.atomic():
                run = SweepRun.objects.create(
                    name=cone.name,
                    cone_bench=write_bench(cone),
                    max_keys=options['max_keys'],
                    scheme=options['scheme'],
                    seed=options['seed'],
                    options={'max_iterations': options['max_iterations'], 'time_budget': options['budget']},
                    status=SweepRun.COMPLETED,
                    fit=fit.as_dict() if fit is not None else {},
                )
                for record in records:
                    SweepPoint.store(run, record)
            self.stdout.write(self.style.SUCCESS(f"Stored SweepRun {run.id}"))
