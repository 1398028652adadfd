from django.core.management.base import CommandError

from attacks.services.sat_attack import AttackOptions
from harness.services.sweep import timing_anatomy
from locklab.commands import LabCommand
from netlist.fixtures import array_multiplier
from netlist.services.bench import read_bench_file


class Command(LabCommand):
    help = "Attack the largest cone of a circuit once and split the time into DIP and UNSAT phases"

    def add_arguments(self, parser):
        parser.add_argument('bench', nargs='?', help=".bench file")
        parser.add_argument('--multiplier', type=int, metavar='WIDTH',
                            help="Use a generated WIDTH x WIDTH array multiplier instead of a file")
        parser.add_argument('--keys', type=int, default=8)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--max-iterations', type=int)
        parser.add_argument('--budget', type=float)

    def run(self, *args, **options):
        if (options['bench'] is None) == (options['multiplier'] is None):
            raise CommandError("give either a .bench file or --multiplier")
        if options['multiplier'] is not None:
            circuit = array_multiplier(options['multiplier'])
        else:
            circuit = read_bench_file(options['bench'])
        attack_options = AttackOptions.from_settings(
            max_iterations=options['max_iterations'],
            time_budget=options['budget'],
        )
        record = timing_anatomy(circuit, options['keys'], seed=options['seed'], options=attack_options)
        status = '' if record.complete else ' (incomplete)'
        self.stdout.write(f"{circuit.name}: |K|={record.key_size} TI={record.total_iters} |P|={record.io_pairs}{status}")
        self.stdout.write(f"DIP phase {record.io_pairs_s:.4f}s (avg {record.avg_s:.4f}s per pair)")
        self.stdout.write(f"UNSAT phase {record.unsat_s:.4f}s of {record.total_s:.4f}s ({record.unsat_pct:.1f}%)")
