from attacks.services.sat_attack import AttackOptions
from harness.services.comparison import compare_circuit_and_cone
from locklab.commands import LabCommand
from netlist.services.bench import read_bench_file


class Command(LabCommand):
    help = "Attack a whole circuit and its largest cone locked with the same key gates"

    def add_arguments(self, parser):
        parser.add_argument('bench', help="Multi-output .bench file")
        parser.add_argument('--keys', type=int, required=True)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--max-iterations', type=int)
        parser.add_argument('--budget', type=float)

    def run(self, *args, **options):
        circuit = read_bench_file(options['bench'])
        attack_options = AttackOptions.from_settings(
            max_iterations=options['max_iterations'],
            time_budget=options['budget'],
        )
        rows = compare_circuit_and_cone(circuit, options['keys'], seed=options['seed'], options=attack_options)
        self.stdout.write(f"{'target':<8} {'|PO|':>5} {'|K|':>5} {'TI':>5} {'|P|':>5} {'time':>10}")
        for row in rows:
            self.stdout.write(f"{row.target:<8} {row.outputs:>5} {row.key_size:>5} {row.total_iters:>5} "
                              f"{row.io_pairs:>5} {row.total_s:>10.4f}")
