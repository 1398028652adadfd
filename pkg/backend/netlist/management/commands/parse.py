from netlist.services.bench import read_bench_file
from locklab.commands import LabCommand


class Command(LabCommand):
    help = "Parse a .bench netlist and print its summary"

    def add_arguments(self, parser):
        parser.add_argument('bench', help="Path to the .bench file")

    def run(self, *args, **options):
        circuit = read_bench_file(options['bench'])
        summary = circuit.summary()
        self.stdout.write(f"{summary['name']}: {summary['inputs']} inputs, "
                          f"{summary['outputs']} outputs, {summary['gates']} gates")
        for kind, count in summary['gate_kinds'].items():
            self.stdout.write(f"  {kind:<5} {count}")
