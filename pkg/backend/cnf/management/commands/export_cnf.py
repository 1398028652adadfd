from cnf.services.dimacs import to_dimacs
from cnf.services.encoder import encode_circuit
from cnf.services.miter import build_miter
from locklab.commands import LabCommand
from locking.services.key_file import read_key_file
from locking.services.keys import LockedCircuit
from netlist.services.bench import read_bench_file


class Command(LabCommand):
    help = "Write the CNF of a circuit, or of the miter of a locked circuit, in DIMACS format"

    def add_arguments(self, parser):
        parser.add_argument('bench', help=".bench file")
        parser.add_argument('--miter', action='store_true',
                            help="Encode two key copies that must differ on some output")
        parser.add_argument('--key-file', help="Key file naming the key inputs (with --miter)")
        parser.add_argument('--no-comments', action='store_true', help="Omit the net-to-variable comments")
        parser.add_argument('--out', help="Output file; stdout when omitted")

    def run(self, *args, **options):
        circuit = read_bench_file(options['bench'])
        if options['miter']:
            if options['key_file']:
                locked = read_key_file(options['key_file'], circuit)
            else:
                locked = LockedCircuit.from_circuit(circuit)
            formula = build_miter(locked, guarded=False).formula
        else:
            formula = encode_circuit(circuit)
        text = to_dimacs(formula, comments=not options['no_comments'])
        if options['out']:
            self.write_file(options['out'], text)
        else:
            self.stdout.write(text, ending='')
