import random

from locklab.commands import LabCommand
from locking.exceptions import LockingError
from locking.services.key_file import write_key_file
from locking.services.key_gates import insert_key_gates
from locking.services.keys import KeyVector
from locking.services.point_functions import lock_antisat, lock_caslock, lock_sfll_hd
from netlist.services.bench import read_bench_file, write_bench

SCHEMES = ('xor', 'antisat', 'caslock', 'sfll')


class Command(LabCommand):
    help = "Lock a .bench netlist and write the locked netlist plus its key file"

    def add_arguments(self, parser):
        parser.add_argument('bench', help="Path to the .bench file")
        parser.add_argument('--scheme', choices=SCHEMES, default='xor')
        parser.add_argument('--keys', type=int, help="Number of XOR/XNOR key gates (xor)")
        parser.add_argument('--r', type=int, help="Block width (antisat, caslock)")
        parser.add_argument('--h', type=int, default=0, help="Hamming distance (sfll); 0 is TTLock")
        parser.add_argument('--or-positions', help="Comma-separated OR links of the CAS-Lock chain")
        parser.add_argument('--value', help="Block value or protected pattern as bits or 0x hex; random when omitted")
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--out', required=True, help="Locked .bench output")
        parser.add_argument('--key-out', required=True, help="Key file (JSON) output")

    def _value(self, options, width: int, rng: random.Random) -> KeyVector:
        if options['value']:
            return KeyVector.from_string(options['value'], width)
        return KeyVector.random(width, rng)

    def run(self, *args, **options):
        circuit = read_bench_file(options['bench'])
        rng = random.Random(options['seed'])
        scheme = options['scheme']

        if scheme == 'xor':
            if options['keys'] is None:
                raise LockingError("--keys is required for the xor scheme")
            locked = insert_key_gates(circuit, options['keys'], seed=options['seed'])
        elif scheme == 'sfll':
            pattern = self._value(options, len(circuit.inputs), rng)
            locked = lock_sfll_hd(circuit, pattern, options['h'])
        else:
            if options['r'] is None:
                raise LockingError(f"--r is required for the {scheme} scheme")
            value = self._value(options, options['r'], rng)
            if scheme == 'antisat':
                locked = lock_antisat(circuit, options['r'], value)
            else:
                positions = None
                if options['or_positions']:
                    try:
                        positions = [int(p) for p in options['or_positions'].split(',') if p.strip()]
                    except ValueError:
                        raise LockingError(f"bad OR positions {options['or_positions']!r}") from None
                locked = lock_caslock(circuit, options['r'], value, or_positions=positions)

        self.write_file(options['out'], write_bench(locked.circuit))
        write_key_file(locked, options['key_out'])
        self.stdout.write(self.style.SUCCESS(
            f"{locked.scheme.value}: {locked.key_width} key bits, key written to {options['key_out']}"
        ))
