from attacks.services.keyspace import verify_key
from locklab.commands import LabCommand
from locking.exceptions import LockingError
from locking.services.key_file import read_key_file
from locking.services.keys import KeyVector, LockedCircuit
from netlist.services.bench import read_bench_file


class Command(LabCommand):
    help = "Check a key against the oracle netlist"

    def add_arguments(self, parser):
        parser.add_argument('locked', help="Locked .bench file")
        parser.add_argument('--oracle', required=True, help="Original .bench file")
        parser.add_argument('--key', help="Key as bits or 0x hex")
        parser.add_argument('--key-file', help="Key file written by the lock command")

    def run(self, *args, **options):
        circuit = read_bench_file(options['locked'])
        oracle = read_bench_file(options['oracle'])
        if options['key_file']:
            locked = read_key_file(options['key_file'], circuit)
        else:
            locked = LockedCircuit.from_circuit(circuit)

        if options['key']:
            key = KeyVector.from_string(options['key'], locked.key_width)
        elif locked.correct_key is not None:
            key = locked.correct_key
        else:
            raise LockingError("give --key or --key-file")

        if verify_key(locked, key, oracle):
            self.stdout.write(self.style.SUCCESS(f"key {key} is correct"))
        else:
            self.stdout.write(self.style.ERROR(f"key {key} is incorrect"))
