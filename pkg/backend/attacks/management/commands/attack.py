import json
from pathlib import Path

from attacks.exceptions import AttackError
from attacks.services.keyspace import elimination_matrix
from attacks.services.sat_attack import (
    AttackOptions, merge_constraints, parse_constraints, parse_replay, sat_attack,
)
from harness.services.report import elimination_csv, elimination_table
from locklab.commands import LabCommand
from locking.services.key_file import read_key_file
from locking.services.keys import KeyVector, LockedCircuit
from netlist.services.bench import read_bench_file


class Command(LabCommand):
    help = "Recover the key of a locked netlist with the oracle-guided SAT attack"

    def add_arguments(self, parser):
        parser.add_argument('locked', help="Locked .bench file")
        parser.add_argument('--oracle', required=True, help="Original .bench file used as the oracle")
        parser.add_argument('--key-file', help="Key file naming the key inputs and blocks")
        parser.add_argument('--fix', default='', help="Fixed key bits, e.g. k3=1,k4=0")
        parser.add_argument('--fix-block', action='append', default=[], metavar='BLOCK=BITS',
                            help="Fix a whole key block from the key file, e.g. g=0110")
        parser.add_argument('--replay', help="File with one distinguishing input per line")
        parser.add_argument('--replay-only', action='store_true',
                            help="Treat the replay file as the complete sequence")
        parser.add_argument('--preload', action='store_true', help="Add the all-zeros and all-ones pairs first")
        parser.add_argument('--max-iterations', type=int)
        parser.add_argument('--budget', type=float, help="Time budget in seconds")
        parser.add_argument('--trace', help="Write the attack trace as JSON")
        parser.add_argument('--eliminations', action='store_true',
                            help="Print which keys each IO pair eliminates (small key widths only)")
        parser.add_argument('--eliminations-csv', metavar='OUT', help="Write the same matrix as CSV")

    def _locked(self, options) -> LockedCircuit:
        circuit = read_bench_file(options['locked'])
        if options['key_file']:
            return read_key_file(options['key_file'], circuit)
        return LockedCircuit.from_circuit(circuit)

    def _block_constraints(self, locked: LockedCircuit, items):
        maps = []
        for item in items:
            block, _, bits = item.partition('=')
            if not bits:
                raise AttackError(f"bad block constraint {item!r}; expected <block>=<bits>")
            maps.append(locked.block_constraints(block.strip(), KeyVector.from_string(bits).bits))
        return maps

    def run(self, *args, **options):
        locked = self._locked(options)
        oracle = read_bench_file(options['oracle'])
        constraints = merge_constraints(
            parse_constraints(options['fix'], locked),
            *self._block_constraints(locked, options['fix_block']),
        )
        replay = parse_replay(Path(options['replay']).read_text()) if options['replay'] else []
        attack_options = AttackOptions.from_settings(
            constraints=constraints,
            replay=replay,
            replay_only=options['replay_only'],
            preload=options['preload'],
            max_iterations=options['max_iterations'],
            time_budget=options['budget'],
        )

        try:
            trace = sat_attack(locked, oracle, attack_options)
        except AttackError as exc:
            if exc.trace is not None and options['trace']:
                self.write_file(options['trace'], json.dumps(exc.trace.as_dict(), indent=2))
            raise

        for record in trace.iterations:
            marker = ' (replayed)' if record.replayed else ''
            self.stdout.write(f"iteration {record.index}: {record.pair}{marker} {record.solve_seconds:.4f}s")
        self.stdout.write(f"TI={trace.total_iterations} |P|={trace.io_pairs} "
                          f"total={trace.total_seconds:.4f}s unsat={trace.unsat_seconds:.4f}s")
        self.stdout.write(self.style.SUCCESS(f"key {trace.key} (verified: {trace.verified})"))
        if options['trace']:
            self.write_file(options['trace'], json.dumps(trace.as_dict(), indent=2))
        if options['eliminations'] or options['eliminations_csv']:
            matrix = elimination_matrix(locked, trace.pairs)
            if options['eliminations']:
                self.stdout.write(elimination_table(matrix), ending='')
            if options['eliminations_csv']:
                self.write_file(options['eliminations_csv'], elimination_csv(matrix))
