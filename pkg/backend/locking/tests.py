import os
import random
import tempfile
from io import StringIO
from math import comb

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from cones.services.cone import circuit_insertion_order
from netlist.fixtures import (
    random_circuit,
    single_cone_locked,
    single_cone_original,
    wrapped_cone,
)
from netlist.services.bench import parse_bench, read_bench_file, write_bench
from netlist.services.circuit import Gate, GateKind
from netlist.services.simulation import exhaustive_patterns, simulate_words, truth_table
from .exceptions import (
    BlockWidthError,
    HammingDistanceError,
    InsertionCapacityError,
    KeyWidthError,
    LockingError,
    MultiOutputError,
    OrPositionError,
)
from .services.apply_key import apply_key, fold_gate
from .services.key_file import parse_key_file, read_key_file, write_key_file, key_file_payload
from .services.key_gates import insert_key_gates
from .services.keys import KeyVector, LockedCircuit, LockScheme
from .services.point_functions import lock_antisat, lock_caslock, lock_sfll_hd

AND2 = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n"


def restores(locked, original, key=None):
    keyed = apply_key(locked, key if key is not None else locked.correct_key)
    return truth_table(keyed) == truth_table(original)


def net_words(locked, key, net):
    """Value of ``net`` on every data-input row with the key inputs held at ``key``."""
    rows = 1 << len(locked.data_inputs)
    words = exhaustive_patterns(locked.data_inputs)
    mask = (1 << rows) - 1
    words.update({name: mask if bit else 0 for name, bit in zip(locked.key_inputs, key.bits)})
    return simulate_words(locked.circuit, words, rows, all_nets=True)[net]


class KeyVectorTests(SimpleTestCase):

    def test_bit_zero_is_most_significant(self):
        key = KeyVector.from_string('001')
        self.assertEqual(key.to_int(), 1)
        self.assertEqual(KeyVector.from_int(4, 3), KeyVector((1, 0, 0)))

    def test_hex_needs_no_width(self):
        self.assertEqual(str(KeyVector.from_string('0xa')), '1010')
        self.assertEqual(str(KeyVector.from_string('0x5', 3)), '101')

    def test_width_mismatch(self):
        with self.assertRaises(KeyWidthError):
            KeyVector.from_string('0101', 3)
        with self.assertRaises(KeyWidthError):
            KeyVector.from_string('012')

    def test_prefix_and_concatenation(self):
        key = KeyVector.from_string('110')
        self.assertEqual(str(key.prefix(2)), '11')
        self.assertEqual(str(key + KeyVector.from_string('01')), '11001')


class LockedCircuitTests(SimpleTestCase):

    def test_key_inputs_found_by_prefix_in_numeric_order(self):
        bench = (
            "INPUT(a)\nINPUT(keyinput10)\nINPUT(keyinput2)\nOUTPUT(y)\n"
            "t = XOR(a, keyinput10)\ny = XOR(t, keyinput2)\n"
        )
        locked = LockedCircuit.from_circuit(parse_bench(bench))
        self.assertEqual(locked.key_inputs, ('keyinput2', 'keyinput10'))
        self.assertEqual(locked.data_inputs, ('a',))

    def test_unknown_key_input(self):
        with self.assertRaises(LockingError):
            LockedCircuit.from_circuit(single_cone_original(), key_inputs=['k9'])

    def test_correct_key_width_is_checked(self):
        with self.assertRaises(KeyWidthError):
            LockedCircuit.from_circuit(single_cone_locked(), correct_key=KeyVector.from_string('01'))


@override_settings(LOCKLAB={'KEY_INPUT_PREFIX': 'kx'})
class KeyInputPrefixSettingTests(SimpleTestCase):

    def test_key_gates_use_the_configured_prefix(self):
        locked = insert_key_gates(wrapped_cone(4), 2, seed=0)
        self.assertEqual(locked.key_inputs, ('kx0', 'kx1'))
        again = LockedCircuit.from_circuit(parse_bench(write_bench(locked.circuit)))
        self.assertEqual(again.key_inputs, ('kx0', 'kx1'))
        self.assertEqual(again.data_inputs, locked.data_inputs)

    def test_point_function_locks_use_the_configured_prefix(self):
        host = wrapped_cone(4)
        self.assertEqual(lock_antisat(host, 2, '01').key_inputs, ('kx0', 'kx1', 'kx2', 'kx3'))
        self.assertEqual(lock_caslock(host, 3, '011').key_inputs[-1], 'kx5')
        self.assertTrue(all(net.startswith('kx') for net in lock_sfll_hd(host, '0110').key_inputs))

    def test_explicit_prefix_wins(self):
        locked = insert_key_gates(wrapped_cone(4), 1, seed=0, prefix='keyinput')
        self.assertEqual(locked.key_inputs, ('keyinput0',))
        self.assertEqual(LockedCircuit.from_circuit(locked.circuit).key_inputs, ())

    @override_settings(LOCKLAB={'KEY_INPUT_PREFIX': ''})
    def test_empty_prefix_is_rejected(self):
        with self.assertRaises(LockingError):
            insert_key_gates(wrapped_cone(4), 1, seed=0)


class KeyGateInsertionTests(SimpleTestCase):

    def test_single_cone_example(self):
        locked = insert_key_gates(single_cone_original(), 3, key=KeyVector.from_string('001'))
        circuit = locked.circuit
        self.assertEqual(locked.key_inputs, ('keyinput0', 'keyinput1', 'keyinput2'))
        self.assertEqual(locked.params['locations'], ['y0', 'G1', 'G2'])
        self.assertEqual(circuit.driver('y0').kind, GateKind.XOR)
        self.assertEqual(circuit.driver('G1').kind, GateKind.XOR)
        self.assertEqual(circuit.driver('G2').kind, GateKind.XNOR)
        self.assertEqual(circuit.driver('G2').inputs, ('G2_pre', 'keyinput2'))
        self.assertTrue(restores(locked, single_cone_original()))

    def test_hand_written_fixture_agrees_with_insertion(self):
        inserted = insert_key_gates(single_cone_original(), 3, key=KeyVector.from_string('001'))
        fixture = LockedCircuit.from_circuit(single_cone_locked())
        self.assertEqual(inserted.circuit.inputs, fixture.circuit.inputs)
        for value in range(8):
            key = KeyVector.from_int(value, 3)
            self.assertEqual(truth_table(apply_key(inserted, key)), truth_table(apply_key(fixture, key)), str(key))

    def test_zero_keys_leaves_the_circuit_alone(self):
        original = single_cone_original()
        locked = insert_key_gates(original, 0)
        self.assertEqual(locked.circuit.signature(), original.signature())
        self.assertEqual(locked.key_width, 0)
        self.assertEqual(locked.circuit.name, original.name)

    def test_too_many_keys(self):
        with self.assertRaises(InsertionCapacityError):
            insert_key_gates(single_cone_original(), 4)

    def test_key_width_must_match_count(self):
        with self.assertRaises(KeyWidthError):
            insert_key_gates(single_cone_original(), 2, key=KeyVector.from_string('001'))

    def test_adding_a_key_gate_keeps_the_earlier_ones(self):
        circuit = random_circuit(21, 6, 30, n_outputs=2)
        order = circuit_insertion_order(circuit)
        key = KeyVector.random(min(8, len(order)), random.Random(4))
        for n in range(key.width):
            smaller = insert_key_gates(circuit, n, order, key.prefix(n)).circuit
            larger = insert_key_gates(circuit, n + 1, order, key.prefix(n + 1)).circuit
            net = order[n]
            replaced = smaller.driver(net)
            self.assertLessEqual(set(smaller.gates) - {replaced}, set(larger.gates))
            self.assertEqual(larger.driver(f"{net}_pre"), Gate(f"{net}_pre", replaced.kind, replaced.inputs))
            self.assertEqual(larger.inputs[:len(smaller.inputs)], smaller.inputs)

    def test_random_circuits_are_restored(self):
        rng = random.Random(1234)
        for seed in range(25):
            circuit = random_circuit(seed, rng.randint(3, 10), rng.randint(10, 40), n_outputs=rng.randint(1, 3))
            order = circuit_insertion_order(circuit)
            count = min(rng.randint(1, 6), len(order))
            locked = insert_key_gates(circuit, count, order, seed=seed)
            self.assertTrue(restores(locked, circuit), circuit.name)


class AntiSatTests(SimpleTestCase):

    def test_correct_key_duplicates_the_block_value(self):
        locked = lock_antisat(parse_bench(AND2), 2, '10')
        self.assertEqual(str(locked.correct_key), '1010')
        self.assertEqual(locked.key_blocks, {'g': (0, 1), 'gbar': (2, 3)})
        self.assertTrue(restores(locked, parse_bench(AND2)))

    def test_every_matching_key_pair_restores(self):
        host = wrapped_cone(4)
        for value in range(16):
            bits = KeyVector.from_int(value, 4)
            locked = lock_antisat(host, 4, bits)
            self.assertTrue(restores(locked, host, bits + bits))

    def test_block_fires_on_exactly_one_tap_pattern_for_mismatched_halves(self):
        host = wrapped_cone(3)
        locked = lock_antisat(host, 3, '000')
        for value in range(64):
            key = KeyVector.from_int(value, 6)
            fired = bin(net_words(locked, key, 'as_out')).count('1')
            k_g, k_gbar = key.bits[:3], key.bits[3:]
            self.assertEqual(fired, 0 if k_g == k_gbar else 1, str(key))
            if fired:
                row = net_words(locked, key, 'as_out').bit_length() - 1
                # the firing row is the complement of K_g
                self.assertEqual(KeyVector.from_int(row, 3), KeyVector(tuple(1 - b for b in k_g)))

    def test_width_limits(self):
        with self.assertRaises(BlockWidthError):
            lock_antisat(parse_bench(AND2), 3, '101')
        with self.assertRaises(BlockWidthError):
            lock_antisat(parse_bench(AND2), 0, '')

    def test_multi_output_hosts_are_rejected(self):
        with self.assertRaises(MultiOutputError):
            lock_antisat(random_circuit(1, 4, 12, n_outputs=2), 2, '01')


class CasLockTests(SimpleTestCase):

    def test_ten_bit_instance(self):
        host = wrapped_cone(6)
        locked = lock_caslock(host, 5, '10110')
        self.assertEqual(locked.key_width, 10)
        self.assertEqual(locked.params['or_positions'], [4])
        self.assertEqual(locked.scheme, LockScheme.CASLOCK)
        self.assertTrue(restores(locked, host))

    def test_every_matching_key_pair_restores(self):
        host = wrapped_cone(4)
        for positions in ((), (2,), (1, 3)):
            for value in range(16):
                bits = KeyVector.from_int(value, 4)
                locked = lock_caslock(host, 4, bits, or_positions=positions)
                self.assertTrue(restores(locked, host, bits + bits), f"{positions} {bits}")

    def test_without_or_links_it_behaves_like_antisat(self):
        host = wrapped_cone(4)
        cas = lock_caslock(host, 3, '011', or_positions=())
        anti = lock_antisat(host, 3, '011')
        for value in range(64):
            key = KeyVector.from_int(value, 6)
            self.assertEqual(truth_table(apply_key(cas, key)), truth_table(apply_key(anti, key)))

    def test_invalid_or_positions(self):
        with self.assertRaises(OrPositionError):
            lock_caslock(wrapped_cone(4), 4, '0000', or_positions=(0,))
        with self.assertRaises(OrPositionError):
            lock_caslock(wrapped_cone(4), 4, '0000', or_positions=(4,))


class SfllTests(SimpleTestCase):

    def test_ttlock_pattern_restores_and_wrong_keys_flip_two_rows(self):
        host = wrapped_cone(4)
        locked = lock_sfll_hd(host, '1011', h=0)
        self.assertEqual(locked.scheme, LockScheme.TTLOCK)
        self.assertTrue(restores(locked, host))
        original = truth_table(host)['y']
        for value in range(16):
            key = KeyVector.from_int(value, 4)
            if str(key) == '1011':
                continue
            flipped = truth_table(apply_key(locked, key))['y'] ^ original
            self.assertEqual(bin(flipped).count('1'), 2, str(key))

    def test_perturb_unit_fires_on_the_hamming_sphere(self):
        for width in range(4, 9):
            host = wrapped_cone(width)
            pattern = KeyVector.random(width, random.Random(width))
            for h in (0, 1):
                locked = lock_sfll_hd(host, pattern, h=h)
                fired = net_words(locked, pattern, locked.params['perturb'])
                self.assertEqual(bin(fired).count('1'), comb(width, h))
                self.assertEqual(fired, net_words(locked, pattern, locked.params['restore']))
                self.assertTrue(restores(locked, host))

    def test_hamming_distance_must_be_below_width(self):
        with self.assertRaises(HammingDistanceError):
            lock_sfll_hd(wrapped_cone(4), '1011', h=4)


class ApplyKeyTests(SimpleTestCase):

    def test_wrong_key_computes_the_reduced_function(self):
        keyed = apply_key(LockedCircuit.from_circuit(single_cone_locked()), KeyVector.from_string('000'))
        self.assertEqual(keyed.inputs, ('x0', 'x1', 'x2', 'x3'))
        # x0·x1·¬(x2·x3): rows 1100, 1101, 1110
        self.assertEqual(truth_table(keyed), {'y0': (1 << 12) | (1 << 13) | (1 << 14)})

    def test_xor_with_zero_folds_to_a_buffer(self):
        self.assertEqual(fold_gate(GateKind.XOR, ['a', 0]), (GateKind.BUF, ['a']))
        self.assertEqual(fold_gate(GateKind.XNOR, ['a', 0]), (GateKind.NOT, ['a']))
        self.assertEqual(fold_gate(GateKind.AND, ['a', 0]), (None, 0))
        self.assertEqual(fold_gate(GateKind.NOR, [0, 0]), (None, 1))

    def test_constant_output_is_rebuilt_on_a_data_input(self):
        bench = "INPUT(a)\nINPUT(keyinput0)\nOUTPUT(y)\ny = AND(a, keyinput0)\n"
        keyed = apply_key(LockedCircuit.from_circuit(parse_bench(bench)), KeyVector.from_string('0'))
        self.assertEqual(truth_table(keyed), {'y': 0})

    def test_width_mismatch(self):
        with self.assertRaises(KeyWidthError):
            apply_key(LockedCircuit.from_circuit(single_cone_locked()), KeyVector.from_string('01'))


class KeyFileTests(SimpleTestCase):

    def test_write_and_read_back(self):
        locked = lock_caslock(wrapped_cone(5), 4, '0110')
        with tempfile.TemporaryDirectory() as tmp:
            key_path = os.path.join(tmp, 'key.json')
            write_key_file(locked, key_path)
            circuit = parse_bench(write_bench(locked.circuit), name=locked.circuit.name)
            again = read_key_file(key_path, circuit)
        self.assertEqual(again.key_inputs, locked.key_inputs)
        self.assertEqual(again.correct_key, locked.correct_key)
        self.assertEqual(again.key_blocks, locked.key_blocks)
        self.assertEqual(again.scheme, LockScheme.CASLOCK)

    def test_block_constraints_follow_the_block_map(self):
        locked = lock_antisat(wrapped_cone(4), 3, '010')
        self.assertEqual(locked.block_constraints('gbar', (1, 1, 0)), {3: 1, 4: 1, 5: 0})
        with self.assertRaises(LockingError):
            locked.block_constraints('restore', (1,))

    def test_invalid_payload(self):
        payload = key_file_payload(insert_key_gates(single_cone_original(), 2, seed=3))
        payload['key'] = '1'
        with self.assertRaises(LockingError):
            parse_key_file(payload)


class LockCommandTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def _path(self, name):
        return os.path.join(self.tmp.name, name)

    def _bench(self, circuit):
        path = self._path(f"{circuit.name}.bench")
        with open(path, 'w') as handle:
            handle.write(write_bench(circuit))
        return path

    def _lock(self, bench, **options):
        out = StringIO()
        call_command('lock', bench, out=self._path('locked.bench'), key_out=self._path('key.json'),
                     stdout=out, **options)
        return out.getvalue()

    def _verify(self, **options):
        out = StringIO()
        call_command('verify', self._path('locked.bench'), stdout=out, **options)
        return out.getvalue()

    def test_xor_lock_then_verify(self):
        bench = self._bench(single_cone_original())
        output = self._lock(bench, keys=3, seed=1)
        self.assertIn('xor: 3 key bits', output)
        self.assertIn('is correct', self._verify(oracle=bench, key_file=self._path('key.json')))

        locked = read_key_file(self._path('key.json'), read_bench_file(self._path('locked.bench')))
        wrong = ''.join(str(1 - b) for b in locked.correct_key.bits)
        self.assertIn('is incorrect', self._verify(oracle=bench, key=wrong))

    def test_sfll_lock(self):
        bench = self._bench(wrapped_cone(4))
        self._lock(bench, scheme='sfll', h=1, value='0101')
        self.assertIn('key 0101 is correct', self._verify(oracle=bench, key_file=self._path('key.json')))

    def test_caslock_or_positions(self):
        bench = self._bench(wrapped_cone(5))
        self._lock(bench, scheme='caslock', r=4, or_positions='1,3', value='1001')
        locked = read_key_file(self._path('key.json'))
        self.assertEqual(locked.params['or_positions'], [1, 3])
        self.assertEqual(str(locked.key), '10011001')

    def test_missing_scheme_parameters(self):
        bench = self._bench(single_cone_original())
        with self.assertRaisesMessage(CommandError, 'LockingError'):
            self._lock(bench)
        with self.assertRaisesMessage(CommandError, 'LockingError'):
            self._lock(bench, scheme='antisat')
        with self.assertRaisesMessage(CommandError, 'OrPositionError'):
            self._lock(self._bench(wrapped_cone(5)), scheme='caslock', r=4, or_positions='0')
