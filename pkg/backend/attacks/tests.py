import json
import os
import random
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from rest_framework.test import APITestCase

from locking.services.key_gates import default_order, insert_key_gates
from locking.services.keys import KeyVector, LockedCircuit
from locking.services.point_functions import lock_antisat, lock_caslock, lock_sfll_hd
from netlist.fixtures import (
    SINGLE_CONE_LOCKED,
    SINGLE_CONE_ORIGINAL,
    random_circuit,
    single_cone_locked,
    single_cone_original,
    two_cone_locked,
    two_cone_original,
    wrapped_cone,
)
from netlist.services.bench import write_bench
from .exceptions import (
    AttackBudgetExceeded,
    AttackError,
    ConstraintInconsistencyError,
    IterationCapExceeded,
    KeyspaceTooLargeError,
    NotADistinguishingInputError,
    ReplayIncompleteError,
)
from .models import AttackRun
from .services.keyspace import (
    dip_elimination_count,
    elimination_matrix,
    pruning_profile,
    remaining_keys,
    verify_key,
)
from .services.oracle import IoPair, Oracle
from .services.sat_attack import (
    AttackOptions,
    merge_constraints,
    parse_constraints,
    parse_replay,
    sat_attack,
)


def bits(text):
    return tuple(int(ch) for ch in text)


def single_cone():
    return LockedCircuit.from_circuit(single_cone_locked()), single_cone_original()


def two_cone():
    return LockedCircuit.from_circuit(two_cone_locked()), two_cone_original()


class TraceChecks:

    def assertConsistentTrace(self, trace):
        self.assertTrue(trace.complete)
        self.assertEqual(trace.io_pairs, trace.total_iterations - 1)
        self.assertGreaterEqual(trace.total_seconds, trace.io_pairs_seconds + trace.unsat_seconds - 1e-3)


class GoldenAttackTests(TraceChecks, SimpleTestCase):

    def test_single_cone_replay(self):
        locked, oracle = single_cone()
        options = AttackOptions(replay=[bits('1111'), bits('1101'), bits('0111')], replay_only=True)
        trace = sat_attack(locked, oracle, options)
        self.assertEqual(str(trace.key), '001')
        self.assertEqual(trace.io_pairs, 3)
        self.assertEqual(trace.total_iterations, 4)
        self.assertTrue(trace.verified)
        self.assertTrue(all(record.replayed for record in trace.iterations))
        self.assertEqual([record.response for record in trace.iterations], [(1,), (0,), (0,)])
        self.assertConsistentTrace(trace)

    def test_single_cone_keyspace_halves_then_collapses(self):
        locked, _ = single_cone()
        pairs = [IoPair.from_strings('1111', '1'), IoPair.from_strings('1101', '0'), IoPair.from_strings('0111', '0')]
        profile = pruning_profile(locked, pairs)
        self.assertEqual(profile.survivors, (8, 4, 2, 1))
        self.assertEqual(profile.eliminated, (4, 2, 1))
        self.assertEqual([str(key) for key in profile.final_keys], ['001'])
        self.assertEqual(
            [str(key) for key in remaining_keys(locked, pairs[:2])],
            ['001', '100'],
        )

    def test_two_cones_need_two_pairs(self):
        locked, oracle = two_cone()
        options = AttackOptions(replay=[bits('111100'), bits('010101')], replay_only=True)
        trace = sat_attack(locked, oracle, options)
        self.assertEqual(str(trace.key), '001')
        self.assertEqual(trace.io_pairs, 2)
        self.assertEqual([record.response for record in trace.iterations], [(1, 1), (0, 0)])
        self.assertConsistentTrace(trace)

    def test_two_cone_first_pair_fixes_k2_and_ties_k0_to_k1(self):
        locked, _ = two_cone()
        survivors = remaining_keys(locked, [IoPair.from_strings('111100', '11')])
        self.assertEqual([str(key) for key in survivors], ['001', '111'])
        for key in survivors:
            self.assertEqual(key[2], 1)
            self.assertEqual(key[0], key[1])

    def test_unreplayed_attack_finds_the_key(self):
        for locked, oracle in (single_cone(), two_cone()):
            trace = sat_attack(locked, oracle, AttackOptions())
            self.assertTrue(trace.verified)
            self.assertEqual(str(trace.key), '001')
            self.assertConsistentTrace(trace)

    def test_zero_key_circuit(self):
        circuit = single_cone_original()
        trace = sat_attack(LockedCircuit.unlocked(circuit), circuit, AttackOptions())
        self.assertEqual(trace.total_iterations, 1)
        self.assertEqual(trace.io_pairs, 0)
        self.assertEqual(str(trace.key), '')
        self.assertTrue(trace.verified)


class PointFunctionAttackTests(TraceChecks, SimpleTestCase):

    def test_fixing_g_block_needs_one_pair(self):
        rng = random.Random(5)
        for r in (3, 4, 5, 6):
            host = wrapped_cone(max(r, 4))
            for _ in range(5):
                constant = KeyVector.random(r, rng)
                locked = lock_antisat(host, r, KeyVector.random(r, rng))
                constraints = locked.block_constraints('g', constant.bits)
                trace = sat_attack(locked, host, AttackOptions(constraints=constraints))
                self.assertEqual(trace.io_pairs, 1, f"r={r} K_g={constant}")
                self.assertEqual(trace.total_iterations, 2)
                self.assertEqual(str(KeyVector(trace.key.bits[r:])), str(constant))
                self.assertTrue(trace.verified)
                # the only DIP sets the tapped inputs to the complement of K_g
                tapped = trace.iterations[0].dip[:r]
                self.assertEqual(tapped, tuple(1 - b for b in constant.bits))

    def test_fixing_gbar_block_takes_exponentially_many_iterations(self):
        for r in (3, 4, 5):
            host = wrapped_cone(max(r, 4))
            value = KeyVector.from_int(5 % (1 << r), r)
            locked = lock_antisat(host, r, value)
            constraints = locked.block_constraints('gbar', value.bits)
            trace = sat_attack(locked, host, AttackOptions(constraints=constraints))
            self.assertEqual(trace.total_iterations, 2 ** r)
            self.assertEqual(str(trace.key), str(value + value))
            profile = pruning_profile(locked, trace.pairs, constraints)
            self.assertEqual(set(profile.eliminated), {1})

    def test_caslock_with_g_fixed_is_linear(self):
        r = 5
        host = wrapped_cone(6)
        value = KeyVector.from_string('10110')
        locked = lock_caslock(host, r, value)
        constraints = locked.block_constraints('g', value.bits)
        trace = sat_attack(locked, host, AttackOptions(constraints=constraints))
        self.assertLessEqual(trace.total_iterations, r + 1)
        self.assertTrue(trace.verified)
        profile = pruning_profile(locked, trace.pairs, constraints)
        self.assertTrue(all(a > b for a, b in zip(profile.survivors, profile.survivors[1:])))
        for key in profile.final_keys:
            self.assertTrue(verify_key(locked, key, host))

    def test_contradictory_block_constraints(self):
        host = wrapped_cone(4)
        locked = lock_antisat(host, 3, '010')
        constraints = merge_constraints(
            locked.block_constraints('g', bits('010')),
            locked.block_constraints('gbar', bits('011')),
        )
        with self.assertRaises(ConstraintInconsistencyError) as ctx:
            sat_attack(locked, host, AttackOptions(constraints=constraints))
        self.assertIsNotNone(ctx.exception.trace)


def random_locked_instance(index):
    """A seeded single-output host locked with one of the four constructions."""
    rng = random.Random(index)
    scheme = ('xor', 'antisat', 'caslock', 'sfll')[index % 4]
    width = rng.randint(4, 6) if scheme == 'sfll' else rng.randint(4, 8)
    host = random_circuit(1000 + index, width, rng.randint(12, 24))
    if scheme == 'xor':
        count = min(rng.randint(1, 10), len(default_order(host)))
        locked = insert_key_gates(host, count, seed=index)
    elif scheme == 'antisat':
        r = rng.randint(2, min(5, width))
        locked = lock_antisat(host, r, KeyVector.random(r, rng))
    elif scheme == 'caslock':
        r = rng.randint(2, min(5, width))
        locked = lock_caslock(host, r, KeyVector.random(r, rng))
    else:
        locked = lock_sfll_hd(host, KeyVector.random(width, rng), rng.randint(0, 2))
    return scheme, host, locked


class RandomizedAttackTests(TraceChecks, SimpleTestCase):

    def test_mixed_schemes_prune_with_every_dip(self):
        for index in range(200):
            scheme, host, locked = random_locked_instance(index)
            with self.subTest(index=index, scheme=scheme, keys=locked.key_width):
                self.assertLessEqual(len(locked.data_inputs), 12)
                self.assertLessEqual(locked.key_width, 10)
                trace = sat_attack(locked, host, AttackOptions())
                self.assertTrue(trace.verified)
                self.assertConsistentTrace(trace)
                pairs = trace.pairs
                profile = pruning_profile(locked, pairs)
                for i, pair in enumerate(pairs):
                    before = remaining_keys(locked, pairs[:i])
                    ruled_out = dip_elimination_count(locked, pair, before)
                    self.assertEqual(ruled_out, profile.eliminated[i])
                    self.assertGreaterEqual(ruled_out, 1)
                self.assertIn(trace.key, profile.final_keys)
                for key in profile.final_keys:
                    self.assertTrue(verify_key(locked, key, host))
                self.assertTrue(verify_key(locked, locked.correct_key, host))
                self.assertIn(locked.correct_key, profile.final_keys)

    def test_preloaded_pairs_are_counted(self):
        locked, oracle = single_cone()
        trace = sat_attack(locked, oracle, AttackOptions(preload=True))
        self.assertEqual(len(trace.preloaded), 2)
        self.assertEqual(trace.io_pairs, len(trace.iterations) + 2)
        self.assertEqual(str(trace.key), '001')


class AttackControlTests(SimpleTestCase):

    def test_replay_only_with_remaining_dips(self):
        locked, oracle = single_cone()
        with self.assertRaises(ReplayIncompleteError) as ctx:
            sat_attack(locked, oracle, AttackOptions(replay=[bits('1111')], replay_only=True))
        self.assertEqual(len(ctx.exception.trace.iterations), 1)

    def test_replayed_vector_must_distinguish(self):
        locked, oracle = single_cone()
        with self.assertRaises(NotADistinguishingInputError):
            sat_attack(locked, oracle, AttackOptions(replay=[bits('1111'), bits('1111')]))

    def test_replay_width_is_checked(self):
        locked, oracle = single_cone()
        with self.assertRaises(AttackError):
            sat_attack(locked, oracle, AttackOptions(replay=[bits('111')]))

    def test_constraint_index_out_of_range(self):
        locked, oracle = single_cone()
        with self.assertRaises(AttackError):
            sat_attack(locked, oracle, AttackOptions(constraints={3: 1}))

    def test_iteration_cap_keeps_the_partial_trace(self):
        locked, oracle = single_cone()
        with self.assertRaises(IterationCapExceeded) as ctx:
            sat_attack(locked, oracle, AttackOptions(max_iterations=1))
        trace = ctx.exception.trace
        self.assertEqual(len(trace.iterations), 1)
        self.assertFalse(trace.complete)
        self.assertIsNone(trace.key)

    def test_time_budget(self):
        locked, oracle = single_cone()
        with self.assertRaises(AttackBudgetExceeded) as ctx:
            sat_attack(locked, oracle, AttackOptions(time_budget=0.0))
        self.assertEqual(ctx.exception.trace.iterations, [])

    def test_options_from_settings(self):
        with self.settings(LOCKLAB={'ATTACK_MAX_ITERATIONS': 7}):
            options = AttackOptions.from_settings(preload=True)
        self.assertEqual(options.max_iterations, 7)
        self.assertIsNone(options.time_budget)
        self.assertTrue(options.preload)


class ParsingTests(SimpleTestCase):

    def test_constraints_by_index_or_name(self):
        locked, _ = single_cone()
        self.assertEqual(parse_constraints('k0=1, keyinput2=0', locked), {0: 1, 2: 0})
        self.assertEqual(parse_constraints(''), {})
        for text in ('k0', 'k0=2', 'z1=0'):
            with self.assertRaises(AttackError):
                parse_constraints(text, locked)

    def test_replay_file(self):
        self.assertEqual(parse_replay("# dips\n1111\n\n1101  # second\n"), [bits('1111'), bits('1101')])
        with self.assertRaises(AttackError):
            parse_replay("1121\n")

    def test_merge_constraints(self):
        self.assertEqual(merge_constraints({0: 1}, {1: 0}, {0: 1}), {0: 1, 1: 0})
        with self.assertRaises(ConstraintInconsistencyError):
            merge_constraints({0: 1}, {0: 0})


class KeyspaceTests(SimpleTestCase):

    def test_verify_key(self):
        locked, oracle = single_cone()
        self.assertTrue(verify_key(locked, KeyVector.from_string('001'), oracle))
        self.assertFalse(verify_key(locked, KeyVector.from_string('100'), oracle))

    def test_sampled_verification(self):
        circuit = random_circuit(3, 10, 40)
        locked = insert_key_gates(circuit, 4, seed=3)
        self.assertTrue(verify_key(locked, locked.correct_key, circuit, exhaustive_limit=4, samples=256, seed=1))

    def test_oracle_counts_queries(self):
        locked, oracle_circuit = single_cone()
        oracle = Oracle.for_locked(locked, oracle_circuit)
        self.assertEqual(oracle.pair(bits('1111')), IoPair.from_strings('1111', '1'))
        self.assertEqual(oracle.queries, 1)

    def test_elimination_count_and_matrix(self):
        locked, _ = single_cone()
        everything = remaining_keys(locked, [])
        self.assertEqual(len(everything), 8)
        self.assertEqual(dip_elimination_count(locked, IoPair.from_strings('1111', '1'), everything), 4)
        matrix = elimination_matrix(locked, [IoPair.from_strings('1111', '1'), IoPair.from_strings('1101', '0')])
        self.assertEqual(matrix.survivors(), ['001', '100'])

    def test_enumeration_bound(self):
        locked, _ = single_cone()
        with self.assertRaises(KeyspaceTooLargeError):
            remaining_keys(locked, [], limit=2)


class AttackCommandTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.locked = self._write('locked.bench', SINGLE_CONE_LOCKED)
        self.oracle = self._write('oracle.bench', SINGLE_CONE_ORIGINAL)

    def _write(self, name, text):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as handle:
            handle.write(text)
        return path

    def test_attack_with_replay_and_trace(self):
        replay = self._write('replay.txt', "1111\n1101\n0111\n")
        trace_path = os.path.join(self.tmp.name, 'trace.json')
        out = StringIO()
        call_command('attack', self.locked, oracle=self.oracle, replay=replay, replay_only=True,
                     trace=trace_path, eliminations=True, stdout=out)
        output = out.getvalue()
        self.assertIn('TI=4 |P|=3', output)
        self.assertIn('key 001', output)
        with open(trace_path) as handle:
            payload = json.load(handle)
        self.assertEqual(payload['key'], '001')
        self.assertEqual([it['dip'] for it in payload['iterations']], ['1111', '1101', '0111'])

    def test_failed_attack_is_a_command_error(self):
        trace_path = os.path.join(self.tmp.name, 'partial.json')
        with self.assertRaisesMessage(CommandError, 'IterationCapExceeded'):
            call_command('attack', self.locked, oracle=self.oracle, max_iterations=1,
                         trace=trace_path, stdout=StringIO())
        with open(trace_path) as handle:
            self.assertFalse(json.load(handle)['complete'])

    def test_lock_then_attack_with_a_block_constraint(self):
        host = self._write('host.bench', write_bench(wrapped_cone(4)))
        locked = os.path.join(self.tmp.name, 'antisat.bench')
        key_file = os.path.join(self.tmp.name, 'antisat.key.json')
        call_command('lock', host, scheme='antisat', r=3, value='011', out=locked, key_out=key_file, stdout=StringIO())
        out = StringIO()
        call_command('attack', locked, oracle=host, key_file=key_file, fix_block=['g=101'], stdout=out)
        self.assertIn('TI=2 |P|=1', out.getvalue())
        self.assertIn('key 101101', out.getvalue())


class AttackApiTests(APITestCase):

    def test_attack_runs_and_is_stored(self):
        response = self.client.post('/api/v1/attacks/', {
            'name': 'single cone',
            'locked_bench': SINGLE_CONE_LOCKED,
            'oracle_bench': SINGLE_CONE_ORIGINAL,
            'replay': ['1111', '1101', '0111'],
        }, format='json')
        self.assertEqual(response.status_code, 201)
        self.assertEqual(response.data['status'], AttackRun.COMPLETED)
        self.assertEqual(response.data['recovered_key'], '001')
        self.assertEqual(response.data['total_iterations'], 4)
        self.assertEqual(response.data['io_pairs'], 3)
        self.assertTrue(response.data['key_verified'])

        listing = self.client.get('/api/v1/attacks/')
        self.assertEqual(listing.status_code, 200)
        self.assertEqual(AttackRun.objects.count(), 1)

    def test_stopped_attack_is_stored_as_failed(self):
        response = self.client.post('/api/v1/attacks/', {
            'locked_bench': SINGLE_CONE_LOCKED,
            'oracle_bench': SINGLE_CONE_ORIGINAL,
            'max_iterations': 1,
        }, format='json')
        self.assertEqual(response.status_code, 201)
        self.assertEqual(response.data['status'], AttackRun.FAILED)
        self.assertTrue(response.data['error_message'].startswith('IterationCapExceeded'))
        self.assertEqual(len(response.data['trace']['iterations']), 1)

    def test_constraints_are_passed_through(self):
        response = self.client.post('/api/v1/attacks/', {
            'locked_bench': SINGLE_CONE_LOCKED,
            'oracle_bench': SINGLE_CONE_ORIGINAL,
            'constraints': {'0': 0, '1': 0},
        }, format='json')
        self.assertEqual(response.status_code, 201)
        self.assertEqual(response.data['recovered_key'], '001')

    def test_invalid_netlist(self):
        response = self.client.post('/api/v1/attacks/', {
            'locked_bench': "INPUT(a)\nOUTPUT(y)\ny = AND(a, ghost)\n",
            'oracle_bench': SINGLE_CONE_ORIGINAL,
        }, format='json')
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.data['error'], 'Validation failed')
        self.assertIn('locked_bench', response.data['details'])
