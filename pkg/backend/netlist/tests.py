import os
import random
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from rest_framework.test import APITestCase

from .exceptions import (
    ArityError,
    BenchSyntaxError,
    CombinationalLoopError,
    DuplicateDriverError,
    MissingInputError,
    NetlistError,
    UndrivenNetError,
    UnsupportedGateError,
)
from .fixtures import array_multiplier, random_circuit, single_cone_locked, single_cone_original, two_cone_original
from .services.bench import parse_bench, write_bench
from .services.circuit import GateKind
from .services.simulation import exhaustive_patterns, simulate, simulate_words, truth_table


class BenchParserTests(SimpleTestCase):

    def test_single_cone_structure(self):
        circuit = single_cone_original()
        self.assertEqual(circuit.inputs, ('x0', 'x1', 'x2', 'x3'))
        self.assertEqual(circuit.outputs, ('y0',))
        self.assertEqual(len(circuit.gates), 3)
        self.assertTrue(all(gate.kind is GateKind.AND for gate in circuit.gates))

    def test_keywords_are_case_insensitive_and_buff_is_buf(self):
        circuit = parse_bench("input(a)\nINPUT(b)\noutput(y)\nt = nand(a, b)\ny = BUFF(t)\n")
        self.assertEqual(circuit.driver('t').kind, GateKind.NAND)
        self.assertEqual(circuit.driver('y').kind, GateKind.BUF)

    def test_comments_and_blank_lines_are_ignored(self):
        circuit = parse_bench("# header\n\nINPUT(a)   # trailing\nOUTPUT(y)\n\ny = NOT(a)\n")
        self.assertEqual(circuit.summary()['gates'], 1)

    def test_output_may_be_an_input(self):
        circuit = parse_bench("INPUT(a)\nOUTPUT(a)\n")
        self.assertEqual(simulate(circuit, {'a': 1}), {'a': 1})

    def test_syntax_error_reports_position(self):
        with self.assertRaises(BenchSyntaxError) as ctx:
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a,, a)\n")
        self.assertEqual(ctx.exception.line, 3)

    def test_garbage_line(self):
        with self.assertRaises(BenchSyntaxError) as ctx:
            parse_bench("INPUT(a)\n  this is not bench\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.column, 3)

    def test_sequential_elements_are_rejected(self):
        with self.assertRaisesMessage(UnsupportedGateError, 'sequential'):
            parse_bench("INPUT(a)\nOUTPUT(q)\nq = DFF(a)\n")

    def test_unknown_gate_kind(self):
        with self.assertRaises(UnsupportedGateError):
            parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = MUX(a, b)\n")

    def test_duplicate_driver(self):
        with self.assertRaises(DuplicateDriverError):
            parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\ny = OR(a, b)\n")

    def test_gate_driving_an_input(self):
        with self.assertRaises(DuplicateDriverError):
            parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(a)\na = AND(a, b)\n")

    def test_undriven_net(self):
        with self.assertRaises(UndrivenNetError):
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, ghost)\n")

    def test_undriven_output(self):
        with self.assertRaises(UndrivenNetError):
            parse_bench("INPUT(a)\nOUTPUT(y)\nOUTPUT(z)\ny = NOT(a)\n")

    def test_cycle(self):
        with self.assertRaises(CombinationalLoopError):
            parse_bench("INPUT(a)\nOUTPUT(y)\np = AND(a, q)\nq = OR(a, p)\ny = BUF(p)\n")

    def test_arity(self):
        with self.assertRaises(ArityError):
            parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NOT(a, b)\n")
        with self.assertRaises(ArityError):
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a)\n")

    def test_write_then_parse_is_isomorphic(self):
        for circuit in (single_cone_locked(), two_cone_original(), random_circuit(7, 6, 30, n_outputs=3)):
            again = parse_bench(write_bench(circuit), name=circuit.name)
            self.assertEqual(again.signature(), circuit.signature())


class SimulationTests(SimpleTestCase):

    def test_single_cone_is_a_four_input_and(self):
        # row 15 is 1111 read most significant bit first
        self.assertEqual(truth_table(single_cone_original()), {'y0': 1 << 15})

    def test_exhaustive_patterns_are_msb_first(self):
        patterns = exhaustive_patterns(['a', 'b'])
        # rows 0..3 are 00, 01, 10, 11
        self.assertEqual(patterns['a'], 0b1100)
        self.assertEqual(patterns['b'], 0b1010)

    def test_every_gate_kind(self):
        bench = "\n".join(
            ["INPUT(a)", "INPUT(b)"]
            + [f"OUTPUT({kind.lower()})" for kind in ('AND', 'NAND', 'OR', 'NOR', 'XOR', 'XNOR')]
            + ["OUTPUT(inv)", "OUTPUT(buf)"]
            + [f"{kind.lower()} = {kind}(a, b)" for kind in ('AND', 'NAND', 'OR', 'NOR', 'XOR', 'XNOR')]
            + ["inv = NOT(a)", "buf = BUF(b)"]
        )
        table = truth_table(parse_bench(bench))
        self.assertEqual(table, {
            'and': 0b1000, 'nand': 0b0111, 'or': 0b1110, 'nor': 0b0001,
            'xor': 0b0110, 'xnor': 0b1001, 'inv': 0b0011, 'buf': 0b1010,
        })

    def test_wide_xor_is_parity(self):
        circuit = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = XOR(a, b, c)\n")
        table = truth_table(circuit)['y']
        for row in range(8):
            self.assertEqual((table >> row) & 1, bin(row).count('1') % 2)

    def test_locked_circuit_with_correct_key_matches_original(self):
        locked = single_cone_locked()
        original = single_cone_original()
        patterns = exhaustive_patterns(original.inputs)
        words = dict(patterns, keyinput0=0, keyinput1=0, keyinput2=(1 << 16) - 1)
        self.assertEqual(simulate_words(locked, words, 16), truth_table(original))

    def test_word_and_single_vector_agree(self):
        circuit = random_circuit(3, 5, 25, n_outputs=2)
        table = truth_table(circuit)
        for row in range(32):
            x = {net: (row >> (4 - i)) & 1 for i, net in enumerate(circuit.inputs)}
            got = simulate(circuit, x)
            for net in circuit.outputs:
                self.assertEqual(got[net], (table[net] >> row) & 1)


    def test_array_multiplier_multiplies(self):
        def product(circuit, width, a, b):
            x = {f"a{i}": (a >> i) & 1 for i in range(width)}
            x.update({f"b{i}": (b >> i) & 1 for i in range(width)})
            out = simulate(circuit, x)
            return sum(out[f"p{w}"] << w for w in range(2 * width))

        four = array_multiplier(4)
        for a in range(16):
            for b in range(16):
                self.assertEqual(product(four, 4, a, b), a * b)
        six = array_multiplier(6)
        rng = random.Random(6)
        for _ in range(200):
            a, b = rng.randrange(64), rng.randrange(64)
            self.assertEqual(product(six, 6, a, b), a * b)
        self.assertEqual(len(six.outputs), 12)
        with self.assertRaises(NetlistError):
            array_multiplier(1)

    def test_missing_input(self):
        with self.assertRaises(MissingInputError):
            simulate(single_cone_original(), {'x0': 1})


class BenchParseApiTests(APITestCase):

    def test_parse_returns_summary_and_cones(self):
        from .fixtures import TWO_CONE_ORIGINAL

        response = self.client.post('/api/v1/netlists/parse/', {'bench': TWO_CONE_ORIGINAL, 'name': 'two'}, format='json')
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data['summary']['gates'], 5)
        roots = [cone['root'] for cone in response.data['cones']]
        self.assertEqual(roots, ['y0', 'y1'])

    def test_bad_bench_is_a_client_error(self):
        response = self.client.post('/api/v1/netlists/parse/', {'bench': "INPUT(a)\nq = DFF(a)\n"}, format='json')
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.data['error'], 'UnsupportedGateError')


class ParseCommandTests(SimpleTestCase):

    def test_summary_and_gate_kinds(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'two_cone.bench')
            with open(path, 'w') as handle:
                handle.write(write_bench(two_cone_original()))
            out = StringIO()
            call_command('parse', path, stdout=out)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[0], 'two_cone: 6 inputs, 2 outputs, 5 gates')
        self.assertEqual([line.split() for line in lines[1:]], [['AND', '4'], ['OR', '1']])

    def test_parse_error_is_a_command_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'bad.bench')
            with open(path, 'w') as handle:
                handle.write("INPUT(a)\nOUTPUT(y)\ny = AND(a, ghost)\n")
            with self.assertRaisesMessage(CommandError, 'UndrivenNetError'):
                call_command('parse', path, stdout=StringIO())
