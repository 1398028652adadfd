import os
import tempfile
from io import StringIO
from itertools import product

from django.core.management import call_command
from django.test import SimpleTestCase

from attacks.services.oracle import IoPair
from locking.services.keys import LockedCircuit
from netlist.fixtures import (
    SINGLE_CONE_IO_NUMBERING,
    SINGLE_CONE_LOCKED,
    TWO_CONE_IO_NUMBERING,
    random_circuit,
    single_cone_locked,
    single_cone_original,
    two_cone_locked,
)
from netlist.services.bench import parse_bench
from netlist.services.circuit import GateKind
from netlist.services.simulation import evaluate_gate, simulate
from solver.services.cdcl import Solver
from .exceptions import CnfError, DimacsFormatError, UnsatisfiableUnderAssignment
from .services.dimacs import parse_dimacs, to_dimacs
from .services.encoder import CnfFormula, VariableAllocator, encode_circuit, encode_gate, encode_under_io, io_assignment
from .services.miter import build_miter, learned_relation
from .services.simplify import model_count, simplify

SINGLE_CONE_KEYS = {'keyinput0': 6, 'keyinput1': 7, 'keyinput2': 8}
TWO_CONE_KEYS = {'keyinput0': 8, 'keyinput1': 9, 'keyinput2': 10}


def clause_set(clauses):
    return {frozenset(clause) for clause in clauses}


# C(X1, K, Y1) of the single-cone example under the fixed numbering
C1_FULL = clause_set([
    (-17, -18, 16), (17, -16), (18, -16),
    (-2, -3, 19), (2, -19), (3, -19),
    (-4, -5, 20), (4, -20), (5, -20),
    (-6, -16, -9), (-6, 16, 9), (6, -16, 9), (6, 16, -9),
    (-7, -19, -17), (-7, 19, 17), (7, -19, 17), (7, 19, -17),
    (-20, -8, 18), (-20, 8, -18), (20, -8, -18), (20, 8, 18),
])
C1_SUBSTITUTED = clause_set([
    (-17, -18, 16), (17, -16), (18, -16), (19,), (20,),
    (-6, -16), (6, 16),
    (-7, -19, -17), (-7, 19, 17), (7, -19, 17), (7, 19, -17),
    (-20, -8, 18), (-20, 8, -18), (20, -8, -18), (20, 8, 18),
])
C1_PROPAGATED = clause_set([
    (-17, -18, 16), (17, -16), (18, -16),
    (-6, -16), (6, 16),
    (-7, -17), (7, 17),
    (-8, 18), (8, -18),
])


def single_cone_copy():
    locked = LockedCircuit.from_circuit(single_cone_locked())
    formula = encode_circuit(locked.circuit, VariableAllocator(), SINGLE_CONE_IO_NUMBERING, copy='io')
    return locked, formula


class GateEncodingTests(SimpleTestCase):

    def test_clauses_agree_with_gate_semantics(self):
        for kind in GateKind:
            arities = (1,) if kind.is_unary else (2, 3)
            for arity in arities:
                inputs = list(range(1, arity + 1))
                output = arity + 1
                formula = CnfFormula()
                formula.add_clauses(encode_gate(kind, inputs, output, VariableAllocator(output)))
                _, models = model_count(formula, inputs + [output])
                expected = {
                    values + (evaluate_gate(kind, values, 1),)
                    for values in product((0, 1), repeat=arity)
                }
                self.assertEqual(models, expected, f"{kind.value}/{arity}")

    def test_and_clause_form(self):
        self.assertEqual(encode_gate(GateKind.AND, [1, 2], 3), [(-1, -2, 3), (1, -3), (2, -3)])

    def test_wide_xor_needs_an_allocator(self):
        with self.assertRaises(CnfError):
            encode_gate(GateKind.XOR, [1, 2, 3], 4)

    def test_literal_zero_is_rejected(self):
        with self.assertRaises(CnfError):
            CnfFormula().add_clause((1, 0))


class CircuitEncodingTests(SimpleTestCase):

    def test_single_cone_copy_has_the_full_clause_set(self):
        _, formula = single_cone_copy()
        self.assertEqual(len(formula.clauses), 21)
        self.assertEqual(formula.clause_set(), C1_FULL)

    def test_substitution_without_propagation(self):
        locked, formula = single_cone_copy()
        fixed = io_assignment(locked.circuit, locked.data_inputs, SINGLE_CONE_IO_NUMBERING, (1, 1, 1, 1), (1,))
        self.assertEqual(fixed, {2: 1, 3: 1, 4: 1, 5: 1, 9: 1})
        reduced = simplify(formula, fixed, propagate=False)
        self.assertEqual(len(reduced.clauses), 15)
        self.assertEqual(reduced.clause_set(), C1_SUBSTITUTED)

    def test_substitution_with_propagation(self):
        locked, formula = single_cone_copy()
        fixed = io_assignment(locked.circuit, locked.data_inputs, SINGLE_CONE_IO_NUMBERING, (1, 1, 1, 1), (1,))
        reduced = simplify(formula, fixed)
        self.assertEqual(len(reduced.clauses), 9)
        self.assertEqual(reduced.clause_set(), C1_PROPAGATED)
        self.assertEqual(reduced.units, {19: 1, 20: 1})

    def test_encode_under_io_single_cone(self):
        locked = LockedCircuit.from_circuit(single_cone_locked())
        formula = encode_under_io(
            locked, IoPair.from_strings('1111', '1'), VariableAllocator(), SINGLE_CONE_KEYS,
            net_map=SINGLE_CONE_IO_NUMBERING,
        )
        self.assertEqual(formula.clause_set(), C1_PROPAGATED)

    def test_encode_under_io_two_cones_keeps_forced_key_bits(self):
        locked = LockedCircuit.from_circuit(two_cone_locked())
        formula = encode_under_io(
            locked, IoPair.from_strings('111100', '11'), VariableAllocator(), TWO_CONE_KEYS,
            net_map=TWO_CONE_IO_NUMBERING,
        )
        self.assertEqual(formula.clause_set(), clause_set([
            (-9, -21), (9, 21), (-21, 20), (21, -20), (-8, -20), (8, 20), (10,),
        ]))

    def test_unit_clauses_instead_of_substitution(self):
        locked = LockedCircuit.from_circuit(single_cone_locked())
        formula = encode_under_io(
            locked, IoPair.from_strings('1111', '1'), VariableAllocator(), SINGLE_CONE_KEYS,
            substitute=False, net_map=SINGLE_CONE_IO_NUMBERING,
        )
        self.assertEqual(len(formula.clauses), 26)
        self.assertTrue({frozenset((v,)) for v in (2, 3, 4, 5, 9)} <= formula.clause_set())

    def test_contradicting_pair(self):
        circuit = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n")
        with self.assertRaises(UnsatisfiableUnderAssignment):
            encode_under_io(LockedCircuit.unlocked(circuit), IoPair.from_strings('11', '0'), VariableAllocator(), {})

    def test_fresh_variables_follow_inputs_then_topological_order(self):
        formula = encode_circuit(single_cone_original())
        self.assertEqual(formula.net_maps['C'], {'x0': 1, 'x1': 2, 'x2': 3, 'x3': 4, 'G1': 5, 'G2': 6, 'y0': 7})

    def test_models_are_simulations(self):
        circuit = random_circuit(9, 5, 20, n_outputs=2)
        formula = encode_circuit(circuit)
        mapping = formula.net_maps['C']
        for row in range(32):
            x = {net: (row >> (4 - i)) & 1 for i, net in enumerate(circuit.inputs)}
            solver = Solver()
            solver.ensure_vars(formula.num_vars)
            solver.add_clauses(formula.clauses)
            assumptions = [mapping[net] if bit else -mapping[net] for net, bit in x.items()]
            self.assertTrue(solver.solve(assumptions))
            expected = simulate(circuit, x)
            for net in circuit.outputs:
                self.assertEqual(solver.model_value(mapping[net]), expected[net])


class LearnedRelationTests(SimpleTestCase):

    def test_first_pair_halves_the_keyspace(self):
        locked = LockedCircuit.from_circuit(single_cone_locked())
        relation = learned_relation(locked, IoPair.from_strings('1111', '1'))
        count, keys = model_count(relation, [1, 2, 3])
        self.assertEqual(count, 4)
        self.assertEqual(keys, {(1, 0, 0), (0, 0, 1), (1, 1, 0), (1, 1, 1)})

    def test_second_pair_ties_k0_to_nor_of_k1_k2(self):
        locked = LockedCircuit.from_circuit(single_cone_locked())
        relation = learned_relation(locked, IoPair.from_strings('1101', '0'))
        count, keys = model_count(relation, [1, 2, 3])
        self.assertEqual(count, 4)
        self.assertEqual(keys, {(1, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)})
        self.assertTrue(all(k0 == int(not k1 and not k2) for k0, k1, k2 in keys))


class MiterTests(SimpleTestCase):

    def test_keyless_miter_is_unsatisfiable(self):
        miter = build_miter(LockedCircuit.unlocked(single_cone_original()), guarded=False)
        solver = Solver()
        solver.add_clauses(miter.formula.clauses)
        self.assertFalse(solver.solve())

    def test_guarded_miter_finds_a_distinguishing_input(self):
        locked = LockedCircuit.from_circuit(single_cone_locked())
        miter = build_miter(locked)
        solver = Solver()
        solver.add_clauses(miter.formula.clauses)
        self.assertTrue(solver.solve())
        self.assertTrue(solver.solve([miter.activation]))
        x = {net: solver.model_value(var) for net, var in miter.inputs.items()}
        outputs = []
        for keys in (miter.key_a, miter.key_b):
            assignment = dict(x, **{net: solver.model_value(var) for net, var in keys.items()})
            outputs.append(simulate(locked.circuit, assignment))
        self.assertNotEqual(outputs[0], outputs[1])

    def test_variables_are_shared_inputs_then_two_key_copies(self):
        locked = LockedCircuit.from_circuit(single_cone_locked())
        miter = build_miter(locked)
        self.assertEqual(miter.input_vars, [1, 2, 3, 4])
        self.assertEqual(miter.key_a_vars, [5, 6, 7])
        self.assertEqual(miter.key_b_vars, [8, 9, 10])
        self.assertEqual(len(miter.diffs), 1)


class DimacsTests(SimpleTestCase):

    def test_export_and_parse(self):
        formula = encode_circuit(single_cone_original())
        text = to_dimacs(formula)
        self.assertIn('c net C y0 7', text)
        self.assertIn(f"p cnf 7 {len(formula.clauses)}", text)
        again = parse_dimacs(text)
        self.assertEqual(again.clause_set(), formula.clause_set())
        self.assertEqual(again.net_maps, formula.net_maps)

    def test_clauses_may_span_lines(self):
        formula = parse_dimacs("c example\np cnf 3 2\n1 -2\n3 0 -1 0\n")
        self.assertEqual(formula.clauses, [(1, -2, 3), (-1,)])

    def test_clause_count_must_match(self):
        with self.assertRaises(DimacsFormatError):
            parse_dimacs("p cnf 2 2\n1 2 0\n")

    def test_variable_out_of_range(self):
        with self.assertRaises(DimacsFormatError) as ctx:
            parse_dimacs("p cnf 2 1\n1 3 0\n")
        self.assertEqual(ctx.exception.line, 2)

    def test_clause_before_header(self):
        with self.assertRaises(DimacsFormatError):
            parse_dimacs("1 2 0\np cnf 2 1\n")


class ExportCommandTests(SimpleTestCase):

    def test_miter_export_solves(self):
        with tempfile.TemporaryDirectory() as tmp:
            bench = os.path.join(tmp, 'locked.bench')
            cnf_path = os.path.join(tmp, 'miter.cnf')
            with open(bench, 'w') as handle:
                handle.write(SINGLE_CONE_LOCKED)
            call_command('export_cnf', bench, miter=True, out=cnf_path, stdout=StringIO())
            out = StringIO()
            call_command('sat', cnf_path, stdout=out)
        self.assertEqual(out.getvalue().splitlines()[0], 's SATISFIABLE')

    def test_circuit_export_to_stdout(self):
        with tempfile.TemporaryDirectory() as tmp:
            bench = os.path.join(tmp, 'locked.bench')
            with open(bench, 'w') as handle:
                handle.write(SINGLE_CONE_LOCKED)
            out = StringIO()
            call_command('export_cnf', bench, no_comments=True, stdout=out)
        text = out.getvalue()
        self.assertNotIn('c net', text)
        formula = parse_dimacs(text)
        self.assertEqual(formula.clause_set(), encode_circuit(single_cone_locked()).clause_set())
