import os
import random
import tempfile
from io import StringIO

import networkx as nx
from django.core.management import call_command
from django.test import SimpleTestCase

from netlist.fixtures import random_circuit, single_cone_original, two_cone_original
from netlist.services.bench import read_bench_file, write_bench
from netlist.services.circuit import Circuit
from netlist.services.simulation import truth_table
from .exceptions import ConeError
from .services.cone import (
    circuit_insertion_order,
    cone_to_circuit,
    extract_cone,
    extract_cones,
    insertion_order,
    largest_cone,
)


class ConeExtractionTests(SimpleTestCase):

    def test_single_cone_covers_the_whole_circuit(self):
        cone = extract_cone(single_cone_original(), 'y0')
        self.assertEqual(set(cone.gates), {'y0', 'G1', 'G2'})
        self.assertEqual(cone.inputs, frozenset({'x0', 'x1', 'x2', 'x3'}))
        self.assertEqual(cone.node_count, 7)

    def test_insertion_order_is_nearest_to_output_first(self):
        cone = extract_cone(single_cone_original(), 'y0')
        self.assertEqual(insertion_order(cone), ['y0', 'G1', 'G2'])
        self.assertEqual(cone.layers, {'y0': 0, 'G1': 1, 'G2': 1})

    def test_two_cones_share_a_gate(self):
        y0, y1 = extract_cones(two_cone_original())
        self.assertEqual(set(y0.gates) & set(y1.gates), {'G2'})
        self.assertEqual(y1.inputs, frozenset({'x2', 'x3', 'x4', 'x5'}))

    def test_largest_cone_ties_go_to_the_first_output(self):
        self.assertEqual(largest_cone(two_cone_original()).root, 'y0')

    def test_circuit_order_starts_from_every_output(self):
        self.assertEqual(circuit_insertion_order(two_cone_original()), ['y0', 'y1', 'G1', 'G2', 'G3'])

    def test_unknown_output(self):
        with self.assertRaises(ConeError):
            extract_cone(single_cone_original(), 'G1')

    def test_cone_circuit_keeps_the_output_function(self):
        circuit = random_circuit(11, 6, 40, n_outputs=3)
        for cone in extract_cones(circuit):
            standalone = cone_to_circuit(cone, circuit)
            self.assertEqual(standalone.outputs, (cone.root,))
            self.assertEqual(len(standalone.gates), len(cone.gates))
            # compare on the parent's rows by driving unused inputs with every value
            parent = truth_table(circuit)[cone.root]
            child = truth_table(standalone)[cone.root]
            positions = [circuit.inputs.index(net) for net in standalone.inputs]
            width = len(circuit.inputs)
            for row in range(1 << width):
                sub = 0
                for net_index in positions:
                    sub = (sub << 1) | ((row >> (width - 1 - net_index)) & 1)
                self.assertEqual((parent >> row) & 1, (child >> sub) & 1)

    def test_cones_partition_nothing_outside_the_fanin(self):
        circuit = random_circuit(5, 5, 30, n_outputs=2)
        for cone in extract_cones(circuit):
            for net in cone.gates:
                for operand in circuit.driver(net).inputs:
                    self.assertIn(operand, cone)


def reference_graph(circuit):
    graph = nx.DiGraph()
    graph.add_nodes_from(circuit.inputs)
    for gate in circuit.gates:
        graph.add_edges_from((net, gate.output) for net in gate.inputs)
    return graph


def shuffled(circuit, seed):
    gates = list(circuit.gates)
    random.Random(seed).shuffle(gates)
    return Circuit(name=circuit.name, inputs=circuit.inputs, outputs=circuit.outputs, gates=tuple(gates))


class ConePropertyTests(SimpleTestCase):

    def test_membership_is_backward_reachability(self):
        for seed in range(10):
            circuit = random_circuit(seed, 8, 40 + 16 * seed, n_outputs=4)
            graph = reference_graph(circuit)
            gate_nets = {gate.output for gate in circuit.gates}
            for cone in extract_cones(circuit):
                upstream = nx.ancestors(graph, cone.root) | {cone.root}
                self.assertEqual(set(cone.gates), upstream & gate_nets)
                self.assertEqual(cone.inputs, frozenset(upstream & set(circuit.inputs)))
                self.assertEqual(len(cone.gates), len(set(cone.gates)))

    def test_layer_is_one_past_the_nearest_reader_in_the_cone(self):
        for seed in range(10):
            circuit = random_circuit(seed, 6, 60, n_outputs=3)
            for cone in extract_cones(circuit):
                self.assertEqual(cone.layers[cone.root], 0)
                for net in cone.gates:
                    if net == cone.root:
                        continue
                    readers = [reader for reader in circuit.fanouts(net) if reader in cone.layers]
                    self.assertTrue(readers)
                    self.assertEqual(cone.layers[net], 1 + min(cone.layers[r] for r in readers))

    def test_insertion_order_never_moves_back_a_layer(self):
        for seed in range(20):
            circuit = random_circuit(seed, 7, 80, n_outputs=2)
            for cone in extract_cones(circuit):
                order = insertion_order(cone)
                self.assertEqual(sorted(order), sorted(cone.gates))
                depths = [cone.layers[net] for net in order]
                self.assertEqual(depths, sorted(depths))

    def test_largest_cone_matches_reachability_counts(self):
        for seed in range(10):
            circuit = random_circuit(seed, 6, 20, n_outputs=3)
            graph = reference_graph(circuit)
            sizes = [len(nx.ancestors(graph, output)) + 1 for output in circuit.outputs]
            cone = largest_cone(circuit)
            self.assertEqual(cone.node_count, max(sizes))
            self.assertEqual(cone.root, circuit.outputs[sizes.index(max(sizes))])

    def test_gate_list_order_does_not_change_the_cones(self):
        for seed in range(10):
            circuit = random_circuit(seed, 6, 50, n_outputs=3)
            reference = extract_cones(circuit)
            for shuffle_seed in range(3):
                cones = extract_cones(shuffled(circuit, shuffle_seed))
                self.assertEqual(cones, reference)
                self.assertEqual([c.layers for c in cones], [c.layers for c in reference])

    def test_topo_order_puts_drivers_first_on_shuffled_gates(self):
        for seed in range(10):
            circuit = shuffled(random_circuit(seed, 6, 50, n_outputs=2), seed)
            ordered = circuit.topo_order()
            self.assertEqual(len(ordered), 50)
            position = {gate.output: index for index, gate in enumerate(ordered)}
            for gate in ordered:
                for net in gate.inputs:
                    if net in position:
                        self.assertLess(position[net], position[gate.output])


class ConesCommandTests(SimpleTestCase):

    def test_lists_cones_and_emits_the_largest(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'two_cone.bench')
            emitted = os.path.join(tmp, 'cone.bench')
            with open(path, 'w') as handle:
                handle.write(write_bench(two_cone_original()))
            out = StringIO()
            call_command('cones', path, emit=emitted, stdout=out)
            cone = read_bench_file(emitted)
        lines = out.getvalue().splitlines()
        self.assertTrue(lines[0].startswith('y0: 7 nodes'))
        self.assertTrue(lines[1].startswith('y1:'))
        self.assertEqual(cone.outputs, ('y0',))
        self.assertEqual(len(cone.gates), 3)
