"""
Logic cone extraction.

A cone is found by reversing the edges of the net graph and running a breadth-first
search from a primary output; the visit order is both the cone's gate order and the
key-gate insertion sequence (nearest-to-output layers first).
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Sequence, Tuple

import networkx as nx

from netlist.services.circuit import Circuit
from ..exceptions import ConeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cone:
    root: str
    gates: Tuple[str, ...]
    inputs: FrozenSet[str]
    layers: Dict[str, int] = field(default_factory=dict, compare=False)

    @property
    def node_count(self) -> int:
        """Gates plus primary inputs."""
        return len(self.gates) + len(self.inputs)

    def __contains__(self, net: str) -> bool:
        return net in self.layers or net in self.inputs


def _breadth_first(circuit: Circuit, sources: Sequence[str]) -> Tuple[List[str], FrozenSet[str], Dict[str, int]]:
    drivers = circuit.drivers
    gates: List[str] = []
    inputs = set()
    layers: Dict[str, int] = {}
    for depth, layer in enumerate(nx.bfs_layers(circuit.fanin_graph, list(sources))):
        for net in layer:
            if net in drivers:
                gates.append(net)
                layers[net] = depth
            else:
                inputs.add(net)
    return gates, frozenset(inputs), layers


def extract_cone(circuit: Circuit, output: str) -> Cone:
    if output not in circuit.outputs:
        raise ConeError(f"{output} is not a primary output of {circuit.name}")
    gates, inputs, layers = _breadth_first(circuit, [output])
    return Cone(root=output, gates=tuple(gates), inputs=inputs, layers=layers)


def extract_cones(circuit: Circuit) -> List[Cone]:
    """One cone per primary output, in output order."""
    cones = [extract_cone(circuit, output) for output in circuit.outputs]
    for cone in cones:
        logger.debug(f"cone {cone.root}: {len(cone.gates)} gates, {len(cone.inputs)} inputs")
    return cones


def largest_cone(circuit: Circuit) -> Cone:
    """The cone with the most nodes; ties go to the output listed first."""
    if not circuit.outputs:
        raise ConeError(f"{circuit.name} has no outputs")
    best = None
    for cone in extract_cones(circuit):
        if best is None or cone.node_count > best.node_count:
            best = cone
    return best


def cone_to_circuit(cone: Cone, parent: Circuit) -> Circuit:
    """Standalone single-output circuit holding exactly the cone's gates and inputs."""
    members = set(cone.gates)
    return Circuit(
        name=f"{parent.name}_{cone.root}",
        inputs=tuple(net for net in parent.inputs if net in cone.inputs),
        outputs=(cone.root,),
        gates=tuple(gate for gate in parent.gates if gate.output in members),
    )


def insertion_order(cone: Cone) -> List[str]:
    """
    Gate output nets by ascending distance from the root; within a layer, in the
    order the breadth-first search first reached them.
    """
    return sorted(cone.gates, key=lambda net: cone.layers[net])


def circuit_insertion_order(circuit: Circuit) -> List[str]:
    """Breadth-first gate order from all primary outputs at once."""
    gates, _, _ = _breadth_first(circuit, circuit.outputs)
    return gates
