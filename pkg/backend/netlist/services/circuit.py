"""
Gate-level combinational netlist model.

A Circuit is immutable once constructed and is validated on construction: the
single-driver rule, gate arity, driven outputs and acyclicity all hold for every
instance that exists.
"""
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx

from ..exceptions import (
    ArityError,
    CombinationalLoopError,
    DuplicateDriverError,
    NetlistError,
    UndrivenNetError,
)

logger = logging.getLogger(__name__)


class GateKind(str, Enum):
    AND = 'AND'
    NAND = 'NAND'
    OR = 'OR'
    NOR = 'NOR'
    XOR = 'XOR'
    XNOR = 'XNOR'
    NOT = 'NOT'
    BUF = 'BUF'

    @property
    def is_unary(self) -> bool:
        return self in (GateKind.NOT, GateKind.BUF)

    @property
    def inverted(self) -> 'GateKind':
        """The kind computing the complement of this kind."""
        return _INVERSE[self]


_INVERSE = {
    GateKind.AND: GateKind.NAND,
    GateKind.NAND: GateKind.AND,
    GateKind.OR: GateKind.NOR,
    GateKind.NOR: GateKind.OR,
    GateKind.XOR: GateKind.XNOR,
    GateKind.XNOR: GateKind.XOR,
    GateKind.NOT: GateKind.BUF,
    GateKind.BUF: GateKind.NOT,
}


@dataclass(frozen=True)
class Gate:
    output: str
    kind: GateKind
    inputs: Tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.kind, GateKind):
            object.__setattr__(self, 'kind', GateKind(self.kind))
        object.__setattr__(self, 'inputs', tuple(self.inputs))
        if not self.inputs:
            raise ArityError(f"gate {self.output} has no inputs")
        if self.kind.is_unary and len(self.inputs) != 1:
            raise ArityError(f"{self.kind.value} gate {self.output} takes exactly 1 input, got {len(self.inputs)}")
        if not self.kind.is_unary and len(self.inputs) < 2:
            raise ArityError(f"{self.kind.value} gate {self.output} takes at least 2 inputs, got {len(self.inputs)}")


@dataclass(frozen=True)
class Circuit:
    """
    Combinational netlist: ordered primary inputs X, ordered primary outputs Y and
    gates in file order. Net names are opaque text.
    """
    name: str
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    gates: Tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'inputs', tuple(self.inputs))
        object.__setattr__(self, 'outputs', tuple(self.outputs))
        object.__setattr__(self, 'gates', tuple(self.gates))
        self._validate()

    def _validate(self):
        seen_inputs = set()
        for net in self.inputs:
            if net in seen_inputs:
                raise DuplicateDriverError(f"input {net} declared twice")
            seen_inputs.add(net)

        drivers: Dict[str, Gate] = {}
        for gate in self.gates:
            if gate.output in seen_inputs:
                raise DuplicateDriverError(f"net {gate.output} is a primary input and is also driven by a gate")
            if gate.output in drivers:
                raise DuplicateDriverError(f"net {gate.output} has more than one driver")
            drivers[gate.output] = gate

        for gate in self.gates:
            for net in gate.inputs:
                if net not in drivers and net not in seen_inputs:
                    raise UndrivenNetError(f"net {net} (input of {gate.output}) is never driven")

        if len(set(self.outputs)) != len(self.outputs):
            raise NetlistError("an output is declared more than once")
        for net in self.outputs:
            if net not in drivers and net not in seen_inputs:
                raise UndrivenNetError(f"output {net} is never driven")

        graph = self.graph
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            path = ' -> '.join(edge[0] for edge in cycle)
            raise CombinationalLoopError(f"cycle detected: {path}")

    # --- structure -------------------------------------------------------

    @cached_property
    def drivers(self) -> Dict[str, Gate]:
        """Map from net name to the gate driving it."""
        return {gate.output: gate for gate in self.gates}

    @cached_property
    def input_set(self) -> frozenset:
        return frozenset(self.inputs)

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Net graph with edges from driver nets to the nets they feed."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.inputs)
        for gate in self.gates:
            graph.add_node(gate.output)
        for gate in self.gates:
            for net in gate.inputs:
                graph.add_edge(net, gate.output)
        return graph

    @cached_property
    def fanin_graph(self) -> nx.DiGraph:
        """Edge-reversed net graph; successors follow each gate's input order."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.inputs)
        for gate in self.gates:
            graph.add_node(gate.output)
            for net in gate.inputs:
                graph.add_edge(gate.output, net)
        return graph

    @cached_property
    def nets(self) -> Tuple[str, ...]:
        return self.inputs + tuple(gate.output for gate in self.gates)

    def driver(self, net: str) -> Optional[Gate]:
        return self.drivers.get(net)

    def is_input(self, net: str) -> bool:
        return net in self.input_set

    def fanouts(self, net: str) -> List[str]:
        return list(self.graph.successors(net))

    @cached_property
    def ordered_gates(self) -> Tuple[Gate, ...]:
        return topo_order(self)

    def topo_order(self) -> Tuple[Gate, ...]:
        return self.ordered_gates

    # --- derived circuits --------------------------------------------------

    def replace(self, **changes) -> 'Circuit':
        return replace(self, **changes)

    def signature(self):
        """Structure used for isomorphism checks: same nets, kinds and connectivity."""
        return (
            self.inputs,
            self.outputs,
            frozenset((g.output, g.kind, g.inputs) for g in self.gates),
        )

    def summary(self) -> Dict[str, object]:
        kinds: Dict[str, int] = {}
        for gate in self.gates:
            kinds[gate.kind.value] = kinds.get(gate.kind.value, 0) + 1
        return {
            'name': self.name,
            'inputs': len(self.inputs),
            'outputs': len(self.outputs),
            'gates': len(self.gates),
            'gate_kinds': dict(sorted(kinds.items())),
        }

    def fresh_name(self, base: str, taken: Iterable[str] = ()) -> str:
        """A net name derived from ``base`` that is not used in this circuit."""
        used = set(self.nets) | set(taken)
        if base not in used:
            return base
        suffix = 1
        while f"{base}_{suffix}" in used:
            suffix += 1
        return f"{base}_{suffix}"


def topo_order(circuit: Circuit) -> Tuple[Gate, ...]:
    """
    Gates ordered so that each appears after all of its drivers. Among gates that
    are ready at the same time, file order wins, so the result is deterministic.
    """
    position = {net: -1 for net in circuit.inputs}
    for index, gate in enumerate(circuit.gates):
        position[gate.output] = index
    try:
        ordered = nx.lexicographical_topological_sort(circuit.graph, key=position.__getitem__)
        drivers = circuit.drivers
        return tuple(drivers[net] for net in ordered if net in drivers)
    except nx.NetworkXUnfeasible as exc:
        raise CombinationalLoopError(str(exc)) from exc
