"""
Incremental netlist editing used by every locking construction.
"""
from typing import List, Sequence

from netlist.services.circuit import Circuit, Gate, GateKind
from ..exceptions import LockingError


class GateBuilder:
    """
    Mutable working copy of a circuit. New gates are appended after the existing
    ones and new inputs after the existing inputs, so a construction applied in
    steps leaves every earlier step's gates in place.
    """

    def __init__(self, circuit: Circuit):
        self.source = circuit
        self.inputs: List[str] = list(circuit.inputs)
        self.gates: List[Gate] = list(circuit.gates)
        self._taken = set(circuit.nets)
        self._index = {gate.output: i for i, gate in enumerate(self.gates)}

    def fresh(self, base: str) -> str:
        if base not in self._taken:
            self._taken.add(base)
            return base
        suffix = 1
        while f"{base}_{suffix}" in self._taken:
            suffix += 1
        name = f"{base}_{suffix}"
        self._taken.add(name)
        return name

    def add_input(self, name: str) -> str:
        if name in self._taken:
            raise LockingError(f"cannot add input {name}: net already exists")
        self._taken.add(name)
        self.inputs.append(name)
        return name

    def add(self, base: str, kind: GateKind, inputs: Sequence[str]) -> str:
        """Append a gate driving a fresh net derived from ``base``; returns the net."""
        net = self.fresh(base)
        self._append(Gate(net, kind, tuple(inputs)))
        return net

    def drive(self, net: str, kind: GateKind, inputs: Sequence[str]) -> str:
        """Append a gate driving ``net``, which must have been detached first."""
        if net in self._index:
            raise LockingError(f"net {net} already has a driver")
        self._append(Gate(net, kind, tuple(inputs)))
        return net

    def detach(self, net: str) -> str:
        """
        Rename the driver of ``net`` to a fresh net and return that name. Readers of
        ``net`` are untouched, so the next gate driving ``net`` sits between them.
        """
        if net in self.inputs:
            raise LockingError(f"{net} is a primary input and cannot be spliced")
        try:
            position = self._index.pop(net)
        except KeyError:
            raise LockingError(f"net {net} has no driver") from None
        gate = self.gates[position]
        renamed = self.fresh(f"{net}_pre")
        self.gates[position] = Gate(renamed, gate.kind, gate.inputs)
        self._index[renamed] = position
        return renamed

    def _append(self, gate: Gate):
        self._index[gate.output] = len(self.gates)
        self.gates.append(gate)

    def build(self, name: str) -> Circuit:
        return Circuit(name=name, inputs=tuple(self.inputs), outputs=self.source.outputs, gates=tuple(self.gates))


def gate_chain(builder: GateBuilder, base: str, kind: GateKind, operands: Sequence[str]) -> str:
    """One gate of ``kind`` over ``operands``; a single operand becomes BUF or NOT."""
    operands = list(operands)
    if len(operands) == 1:
        inverting = kind in (GateKind.NAND, GateKind.NOR, GateKind.XNOR)
        return builder.add(base, GateKind.NOT if inverting else GateKind.BUF, operands)
    return builder.add(base, kind, operands)
