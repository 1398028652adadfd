"""
Key application: replace key inputs by constants and fold the constants forward.
"""
import logging
from typing import Dict, List, Union

from netlist.services.circuit import Circuit, Gate, GateKind
from .keys import KeyVector, LockedCircuit
from ..exceptions import LockingError

logger = logging.getLogger(__name__)

Operand = Union[str, int]


def fold_gate(kind: GateKind, operands: List[Operand]):
    """
    Fold the constant operands of one gate. Returns ``(kind, nets)`` for a
    surviving gate or ``(None, value)`` when the output is constant.
    """
    nets = [op for op in operands if isinstance(op, str)]
    constants = [op for op in operands if not isinstance(op, str)]

    if kind in (GateKind.BUF, GateKind.NOT):
        if constants:
            return None, constants[0] ^ (kind is GateKind.NOT)
        return kind, nets

    if kind in (GateKind.AND, GateKind.NAND, GateKind.OR, GateKind.NOR):
        dominant = 0 if kind in (GateKind.AND, GateKind.NAND) else 1
        inverting = kind in (GateKind.NAND, GateKind.NOR)
        if dominant in constants:
            return None, dominant ^ inverting
        if not nets:
            return None, (1 - dominant) ^ inverting
        if len(nets) == 1:
            return (GateKind.NOT if inverting else GateKind.BUF), nets
        return kind, nets

    parity = sum(constants) & 1
    if parity:
        kind = kind.inverted
    if not nets:
        return None, int(kind is GateKind.XNOR)
    if len(nets) == 1:
        return (GateKind.NOT if kind is GateKind.XNOR else GateKind.BUF), nets
    return kind, nets


def apply_key(locked: LockedCircuit, key: KeyVector) -> Circuit:
    """
    Circuit over the data inputs only, computing ``locked`` under ``key``. Gates
    whose value becomes constant disappear; an output that becomes constant is
    rebuilt as XOR(x, x) or XNOR(x, x) on the first data input.
    """
    locked.check_key(key)
    circuit = locked.circuit
    constants: Dict[str, int] = dict(zip(locked.key_inputs, key.bits))
    gates: List[Gate] = []
    for gate in circuit.topo_order():
        operands = [constants.get(net, net) for net in gate.inputs]
        kind, folded = fold_gate(gate.kind, operands)
        if kind is None:
            constants[gate.output] = folded
        else:
            gates.append(Gate(gate.output, kind, tuple(folded)))

    for output in circuit.outputs:
        if output in constants:
            if not locked.data_inputs:
                raise LockingError(f"output {output} is constant and there is no data input to build it from")
            anchor = locked.data_inputs[0]
            kind = GateKind.XNOR if constants[output] else GateKind.XOR
            gates.append(Gate(output, kind, (anchor, anchor)))

    logger.debug(f"applied key {key} to {circuit.name}: {len(circuit.gates)} -> {len(gates)} gates")
    return Circuit(
        name=f"{circuit.name}_keyed",
        inputs=locked.data_inputs,
        outputs=circuit.outputs,
        gates=tuple(gates),
    )
