"""
Iterative XOR/XNOR key-gate insertion.

Key gate i sits on the output net of the i-th gate of the insertion order: the
original driver is renamed and the key gate takes over the net, so every reader
of that net now sees the key-gated value. A correct key bit of 0 gives an XOR
gate, 1 an XNOR gate; either way the correct bit makes the key gate a buffer.
"""
import logging
import random
from typing import Optional, Sequence

from cones.services.cone import insertion_order, largest_cone
from netlist.services.circuit import Circuit, GateKind
from .builder import GateBuilder
from .keys import KeyVector, LockedCircuit, LockScheme, key_input_prefix
from ..exceptions import InsertionCapacityError, KeyWidthError

logger = logging.getLogger(__name__)


def default_order(circuit: Circuit) -> list:
    """Insertion order of the largest cone."""
    return insertion_order(largest_cone(circuit))


def insert_key_gates(
    circuit: Circuit,
    count: int,
    order: Optional[Sequence[str]] = None,
    key: Optional[KeyVector] = None,
    seed: Optional[int] = None,
    prefix: Optional[str] = None,
) -> LockedCircuit:
    """
    Lock ``circuit`` with ``count`` key gates at the first ``count`` nets of
    ``order``. The correct key is ``key`` when given, otherwise drawn from ``seed``.
    Locking the same circuit with the same order and a key prefix yields the same
    gates for that prefix, whatever ``count`` is.
    """
    if count < 0:
        raise InsertionCapacityError("key count must not be negative")
    order = list(order) if order is not None else default_order(circuit)
    if count > len(order):
        raise InsertionCapacityError(
            f"{count} key gates requested but only {len(order)} insertion locations exist"
        )
    if key is None:
        key = KeyVector.random(count, random.Random(seed))
    if key.width != count:
        raise KeyWidthError(f"key has {key.width} bits for {count} key gates")

    prefix = key_input_prefix(prefix)
    builder = GateBuilder(circuit)
    key_inputs = []
    for index, (net, bit) in enumerate(zip(order[:count], key.bits)):
        key_net = builder.add_input(f"{prefix}{index}")
        key_inputs.append(key_net)
        original = builder.detach(net)
        builder.drive(net, GateKind.XNOR if bit else GateKind.XOR, (original, key_net))

    locked = LockedCircuit(
        circuit=builder.build(f"{circuit.name}_locked" if count else circuit.name),
        data_inputs=circuit.inputs,
        key_inputs=tuple(key_inputs),
        correct_key=key,
        scheme=LockScheme.XOR_INSERTION,
        params={'count': count, 'locations': list(order[:count])},
    )
    logger.info(f"inserted {count} key gates into {circuit.name}, key {key}")
    return locked
