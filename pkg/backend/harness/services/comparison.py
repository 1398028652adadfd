"""
Whole circuit against its largest cone, locked with the same key at the same gates.
"""
import logging
import random
from dataclasses import asdict, dataclass
from typing import List, Optional

from attacks.services.sat_attack import AttackOptions, sat_attack
from cones.services.cone import circuit_insertion_order, cone_to_circuit, insertion_order, largest_cone
from locking.services.key_gates import insert_key_gates
from locking.services.keys import KeyVector
from netlist.services.circuit import Circuit
from ..exceptions import HarnessError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComparisonRow:
    target: str
    outputs: int
    key_size: int
    total_iters: int
    io_pairs: int
    total_s: float
    recovered_key: str

    def as_dict(self) -> dict:
        return asdict(self)


def circuit_order(circuit: Circuit) -> List[str]:
    """The largest cone's insertion order, then every other gate breadth-first from all outputs."""
    cone_order = insertion_order(largest_cone(circuit))
    seen = set(cone_order)
    return cone_order + [net for net in circuit_insertion_order(circuit) if net not in seen]


def compare_circuit_and_cone(circuit: Circuit, keys: int, seed: int = 0,
                             options: Optional[AttackOptions] = None) -> List[ComparisonRow]:
    cone = largest_cone(circuit)
    cone_order = insertion_order(cone)
    if keys > len(cone_order):
        raise HarnessError(f"{keys} key gates requested but the largest cone has {len(cone_order)} gates")
    key = KeyVector.random(keys, random.Random(seed))
    cone_circuit = cone_to_circuit(cone, circuit)
    targets = [
        ('circuit', circuit, insert_key_gates(circuit, keys, circuit_order(circuit), key)),
        ('cone', cone_circuit, insert_key_gates(cone_circuit, keys, cone_order, key)),
    ]
    rows = []
    for label, oracle, locked in targets:
        trace = sat_attack(locked, oracle, options or AttackOptions.from_settings())
        rows.append(ComparisonRow(
            target=label,
            outputs=len(oracle.outputs),
            key_size=keys,
            total_iters=trace.total_iterations,
            io_pairs=trace.io_pairs,
            total_s=trace.total_seconds,
            recovered_key=str(trace.key),
        ))
        logger.info(f"{label} ({len(oracle.outputs)} outputs): TI={trace.total_iterations} at |K|={keys}")
    return rows
