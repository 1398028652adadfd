"""
Miter construction and per-pair key relations.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from netlist.services.circuit import GateKind
from .encoder import CnfFormula, VariableAllocator, encode_circuit, encode_gate, encode_under_io

logger = logging.getLogger(__name__)


@dataclass
class MiterEncoding:
    """
    Two copies of a locked circuit sharing the data-input variables, each with its
    own key variables, plus one XOR difference bit per output. When ``activation``
    is set the difference assertion is the clause (-act, d_1 .. d_n), so solving
    with ``act`` assumed looks for a DIP and solving without it leaves the key
    constraints alone.
    """
    formula: CnfFormula
    allocator: VariableAllocator
    inputs: Dict[str, int]
    key_a: Dict[str, int]
    key_b: Dict[str, int]
    outputs_a: Dict[str, int]
    outputs_b: Dict[str, int]
    diffs: Tuple[int, ...]
    activation: Optional[int] = None

    @property
    def input_vars(self) -> List[int]:
        return list(self.inputs.values())

    @property
    def key_a_vars(self) -> List[int]:
        return list(self.key_a.values())

    @property
    def key_b_vars(self) -> List[int]:
        return list(self.key_b.values())


def build_miter(locked, guarded: bool = True, allocator: Optional[VariableAllocator] = None) -> MiterEncoding:
    allocator = allocator or VariableAllocator()
    inputs = {net: allocator.new() for net in locked.data_inputs}
    key_a = {net: allocator.new() for net in locked.key_inputs}
    key_b = {net: allocator.new() for net in locked.key_inputs}

    copy_a = encode_circuit(locked.circuit, allocator, {**inputs, **key_a}, copy='A')
    copy_b = encode_circuit(locked.circuit, allocator, {**inputs, **key_b}, copy='B')
    formula = CnfFormula()
    formula.extend(copy_a)
    formula.extend(copy_b)

    outputs_a = {net: copy_a.net_maps['A'][net] for net in locked.circuit.outputs}
    outputs_b = {net: copy_b.net_maps['B'][net] for net in locked.circuit.outputs}
    diffs = []
    for net in locked.circuit.outputs:
        diff = allocator.new()
        formula.add_clauses(encode_gate(GateKind.XOR, (outputs_a[net], outputs_b[net]), diff))
        diffs.append(diff)

    activation = None
    if guarded:
        activation = allocator.new()
        formula.add_clause((-activation, *diffs))
    else:
        formula.add_clause(diffs)
    formula.num_vars = max(formula.num_vars, allocator.count)

    logger.debug(
        f"miter for {locked.circuit.name}: {formula.num_vars} variables, {len(formula.clauses)} clauses"
    )
    return MiterEncoding(
        formula=formula,
        allocator=allocator,
        inputs=inputs,
        key_a=key_a,
        key_b=key_b,
        outputs_a=outputs_a,
        outputs_b=outputs_b,
        diffs=tuple(diffs),
        activation=activation,
    )


def learned_relation(locked, pair) -> CnfFormula:
    """
    The key clauses one IO pair contributes, with key input i numbered i + 1 and
    every other net substituted or propagated away.
    """
    key_vars = {net: index + 1 for index, net in enumerate(locked.key_inputs)}
    allocator = VariableAllocator(len(key_vars))
    return encode_under_io(locked, pair, allocator, key_vars)
