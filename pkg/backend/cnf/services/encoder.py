"""
Tseitin encoding of gate-level circuits.

Literals are DIMACS integers: variable v is ``v`` when true and ``-v`` when false.
Every net of an encoded circuit copy gets one variable; the copy's net map is kept
on the formula so models can be read back by net name.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from netlist.services.circuit import Circuit, GateKind
from ..exceptions import CnfError, UnsatisfiableUnderAssignment

logger = logging.getLogger(__name__)

Clause = Tuple[int, ...]
NetMap = Dict[str, int]


class VariableAllocator:
    """Hands out consecutive variable numbers starting after ``start``."""

    def __init__(self, start: int = 0):
        self.count = start

    def new(self) -> int:
        self.count += 1
        return self.count

    def reserve(self, var: int) -> None:
        if var > self.count:
            self.count = var


@dataclass
class CnfFormula:
    clauses: List[Clause] = field(default_factory=list)
    num_vars: int = 0
    net_maps: Dict[str, NetMap] = field(default_factory=dict)
    units: Dict[int, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    @property
    def unsat(self) -> bool:
        """True once the empty clause is part of the formula."""
        return any(not clause for clause in self.clauses)

    def add_clause(self, literals: Iterable[int]) -> None:
        clause = tuple(int(lit) for lit in literals)
        if any(lit == 0 for lit in clause):
            raise CnfError("literal 0 is not a valid literal")
        for lit in clause:
            if abs(lit) > self.num_vars:
                self.num_vars = abs(lit)
        self.clauses.append(clause)

    def add_clauses(self, clauses: Iterable[Iterable[int]]) -> None:
        for clause in clauses:
            self.add_clause(clause)

    def extend(self, other: 'CnfFormula') -> None:
        self.add_clauses(other.clauses)
        self.num_vars = max(self.num_vars, other.num_vars)
        self.net_maps.update(other.net_maps)

    def variables(self) -> Set[int]:
        return {abs(lit) for clause in self.clauses for lit in clause}

    def clause_set(self) -> Set[frozenset]:
        return {frozenset(clause) for clause in self.clauses}

    def copy(self) -> 'CnfFormula':
        return CnfFormula(
            clauses=list(self.clauses),
            num_vars=self.num_vars,
            net_maps={name: dict(mapping) for name, mapping in self.net_maps.items()},
            units=dict(self.units),
        )


def _xor2(a: int, b: int, o: int, inverted: bool = False) -> List[Clause]:
    if inverted:
        return [(-a, -b, o), (-a, b, -o), (a, -b, -o), (a, b, o)]
    return [(-a, -b, -o), (-a, b, o), (a, -b, o), (a, b, -o)]


def encode_gate(kind: GateKind, inputs: Sequence[int], output: int,
                allocator: Optional[VariableAllocator] = None) -> List[Clause]:
    """
    Consistency clauses for ``output = kind(inputs)``. XOR/XNOR over more than two
    inputs are folded left through fresh variables from ``allocator``.
    """
    inputs = list(inputs)
    o = output
    if not inputs:
        raise CnfError(f"{kind.value} gate needs at least one input")
    if kind is GateKind.BUF:
        a, = inputs
        return [(-a, o), (a, -o)]
    if kind is GateKind.NOT:
        a, = inputs
        return [(-a, -o), (a, o)]
    if kind is GateKind.AND:
        return [tuple(-i for i in inputs) + (o,)] + [(i, -o) for i in inputs]
    if kind is GateKind.NAND:
        return [tuple(-i for i in inputs) + (-o,)] + [(i, o) for i in inputs]
    if kind is GateKind.OR:
        return [tuple(inputs) + (-o,)] + [(-i, o) for i in inputs]
    if kind is GateKind.NOR:
        return [tuple(inputs) + (o,)] + [(-i, -o) for i in inputs]

    inverted = kind is GateKind.XNOR
    if len(inputs) == 1:
        a, = inputs
        return [(-a, -o), (a, o)] if inverted else [(-a, o), (a, -o)]
    if len(inputs) == 2:
        return _xor2(inputs[0], inputs[1], o, inverted)
    if allocator is None:
        raise CnfError(f"{len(inputs)}-input {kind.value} needs an allocator for intermediate variables")
    clauses: List[Clause] = []
    acc = inputs[0]
    for operand in inputs[1:-1]:
        step = allocator.new()
        clauses.extend(_xor2(acc, operand, step))
        acc = step
    clauses.extend(_xor2(acc, inputs[-1], o, inverted))
    return clauses


def allocate_nets(circuit: Circuit, allocator: VariableAllocator, net_map: Optional[Mapping[str, int]] = None) -> NetMap:
    """
    Variable per net. Nets already in ``net_map`` keep their variable; the rest get
    fresh ones, inputs first and then gate outputs in topological order.
    """
    mapping: NetMap = dict(net_map or {})
    for var in mapping.values():
        allocator.reserve(var)
    for net in circuit.inputs:
        if net not in mapping:
            mapping[net] = allocator.new()
    for gate in circuit.topo_order():
        if gate.output not in mapping:
            mapping[gate.output] = allocator.new()
    return mapping


def encode_circuit(
    circuit: Circuit,
    allocator: Optional[VariableAllocator] = None,
    net_map: Optional[Mapping[str, int]] = None,
    copy: str = 'C',
) -> CnfFormula:
    """Clauses of every gate in topological order; the net map is stored under ``copy``."""
    allocator = allocator or VariableAllocator()
    mapping = allocate_nets(circuit, allocator, net_map)
    formula = CnfFormula(net_maps={copy: mapping})
    for gate in circuit.topo_order():
        formula.add_clauses(encode_gate(gate.kind, [mapping[n] for n in gate.inputs], mapping[gate.output], allocator))
    formula.num_vars = max(formula.num_vars, allocator.count)
    return formula


def io_assignment(circuit: Circuit, data_inputs: Sequence[str], mapping: Mapping[str, int],
                  x: Sequence[int], y: Sequence[int]) -> Dict[int, int]:
    """Variable -> bit map pinning data inputs to ``x`` and outputs to ``y``."""
    x, y = tuple(x), tuple(y)
    if len(x) != len(data_inputs):
        raise CnfError(f"input vector has {len(x)} bits for {len(data_inputs)} data inputs")
    if len(y) != len(circuit.outputs):
        raise CnfError(f"output vector has {len(y)} bits for {len(circuit.outputs)} outputs")
    fixed: Dict[int, int] = {}
    for net, bit in list(zip(data_inputs, x)) + list(zip(circuit.outputs, y)):
        var = mapping[net]
        if fixed.get(var, bit) != bit:
            raise UnsatisfiableUnderAssignment(f"net {net} is pinned to both 0 and 1")
        fixed[var] = int(bit)
    return fixed


def encode_under_io(
    locked,
    pair,
    allocator: VariableAllocator,
    key_vars: Mapping[str, int],
    substitute: bool = True,
    net_map: Optional[Mapping[str, int]] = None,
    copy: str = 'io',
) -> CnfFormula:
    """
    C(X_i, K, Y_i): a fresh copy of the locked circuit whose key inputs use the
    shared ``key_vars`` and whose data inputs and outputs are pinned to ``pair.x``
    and ``pair.y``. With ``substitute`` the constants are substituted and the copy
    simplified with the key variables kept; otherwise they are added as unit clauses.
    Raises UnsatisfiableUnderAssignment when the pair contradicts the circuit for
    every key.
    """
    from .simplify import simplify

    seed = dict(net_map or {})
    seed.update(key_vars)
    formula = encode_circuit(locked.circuit, allocator, seed, copy=copy)
    fixed = io_assignment(locked.circuit, locked.data_inputs, formula.net_maps[copy], pair.x, pair.y)
    if substitute:
        return simplify(formula, fixed, keep=frozenset(key_vars.values()))
    for var, bit in fixed.items():
        formula.add_clause((var if bit else -var,))
    return formula
