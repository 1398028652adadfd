"""
Bit-parallel simulation.

Every net value is a Python int used as a bit vector: bit ``r`` of a net holds the
net's value on row ``r``. A single-vector simulation is the one-row case.
"""
from typing import Dict, Iterable, Mapping, Sequence

from .circuit import Circuit, GateKind
from ..exceptions import MissingInputError

Assignment = Dict[str, int]


def evaluate_gate(kind: GateKind, values: Sequence[int], mask: int) -> int:
    if kind is GateKind.BUF:
        return values[0]
    if kind is GateKind.NOT:
        return ~values[0] & mask
    if kind in (GateKind.AND, GateKind.NAND):
        result = mask
        for value in values:
            result &= value
        return result if kind is GateKind.AND else ~result & mask
    if kind in (GateKind.OR, GateKind.NOR):
        result = 0
        for value in values:
            result |= value
        return result if kind is GateKind.OR else ~result & mask
    result = 0
    for value in values:
        result ^= value
    return result if kind is GateKind.XOR else ~result & mask


def simulate_words(circuit: Circuit, words: Mapping[str, int], rows: int, all_nets: bool = False) -> Dict[str, int]:
    """
    Evaluate ``rows`` input vectors at once. ``words[net]`` holds one bit per row for
    every primary input. Returns output words (or every net's word with ``all_nets``).
    """
    missing = [net for net in circuit.inputs if net not in words]
    if missing:
        raise MissingInputError(f"no value for input(s): {', '.join(missing)}")
    mask = (1 << rows) - 1
    values = {net: words[net] & mask for net in circuit.inputs}
    for gate in circuit.topo_order():
        values[gate.output] = evaluate_gate(gate.kind, [values[net] for net in gate.inputs], mask)
    if all_nets:
        return values
    return {net: values[net] for net in circuit.outputs}


def simulate(circuit: Circuit, x: Mapping[str, int]) -> Assignment:
    """Output values of ``circuit`` for the single input vector ``x`` (net name -> bit)."""
    words = {net: int(bool(x[net])) for net in circuit.inputs if net in x}
    return simulate_words(circuit, words, rows=1)


def exhaustive_patterns(names: Sequence[str]) -> Dict[str, int]:
    """
    Input words enumerating all 2^n rows. Row ``r`` read as an n-bit binary number,
    most significant bit first, gives the values of ``names`` in order.
    """
    count = len(names)
    total = 1 << count
    patterns = {}
    for index, net in enumerate(names):
        shift = count - 1 - index
        half = 1 << shift
        word = ((1 << half) - 1) << half
        size = half << 1
        while size < total:
            word |= word << size
            size <<= 1
        patterns[net] = word
    return patterns


def truth_table(circuit: Circuit) -> Dict[str, int]:
    """Exhaustive output words over every primary input combination."""
    return simulate_words(circuit, exhaustive_patterns(circuit.inputs), rows=1 << len(circuit.inputs))


def bits_to_assignment(names: Sequence[str], bits: Iterable[int]) -> Assignment:
    bits = [int(b) for b in bits]
    if len(bits) != len(names):
        raise MissingInputError(f"expected {len(names)} bits, got {len(bits)}")
    return dict(zip(names, bits))


def parse_bits(text: str) -> tuple:
    """'0110' -> (0, 1, 1, 0)"""
    text = text.strip()
    if any(ch not in '01' for ch in text):
        raise ValueError(f"not a binary vector: {text!r}")
    return tuple(int(ch) for ch in text)


def format_bits(bits: Iterable[int]) -> str:
    return ''.join(str(int(b)) for b in bits)
