"""
Point-function locks: AntiSAT, CAS-Lock and SFLL-HD (TTLock when h = 0).

Each construction taps data inputs of a single-output circuit, builds its blocks
from explicit gate trees and XORs the block output into the original output.
"""
import logging
from typing import Iterable, List, Optional, Sequence

from netlist.services.circuit import Circuit, GateKind
from .builder import GateBuilder, gate_chain
from .keys import KeyVector, LockedCircuit, LockScheme, key_input_prefix
from ..exceptions import (
    BlockWidthError,
    HammingDistanceError,
    KeyWidthError,
    LockingError,
    MultiOutputError,
    OrPositionError,
)

logger = logging.getLogger(__name__)


def _single_output(circuit: Circuit) -> str:
    if len(circuit.outputs) != 1:
        raise MultiOutputError(f"{circuit.name} has {len(circuit.outputs)} outputs; a single-output circuit is required")
    output = circuit.outputs[0]
    if circuit.is_input(output):
        raise LockingError(f"output {output} is a primary input and cannot be locked")
    return output


def _taps(circuit: Circuit, r: int, taps: Optional[Sequence[str]]) -> List[str]:
    if r < 1:
        raise BlockWidthError("block width must be at least 1")
    if taps is None:
        if r > len(circuit.inputs):
            raise BlockWidthError(f"block width {r} exceeds the {len(circuit.inputs)} data inputs")
        return list(circuit.inputs[:r])
    taps = list(taps)
    if len(taps) != r:
        raise BlockWidthError(f"{len(taps)} tap inputs given for block width {r}")
    unknown = [net for net in taps if not circuit.is_input(net)]
    if unknown:
        raise BlockWidthError(f"tap nets are not data inputs: {unknown}")
    return taps


def _block_value(value, r: int) -> KeyVector:
    if isinstance(value, str):
        value = KeyVector.from_string(value)
    elif not isinstance(value, KeyVector):
        value = KeyVector(tuple(value))
    if value.width != r:
        raise KeyWidthError(f"block key value has {value.width} bits, block width is {r}")
    return value


def _xor_taps(builder: GateBuilder, taps: Sequence[str], keys: Sequence[str], base: str) -> List[str]:
    return [builder.add(f"{base}_x{i}", GateKind.XOR, (x, k)) for i, (x, k) in enumerate(zip(taps, keys))]


def _add_keys(builder: GateBuilder, start: int, count: int, prefix: Optional[str]) -> List[str]:
    prefix = key_input_prefix(prefix)
    return [builder.add_input(f"{prefix}{start + i}") for i in range(count)]


def _corrupt_output(builder: GateBuilder, output: str, flips: Iterable[str]) -> None:
    original = builder.detach(output)
    builder.drive(output, GateKind.XOR, (original, *flips))


def lock_antisat(
    circuit: Circuit,
    r: int,
    value,
    taps: Optional[Sequence[str]] = None,
    prefix: Optional[str] = None,
) -> LockedCircuit:
    """
    g = AND(x_i ^ k_i) over K_g, gbar = NAND(x_i ^ k'_i) over K_gbar, and AND(g, gbar)
    flips the output. Keys are ordered K_g then K_gbar; any key with K_g = K_gbar is
    correct.
    """
    output = _single_output(circuit)
    taps = _taps(circuit, r, taps)
    value = _block_value(value, r)

    builder = GateBuilder(circuit)
    k_g = _add_keys(builder, 0, r, prefix)
    k_gbar = _add_keys(builder, r, r, prefix)
    g = gate_chain(builder, 'as_g', GateKind.AND, _xor_taps(builder, taps, k_g, 'as_g'))
    gbar = gate_chain(builder, 'as_gbar', GateKind.NAND, _xor_taps(builder, taps, k_gbar, 'as_gbar'))
    block = builder.add('as_out', GateKind.AND, (g, gbar))
    _corrupt_output(builder, output, (block,))

    locked = LockedCircuit(
        circuit=builder.build(f"{circuit.name}_antisat"),
        data_inputs=circuit.inputs,
        key_inputs=tuple(k_g + k_gbar),
        correct_key=value + value,
        scheme=LockScheme.ANTISAT,
        params={'r': r, 'taps': taps},
        key_blocks={'g': tuple(range(r)), 'gbar': tuple(range(r, 2 * r))},
    )
    logger.info(f"AntiSAT r={r} on {circuit.name}: {locked.key_width} key bits")
    return locked


def default_or_positions(r: int) -> tuple:
    """One OR gate, at the last link of the chain."""
    return (r - 1,) if r > 1 else ()


def _cascade(builder: GateBuilder, base: str, operands: Sequence[str], or_positions, invert_last: bool) -> str:
    """
    c_0 = t_0; c_j = OR(c_{j-1}, t_j) at OR positions, AND otherwise. With
    ``invert_last`` the final link is NAND/NOR.
    """
    if len(operands) == 1:
        return builder.add(base, GateKind.NOT if invert_last else GateKind.BUF, operands)
    current = operands[0]
    last = len(operands) - 1
    for j in range(1, len(operands)):
        kind = GateKind.OR if j in or_positions else GateKind.AND
        if j == last and invert_last:
            kind = kind.inverted
        current = builder.add(f"{base}_c{j}", kind, (current, operands[j]))
    return current


def lock_caslock(
    circuit: Circuit,
    r: int,
    value,
    or_positions: Optional[Iterable[int]] = None,
    taps: Optional[Sequence[str]] = None,
    prefix: Optional[str] = None,
) -> LockedCircuit:
    """
    Cascaded AND/OR chains: g over x_i ^ k_i, gbar the same chain over x_i ^ k'_i with
    its last link inverted, so gbar = NOT g whenever K_g = K_gbar. With no OR
    position this is AntiSAT with chained ANDs.
    """
    output = _single_output(circuit)
    taps = _taps(circuit, r, taps)
    value = _block_value(value, r)
    positions = default_or_positions(r) if or_positions is None else tuple(sorted(set(or_positions)))
    invalid = [p for p in positions if p < 1 or p > r - 1]
    if invalid:
        raise OrPositionError(f"OR positions must lie in 1..{r - 1}, got {invalid}")

    builder = GateBuilder(circuit)
    k_g = _add_keys(builder, 0, r, prefix)
    k_gbar = _add_keys(builder, r, r, prefix)
    g = _cascade(builder, 'cas_g', _xor_taps(builder, taps, k_g, 'cas_g'), positions, invert_last=False)
    gbar = _cascade(builder, 'cas_gbar', _xor_taps(builder, taps, k_gbar, 'cas_gbar'), positions, invert_last=True)
    block = builder.add('cas_out', GateKind.AND, (g, gbar))
    _corrupt_output(builder, output, (block,))

    locked = LockedCircuit(
        circuit=builder.build(f"{circuit.name}_caslock"),
        data_inputs=circuit.inputs,
        key_inputs=tuple(k_g + k_gbar),
        correct_key=value + value,
        scheme=LockScheme.CASLOCK,
        params={'r': r, 'taps': taps, 'or_positions': list(positions)},
        key_blocks={'g': tuple(range(r)), 'gbar': tuple(range(r, 2 * r))},
    )
    logger.info(f"CAS-Lock r={r} OR at {list(positions)} on {circuit.name}: {locked.key_width} key bits")
    return locked


def _hamming_equals(builder: GateBuilder, base: str, diffs: Sequence[str], h: int) -> str:
    """
    Net that is 1 iff exactly ``h`` of ``diffs`` are 1. Row i of the table holds,
    for each weight j <= h, the net "exactly j of the first i+1 diffs are 1";
    entries that are constantly 0 are absent.
    """
    inverted = {}

    def negated(net):
        if net not in inverted:
            inverted[net] = builder.add(f"{base}_n{len(inverted)}", GateKind.NOT, (net,))
        return inverted[net]

    row = {0: negated(diffs[0])}
    if h >= 1:
        row[1] = diffs[0]
    for i in range(1, len(diffs)):
        d = diffs[i]
        nxt = {}
        for j in range(0, min(h, i + 1) + 1):
            terms = []
            if j in row:
                terms.append(builder.add(f"{base}_e{i}_{j}a", GateKind.AND, (row[j], negated(d))))
            if j - 1 in row:
                terms.append(builder.add(f"{base}_e{i}_{j}b", GateKind.AND, (row[j - 1], d)))
            if len(terms) == 2:
                nxt[j] = builder.add(f"{base}_e{i}_{j}", GateKind.OR, terms)
            elif terms:
                nxt[j] = terms[0]
        row = nxt
    return row[h]


def lock_sfll_hd(
    circuit: Circuit,
    pattern,
    h: int = 0,
    prefix: Optional[str] = None,
) -> LockedCircuit:
    """
    Stripped-functionality lock. The key-free perturb unit fires when HD(X, pattern)
    equals h and the restore unit when HD(X, K) equals h; both are XORed into the
    output, so K = pattern restores the original function. h = 0 is TTLock.
    """
    output = _single_output(circuit)
    width = len(circuit.inputs)
    pattern = _block_value(pattern, width)
    if h < 0 or h >= width:
        raise HammingDistanceError(f"Hamming distance {h} must lie in 0..{width - 1}")

    builder = GateBuilder(circuit)
    keys = _add_keys(builder, 0, width, prefix)
    strip_diffs = [
        builder.add(f"pu_d{i}", GateKind.NOT, (x,)) if bit else x
        for i, (x, bit) in enumerate(zip(circuit.inputs, pattern.bits))
    ]
    perturb = _hamming_equals(builder, 'pu', strip_diffs, h)
    restore_diffs = [builder.add(f"ru_d{i}", GateKind.XOR, (x, k)) for i, (x, k) in enumerate(zip(circuit.inputs, keys))]
    restore = _hamming_equals(builder, 'ru', restore_diffs, h)
    _corrupt_output(builder, output, (perturb, restore))

    scheme = LockScheme.TTLOCK if h == 0 else LockScheme.SFLL_HD
    locked = LockedCircuit(
        circuit=builder.build(f"{circuit.name}_{scheme.value.replace('-', '_')}"),
        data_inputs=circuit.inputs,
        key_inputs=tuple(keys),
        correct_key=pattern,
        scheme=scheme,
        params={'h': h, 'pattern': str(pattern), 'perturb': perturb, 'restore': restore},
        key_blocks={'restore': tuple(range(width))},
    )
    logger.info(f"{scheme.value} h={h} on {circuit.name}: {width} key bits")
    return locked
