"""
Reference circuits shared by the test suites of every app.

SINGLE_CONE_* is the 4-input, 1-output example locked with three key gates
(K = 001); TWO_CONE_* adds a second output sharing the x2·x3 gate. The locked
versions are written out by hand with the gate and net names used in the worked
clause listings, so tests can pin literal numbering to them.
"""
import random
from typing import List, Optional, Sequence

from .exceptions import NetlistError
from .services.bench import parse_bench
from .services.circuit import Circuit, Gate, GateKind

SINGLE_CONE_ORIGINAL = """
# 4 inputs, 1 output
INPUT(x0)
INPUT(x1)
INPUT(x2)
INPUT(x3)
OUTPUT(y0)
G1 = AND(x0, x1)
G2 = AND(x2, x3)
y0 = AND(G1, G2)
"""

SINGLE_CONE_LOCKED = """
# locked with K = 001: XOR, XOR, XNOR
INPUT(x0)
INPUT(x1)
INPUT(x2)
INPUT(x3)
INPUT(keyinput0)
INPUT(keyinput1)
INPUT(keyinput2)
OUTPUT(y0)
G1 = AND(x0, x1)
G2 = AND(x2, x3)
Gk1 = XOR(keyinput1, G1)
Gk2 = XNOR(G2, keyinput2)
G0 = AND(Gk1, Gk2)
y0 = XOR(keyinput0, G0)
"""

# Literal numbering of the IO-pair copy of SINGLE_CONE_LOCKED
SINGLE_CONE_IO_NUMBERING = {
    'x0': 2, 'x1': 3, 'x2': 4, 'x3': 5,
    'keyinput0': 6, 'keyinput1': 7, 'keyinput2': 8,
    'y0': 9,
    'G0': 16, 'Gk1': 17, 'Gk2': 18, 'G1': 19, 'G2': 20,
}

TWO_CONE_ORIGINAL = """
INPUT(x0)
INPUT(x1)
INPUT(x2)
INPUT(x3)
INPUT(x4)
INPUT(x5)
OUTPUT(y0)
OUTPUT(y1)
G1 = AND(x0, x1)
G2 = AND(x2, x3)
G3 = AND(x4, x5)
y0 = AND(G1, G2)
y1 = OR(G2, G3)
"""

TWO_CONE_LOCKED = """
INPUT(x0)
INPUT(x1)
INPUT(x2)
INPUT(x3)
INPUT(x4)
INPUT(x5)
INPUT(keyinput0)
INPUT(keyinput1)
INPUT(keyinput2)
OUTPUT(y0)
OUTPUT(y1)
G1 = AND(x0, x1)
G2 = AND(x2, x3)
G3 = AND(x4, x5)
Gk1 = XOR(keyinput1, G1)
Gk2 = XNOR(G2, keyinput2)
G0 = AND(Gk1, Gk2)
y0 = XOR(keyinput0, G0)
y1 = OR(Gk2, G3)
"""

TWO_CONE_IO_NUMBERING = {
    'x0': 2, 'x1': 3, 'x2': 4, 'x3': 5, 'x4': 6, 'x5': 7,
    'keyinput0': 8, 'keyinput1': 9, 'keyinput2': 10,
    'y0': 11, 'y1': 12,
    'G0': 20, 'Gk1': 21, 'Gk2': 22, 'G1': 23, 'G2': 24, 'G3': 25,
}


def single_cone_original() -> Circuit:
    return parse_bench(SINGLE_CONE_ORIGINAL, name='single_cone')


def single_cone_locked() -> Circuit:
    return parse_bench(SINGLE_CONE_LOCKED, name='single_cone_locked')


def two_cone_original() -> Circuit:
    return parse_bench(TWO_CONE_ORIGINAL, name='two_cone')


def two_cone_locked() -> Circuit:
    return parse_bench(TWO_CONE_LOCKED, name='two_cone_locked')


def buffer_circuit(width: int = 1, name: str = 'buffers') -> Circuit:
    """``width`` inputs, each wired to its own output through a BUF."""
    inputs = [f"a{i}" for i in range(width)]
    gates = [Gate(f"y{i}", GateKind.BUF, (net,)) for i, net in enumerate(inputs)]
    return Circuit(name=name, inputs=tuple(inputs), outputs=tuple(g.output for g in gates), gates=tuple(gates))


def wrapped_cone(width: int, name: str = 'wrapped') -> Circuit:
    """A single-output cone over ``width`` inputs: a balanced AND/OR tree behind a BUF."""
    inputs = [f"x{i}" for i in range(width)]
    gates: List[Gate] = []
    layer = list(inputs)
    level = 0
    while len(layer) > 1:
        nxt = []
        kind = GateKind.AND if level % 2 == 0 else GateKind.OR
        for i in range(0, len(layer) - 1, 2):
            net = f"t{level}_{i // 2}"
            gates.append(Gate(net, kind, (layer[i], layer[i + 1])))
            nxt.append(net)
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
        level += 1
    gates.append(Gate('y', GateKind.BUF, (layer[0],)))
    return Circuit(name=name, inputs=tuple(inputs), outputs=('y',), gates=tuple(gates))


def random_circuit(
    seed: int,
    n_inputs: int,
    n_gates: int,
    n_outputs: int = 1,
    kinds: Optional[Sequence[GateKind]] = None,
    name: Optional[str] = None,
) -> Circuit:
    """
    Random combinational DAG. Gates draw their operands from earlier nets, so the
    gate list is already in a valid order; outputs are the last ``n_outputs`` gates.
    """
    rng = random.Random(seed)
    kinds = list(kinds or [GateKind.AND, GateKind.NAND, GateKind.OR, GateKind.NOR,
                           GateKind.XOR, GateKind.XNOR])
    inputs = [f"i{i}" for i in range(n_inputs)]
    nets = list(inputs)
    gates: List[Gate] = []
    for index in range(n_gates):
        output = f"n{index}"
        if rng.random() < 0.1:
            gate = Gate(output, rng.choice([GateKind.NOT, GateKind.BUF]), (rng.choice(nets),))
        else:
            arity = rng.choice([2, 2, 2, 3])
            recent = nets[-max(4, len(nets) // 2):]
            operands = rng.sample(recent, min(arity, len(recent)))
            if len(operands) < 2:
                operands = operands + [rng.choice(nets)]
            gate = Gate(output, rng.choice(kinds), tuple(operands))
        gates.append(gate)
        nets.append(output)
    outputs = tuple(g.output for g in gates[-n_outputs:])
    return Circuit(name=name or f"random_{seed}", inputs=tuple(inputs), outputs=outputs, gates=tuple(gates))


def array_multiplier(width: int, name: Optional[str] = None) -> Circuit:
    """
    Unsigned ``width`` x ``width`` multiplier: partial products reduced column by
    column with full and half adders. Inputs a0.., b0.. and outputs p0.. are least
    significant bit first.
    """
    if width < 2:
        raise NetlistError("multiplier width must be at least 2")
    a = [f"a{i}" for i in range(width)]
    b = [f"b{i}" for i in range(width)]
    gates: List[Gate] = []

    def add(net: str, kind: GateKind, operands) -> str:
        gates.append(Gate(net, kind, tuple(operands)))
        return net

    columns: List[List[str]] = [[] for _ in range(2 * width)]
    for i in range(width):
        for j in range(width):
            columns[i + j].append(add(f"pp{i}_{j}", GateKind.AND, (a[j], b[i])))

    adders = 0
    top = len(columns) - 1
    for weight, column in enumerate(columns):
        while len(column) > 1:
            tag = f"{weight}_{adders}"
            adders += 1
            if weight == top:
                # the product fits in 2 * width bits, so the top column never carries
                x, y = column.pop(0), column.pop(0)
                column.append(add(f"ha{tag}_s", GateKind.XOR, (x, y)))
                continue
            if len(column) >= 3:
                x, y, z = column.pop(0), column.pop(0), column.pop(0)
                t = add(f"fa{tag}_t", GateKind.XOR, (x, y))
                column.append(add(f"fa{tag}_s", GateKind.XOR, (t, z)))
                carry = add(f"fa{tag}_c", GateKind.OR, (
                    add(f"fa{tag}_g", GateKind.AND, (x, y)),
                    add(f"fa{tag}_p", GateKind.AND, (t, z)),
                ))
            else:
                x, y = column.pop(0), column.pop(0)
                column.append(add(f"ha{tag}_s", GateKind.XOR, (x, y)))
                carry = add(f"ha{tag}_c", GateKind.AND, (x, y))
            columns[weight + 1].append(carry)

    outputs = [add(f"p{weight}", GateKind.BUF, (column[0],)) for weight, column in enumerate(columns)]
    return Circuit(name=name or f"mult{width}x{width}", inputs=tuple(a + b), outputs=tuple(outputs), gates=tuple(gates))
