"""
ISCAS-85 ``.bench`` reader and writer.

Accepted dialect: ``INPUT(n)``, ``OUTPUT(n)``, ``n = KIND(a, b, ...)``, ``#`` comments,
arbitrary whitespace, case-insensitive keywords and gate kinds (``BUFF`` is read as BUF).
"""
import logging
import re
from pathlib import Path
from typing import List, Union

from .circuit import Circuit, Gate, GateKind
from ..exceptions import BenchSyntaxError, DuplicateDriverError, UnsupportedGateError

logger = logging.getLogger(__name__)

NET = r'[^\s(),=#]+'
_DECLARATION = re.compile(rf'^(INPUT|OUTPUT)\s*\(\s*({NET})\s*\)\s*$', re.IGNORECASE)
_ASSIGNMENT = re.compile(rf'^({NET})\s*=\s*([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*$')
_NET_ONLY = re.compile(rf'^{NET}$')

_KIND_ALIASES = {'BUFF': 'BUF', 'INV': 'NOT'}
_SEQUENTIAL = {'DFF', 'DFFR', 'DFFS', 'SDFF', 'LATCH', 'DLATCH'}


def _gate_kind(name: str, line: int, column: int) -> GateKind:
    upper = name.upper()
    upper = _KIND_ALIASES.get(upper, upper)
    if upper in _SEQUENTIAL:
        raise UnsupportedGateError(f"line {line}, column {column}: sequential unsupported ({name})")
    try:
        return GateKind(upper)
    except ValueError:
        raise UnsupportedGateError(f"line {line}, column {column}: unknown gate kind {name}") from None


def parse_bench(text: str, name: str = 'circuit') -> Circuit:
    """
    Parse bench source into a validated Circuit.

    Raises:
        BenchSyntaxError: malformed line (line/column reported)
        UnsupportedGateError: unknown or sequential gate kind
        NetlistError: duplicate driver, undriven output or cycle
    """
    inputs: List[str] = []
    outputs: List[str] = []
    gates: List[Gate] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        column = len(line) - len(line.lstrip()) + 1

        match = _DECLARATION.match(stripped)
        if match:
            keyword, net = match.group(1).upper(), match.group(2)
            (inputs if keyword == 'INPUT' else outputs).append(net)
            continue

        match = _ASSIGNMENT.match(stripped)
        if not match:
            raise BenchSyntaxError(f"cannot parse '{stripped}'", line_no, column)

        output, kind_name, arguments = match.groups()
        kind_column = column + match.start(2)
        kind = _gate_kind(kind_name, line_no, kind_column)
        operands = [arg.strip() for arg in arguments.split(',')]
        args_column = column + match.start(3)
        if any(not _NET_ONLY.match(arg) for arg in operands):
            raise BenchSyntaxError(f"malformed operand list '({arguments})'", line_no, args_column)
        gates.append(Gate(output, kind, tuple(operands)))

    if len(set(inputs)) != len(inputs):
        duplicates = sorted({net for net in inputs if inputs.count(net) > 1})
        raise DuplicateDriverError(f"input declared twice: {', '.join(duplicates)}")

    circuit = Circuit(name=name, inputs=tuple(inputs), outputs=tuple(outputs), gates=tuple(gates))
    logger.debug(f"Parsed bench {name}: {circuit.summary()}")
    return circuit


def read_bench_file(path: Union[str, Path]) -> Circuit:
    path = Path(path)
    return parse_bench(path.read_text(encoding='utf-8'), name=path.stem)


def write_bench(circuit: Circuit) -> str:
    """Serialize a circuit; parse_bench of the result is isomorphic to ``circuit``."""
    lines = [
        f"# {circuit.name}",
        f"# {len(circuit.inputs)} inputs, {len(circuit.outputs)} outputs, {len(circuit.gates)} gates",
        '',
    ]
    lines.extend(f"INPUT({net})" for net in circuit.inputs)
    lines.append('')
    lines.extend(f"OUTPUT({net})" for net in circuit.outputs)
    lines.append('')
    lines.extend(f"{gate.output} = {gate.kind.value}({', '.join(gate.inputs)})" for gate in circuit.gates)
    return '\n'.join(lines) + '\n'
