"""
DIMACS CNF reading and writing.

Exported files carry one ``c net <copy> <name> <var>`` comment per encoded net
so a model can be traced back to the circuit.
"""
from pathlib import Path
from typing import List

from .encoder import CnfFormula
from ..exceptions import DimacsFormatError


def to_dimacs(formula: CnfFormula, comments: bool = True) -> str:
    lines: List[str] = []
    if comments:
        for copy, mapping in formula.net_maps.items():
            for net, var in sorted(mapping.items(), key=lambda item: item[1]):
                lines.append(f"c net {copy} {net} {var}")
    lines.append(f"p cnf {formula.num_vars} {len(formula.clauses)}")
    for clause in formula.clauses:
        lines.append(' '.join(str(lit) for lit in clause) + (' 0' if clause else '0'))
    return '\n'.join(lines) + '\n'


def write_dimacs(formula: CnfFormula, path) -> None:
    Path(path).write_text(to_dimacs(formula))


def parse_dimacs(text: str) -> CnfFormula:
    """
    Clauses may span lines; the header counts are checked against the body. Net
    comments are read back into the net maps.
    """
    formula = CnfFormula()
    header = None
    pending: List[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('%'):
            continue
        if line.startswith('c'):
            parts = line.split()
            if len(parts) == 5 and parts[1] == 'net':
                try:
                    formula.net_maps.setdefault(parts[2], {})[parts[3]] = int(parts[4])
                except ValueError:
                    raise DimacsFormatError(f"bad net comment {line!r}", number) from None
            continue
        if line.startswith('p'):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != 'cnf':
                raise DimacsFormatError(f"bad problem line {line!r}", number)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsFormatError(f"bad problem line {line!r}", number) from None
            continue
        if header is None:
            raise DimacsFormatError("clause before the problem line", number)
        try:
            literals = [int(token) for token in line.split()]
        except ValueError:
            raise DimacsFormatError(f"non-integer literal in {line!r}", number) from None
        for lit in literals:
            if lit == 0:
                formula.clauses.append(tuple(pending))
                pending = []
            else:
                if abs(lit) > header[0]:
                    raise DimacsFormatError(f"variable {abs(lit)} exceeds declared count {header[0]}", number)
                pending.append(lit)
    if header is None:
        raise DimacsFormatError("missing problem line")
    if pending:
        formula.clauses.append(tuple(pending))
    if len(formula.clauses) != header[1]:
        raise DimacsFormatError(f"header declares {header[1]} clauses, found {len(formula.clauses)}")
    formula.num_vars = header[0]
    return formula


def read_dimacs(path) -> CnfFormula:
    return parse_dimacs(Path(path).read_text())


def format_model(model: List[int]) -> str:
    """Solver-style ``v`` line for a model given as signed literals."""
    return 'v ' + ' '.join(str(lit) for lit in model) + ' 0'
