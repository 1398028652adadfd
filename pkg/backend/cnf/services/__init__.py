# CNF services
from .encoder import CnfFormula, VariableAllocator, encode_gate, encode_circuit, encode_under_io
from .simplify import simplify
from .miter import MiterEncoding, build_miter, learned_relation
from .dimacs import to_dimacs, parse_dimacs, read_dimacs, write_dimacs

__all__ = [
    'CnfFormula', 'VariableAllocator', 'encode_gate', 'encode_circuit', 'encode_under_io',
    'simplify',
    'MiterEncoding', 'build_miter', 'learned_relation',
    'to_dimacs', 'parse_dimacs', 'read_dimacs', 'write_dimacs',
]
