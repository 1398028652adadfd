# Netlist services
from .circuit import Circuit, Gate, GateKind, topo_order
from .bench import parse_bench, write_bench, read_bench_file
from .simulation import simulate, simulate_words, truth_table, exhaustive_patterns

__all__ = [
    'Circuit', 'Gate', 'GateKind', 'topo_order',
    'parse_bench', 'write_bench', 'read_bench_file',
    'simulate', 'simulate_words', 'truth_table', 'exhaustive_patterns',
]
