"""
Oracle access: the unlocked circuit answering queries on the locked circuit's
data inputs.
"""
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from netlist.services.circuit import Circuit
from netlist.services.simulation import simulate_words
from ..exceptions import OracleMismatchError

Bits = Tuple[int, ...]


@dataclass(frozen=True)
class IoPair:
    """A DIP and the oracle's response, both ordered like the locked circuit's data inputs and outputs."""
    dip: Bits
    response: Bits

    def __post_init__(self):
        object.__setattr__(self, 'dip', tuple(int(b) for b in self.dip))
        object.__setattr__(self, 'response', tuple(int(b) for b in self.response))

    @property
    def x(self) -> Bits:
        return self.dip

    @property
    def y(self) -> Bits:
        return self.response

    def __str__(self) -> str:
        return '{' + ''.join(map(str, self.dip)) + ';' + ''.join(map(str, self.response)) + '}'

    @classmethod
    def from_strings(cls, dip: str, response: str) -> 'IoPair':
        return cls(tuple(int(ch) for ch in dip), tuple(int(ch) for ch in response))


def _align(names: Sequence[str], available: Sequence[str], what: str) -> List[str]:
    """Match by name when the name sets agree, by position otherwise."""
    if set(names) == set(available):
        return list(names)
    if len(names) != len(available):
        raise OracleMismatchError(f"oracle has {len(available)} {what}, locked circuit has {len(names)}")
    return list(available)


@dataclass
class Oracle:
    circuit: Circuit
    inputs: List[str]
    outputs: List[str]
    queries: int = field(default=0, compare=False)

    @classmethod
    def for_locked(cls, locked, circuit: Circuit) -> 'Oracle':
        return cls(
            circuit=circuit,
            inputs=_align(locked.data_inputs, circuit.inputs, 'inputs'),
            outputs=_align(locked.outputs, circuit.outputs, 'outputs'),
        )

    def query_words(self, words: Sequence[int], rows: int) -> List[int]:
        """Output words for input words given in data-input order."""
        values = simulate_words(self.circuit, dict(zip(self.inputs, words)), rows)
        self.queries += rows
        return [values[net] for net in self.outputs]

    def query(self, x: Sequence[int]) -> Bits:
        return tuple(self.query_words([int(b) for b in x], 1))

    def pair(self, x: Sequence[int]) -> IoPair:
        return IoPair(tuple(x), self.query(x))
