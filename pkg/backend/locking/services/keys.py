"""
Key vectors and the LockedCircuit container.
"""
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

from locklab.conf import lab_setting
from netlist.services.circuit import Circuit
from ..exceptions import KeyWidthError, LockingError


def key_input_prefix(prefix: Optional[str] = None) -> str:
    """``prefix`` itself, or LOCKLAB['KEY_INPUT_PREFIX'] when it is None."""
    if prefix is None:
        prefix = lab_setting('KEY_INPUT_PREFIX')
    if not prefix:
        raise LockingError("the key input prefix must be a non-empty string")
    return prefix


@dataclass(frozen=True)
class KeyVector:
    """Ordered key bits; bit i drives key input i."""
    bits: Tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise KeyWidthError(f"key bits must be 0 or 1: {self.bits}")
        object.__setattr__(self, 'bits', bits)

    @property
    def width(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, index):
        return self.bits[index]

    def __str__(self) -> str:
        return ''.join(str(b) for b in self.bits)

    def to_int(self) -> int:
        """Bit 0 is the most significant bit, so integer order is string order."""
        value = 0
        for bit in self.bits:
            value = (value << 1) | bit
        return value

    def prefix(self, width: int) -> 'KeyVector':
        return KeyVector(self.bits[:width])

    def __add__(self, other: 'KeyVector') -> 'KeyVector':
        return KeyVector(self.bits + tuple(other))

    @classmethod
    def from_int(cls, value: int, width: int) -> 'KeyVector':
        if value < 0 or value >= (1 << width) and width > 0 or (width == 0 and value != 0):
            raise KeyWidthError(f"{value} does not fit in {width} key bits")
        return cls(tuple((value >> (width - 1 - i)) & 1 for i in range(width)))

    @classmethod
    def from_string(cls, text: str, width: Optional[int] = None) -> 'KeyVector':
        """Binary ('0110') or hexadecimal ('0x6', needs ``width``) notation."""
        text = text.strip().replace('_', '')
        if text.lower().startswith('0x'):
            if width is None:
                width = 4 * (len(text) - 2)
            return cls.from_int(int(text, 16), width)
        if any(ch not in '01' for ch in text):
            raise KeyWidthError(f"not a binary key: {text!r}")
        key = cls(tuple(int(ch) for ch in text))
        if width is not None and key.width != width:
            raise KeyWidthError(f"key has {key.width} bits, expected {width}")
        return key

    @classmethod
    def random(cls, width: int, rng: random.Random) -> 'KeyVector':
        return cls(tuple(rng.randint(0, 1) for _ in range(width)))

    @classmethod
    def empty(cls) -> 'KeyVector':
        return cls(())


class LockScheme(str, Enum):
    XOR_INSERTION = 'xor'
    ANTISAT = 'antisat'
    CASLOCK = 'caslock'
    TTLOCK = 'ttlock'
    SFLL_HD = 'sfll-hd'
    UNKNOWN = 'unknown'


@dataclass(frozen=True)
class LockedCircuit:
    """
    A circuit whose inputs are split into data inputs X and key inputs K, with the
    recorded correct key (when known) and scheme metadata. ``key_blocks`` maps block
    names (``g``/``gbar`` for the complementary point-function blocks, ``restore``
    for SFLL) to key indices.
    """
    circuit: Circuit
    data_inputs: Tuple[str, ...]
    key_inputs: Tuple[str, ...]
    correct_key: Optional[KeyVector] = None
    scheme: LockScheme = LockScheme.UNKNOWN
    params: Dict[str, object] = field(default_factory=dict, compare=False)
    key_blocks: Dict[str, Tuple[int, ...]] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'data_inputs', tuple(self.data_inputs))
        object.__setattr__(self, 'key_inputs', tuple(self.key_inputs))
        data, keys = set(self.data_inputs), set(self.key_inputs)
        if data & keys:
            raise LockingError(f"inputs used as both data and key: {sorted(data & keys)}")
        if data | keys != set(self.circuit.inputs) or len(self.data_inputs) + len(self.key_inputs) != len(self.circuit.inputs):
            raise LockingError("data and key inputs must partition the circuit inputs")
        if self.correct_key is not None and self.correct_key.width != len(self.key_inputs):
            raise KeyWidthError(
                f"correct key has {self.correct_key.width} bits for {len(self.key_inputs)} key inputs"
            )
        for block, indices in self.key_blocks.items():
            if any(i < 0 or i >= len(self.key_inputs) for i in indices):
                raise LockingError(f"key block {block} references a key index out of range")

    @property
    def key_width(self) -> int:
        return len(self.key_inputs)

    @property
    def outputs(self) -> Tuple[str, ...]:
        return self.circuit.outputs

    def check_key(self, key: KeyVector) -> KeyVector:
        if key.width != self.key_width:
            raise KeyWidthError(f"key has {key.width} bits, circuit expects {self.key_width}")
        return key

    def key_assignment(self, key: KeyVector) -> Dict[str, int]:
        self.check_key(key)
        return dict(zip(self.key_inputs, key.bits))

    def block_constraints(self, block: str, bits: Sequence[int]) -> Dict[int, int]:
        """Index -> bit map fixing every key bit of ``block`` (e.g. K_g) to ``bits``."""
        try:
            indices = self.key_blocks[block]
        except KeyError:
            raise LockingError(f"{self.scheme.value} lock has no key block {block!r}") from None
        bits = tuple(int(b) for b in bits)
        if len(bits) != len(indices):
            raise KeyWidthError(f"block {block} has {len(indices)} bits, got {len(bits)}")
        return dict(zip(indices, bits))

    @classmethod
    def from_circuit(
        cls,
        circuit: Circuit,
        key_inputs: Optional[Sequence[str]] = None,
        prefix: Optional[str] = None,
        correct_key: Optional[KeyVector] = None,
        scheme: LockScheme = LockScheme.UNKNOWN,
        params: Optional[Mapping[str, object]] = None,
        key_blocks: Optional[Mapping[str, Sequence[int]]] = None,
    ) -> 'LockedCircuit':
        """
        Partition a parsed circuit. Key inputs are the given names, or every input
        whose name starts with ``prefix`` (LOCKLAB['KEY_INPUT_PREFIX'] by default),
        ordered by trailing index when numbered.
        """
        if key_inputs is None:
            prefix = key_input_prefix(prefix)
            key_inputs = [net for net in circuit.inputs if net.startswith(prefix)]
            suffixes = [net[len(prefix):] for net in key_inputs]
            if all(s.isdigit() for s in suffixes):
                key_inputs = [net for _, net in sorted(zip((int(s) for s in suffixes), key_inputs))]
        keys = set(key_inputs)
        unknown = keys - set(circuit.inputs)
        if unknown:
            raise LockingError(f"key inputs not in circuit: {sorted(unknown)}")
        return cls(
            circuit=circuit,
            data_inputs=tuple(net for net in circuit.inputs if net not in keys),
            key_inputs=tuple(key_inputs),
            correct_key=correct_key,
            scheme=scheme,
            params=dict(params or {}),
            key_blocks={name: tuple(indices) for name, indices in (key_blocks or {}).items()},
        )

    @classmethod
    def unlocked(cls, circuit: Circuit) -> 'LockedCircuit':
        """A zero-key view of an ordinary circuit."""
        return cls(circuit=circuit, data_inputs=circuit.inputs, key_inputs=(),
                   correct_key=KeyVector.empty(), scheme=LockScheme.XOR_INSERTION)
