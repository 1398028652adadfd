"""
Brute-force key-space oracle and key verification.

All keys are simulated at once: with |K| key inputs, row j of every simulation
word stands for the key whose bit i is ``(j >> (|K| - 1 - i)) & 1``, so row order
is KeyVector integer order.
"""
import logging
import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from locklab.conf import lab_setting
from locking.services.apply_key import apply_key
from locking.services.keys import KeyVector, LockedCircuit
from netlist.services.circuit import Circuit
from netlist.services.simulation import exhaustive_patterns, simulate_words
from .oracle import IoPair, Oracle
from ..exceptions import AttackError, KeyspaceTooLargeError

logger = logging.getLogger(__name__)


def _check_width(locked: LockedCircuit, limit: Optional[int]) -> int:
    limit = lab_setting('KEYSPACE_LIMIT') if limit is None else limit
    if locked.key_width > limit:
        raise KeyspaceTooLargeError(
            f"{locked.key_width}-bit key space exceeds the enumeration bound of {limit} bits"
        )
    return 1 << locked.key_width


def _constraint_mask(locked: LockedCircuit, constraints: Optional[Mapping[int, int]], rows: int) -> int:
    mask = (1 << rows) - 1
    if not constraints:
        return mask
    patterns = exhaustive_patterns(locked.key_inputs)
    for index, bit in constraints.items():
        if index < 0 or index >= locked.key_width:
            raise AttackError(f"constraint on key index {index} outside 0..{locked.key_width - 1}")
        word = patterns[locked.key_inputs[index]]
        mask &= word if bit else ~word
    return mask & ((1 << rows) - 1)


def consistent_mask(locked: LockedCircuit, pair: IoPair, rows: int) -> int:
    """Rows (keys) on which ``locked`` reproduces the pair's response."""
    mask = (1 << rows) - 1
    words = exhaustive_patterns(locked.key_inputs)
    for net, bit in zip(locked.data_inputs, pair.dip):
        words[net] = mask if bit else 0
    outputs = simulate_words(locked.circuit, words, rows)
    agree = mask
    for net, bit in zip(locked.outputs, pair.response):
        agree &= ~(outputs[net] ^ (mask if bit else 0))
    return agree & mask


def _keys_of(mask: int, width: int) -> List[KeyVector]:
    keys = []
    row = 0
    while mask:
        if mask & 1:
            keys.append(KeyVector.from_int(row, width))
        mask >>= 1
        row += 1
    return keys


def _mask_of(keys: Iterable[KeyVector]) -> int:
    mask = 0
    for key in keys:
        mask |= 1 << key.to_int()
    return mask


def survivor_mask(locked: LockedCircuit, pairs: Sequence[IoPair],
                  constraints: Optional[Mapping[int, int]] = None, limit: Optional[int] = None) -> int:
    rows = _check_width(locked, limit)
    mask = _constraint_mask(locked, constraints, rows)
    for pair in pairs:
        mask &= consistent_mask(locked, pair, rows)
    return mask


def remaining_keys(locked: LockedCircuit, pairs: Sequence[IoPair],
                   constraints: Optional[Mapping[int, int]] = None, limit: Optional[int] = None) -> List[KeyVector]:
    """Every key under which ``locked`` reproduces all ``pairs``, in ascending order."""
    return _keys_of(survivor_mask(locked, pairs, constraints, limit), locked.key_width)


def dip_elimination_count(locked: LockedCircuit, pair: IoPair, surviving: Iterable[KeyVector],
                          limit: Optional[int] = None) -> int:
    """How many of ``surviving`` the pair rules out."""
    rows = _check_width(locked, limit)
    before = _mask_of(surviving)
    return bin(before & ~consistent_mask(locked, pair, rows)).count('1')


@dataclass(frozen=True)
class PruningProfile:
    """Surviving-key counts: before any pair, then after each pair in turn."""
    survivors: Tuple[int, ...]
    eliminated: Tuple[int, ...]
    final_keys: Tuple[KeyVector, ...]


def pruning_profile(locked: LockedCircuit, pairs: Sequence[IoPair],
                    constraints: Optional[Mapping[int, int]] = None, limit: Optional[int] = None) -> PruningProfile:
    rows = _check_width(locked, limit)
    mask = _constraint_mask(locked, constraints, rows)
    survivors = [bin(mask).count('1')]
    eliminated = []
    for pair in pairs:
        after = mask & consistent_mask(locked, pair, rows)
        eliminated.append(survivors[-1] - bin(after).count('1'))
        survivors.append(bin(after).count('1'))
        mask = after
    return PruningProfile(tuple(survivors), tuple(eliminated), tuple(_keys_of(mask, locked.key_width)))


@dataclass(frozen=True)
class EliminationMatrix:
    """``rows[key]`` holds, per pair, whether the key survives that pair on its own."""
    pairs: Tuple[IoPair, ...]
    rows: Dict[str, Tuple[bool, ...]]

    def survivors(self) -> List[str]:
        return [key for key, marks in self.rows.items() if all(marks)]


def elimination_matrix(locked: LockedCircuit, pairs: Sequence[IoPair], limit: Optional[int] = None) -> EliminationMatrix:
    rows = _check_width(locked, limit)
    masks = [consistent_mask(locked, pair, rows) for pair in pairs]
    table = {}
    for row in range(rows):
        key = KeyVector.from_int(row, locked.key_width)
        table[str(key)] = tuple(bool((mask >> row) & 1) for mask in masks)
    return EliminationMatrix(tuple(pairs), table)


def verify_key(
    locked: LockedCircuit,
    key: KeyVector,
    oracle: Circuit,
    exhaustive_limit: Optional[int] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> bool:
    """
    Whether ``key`` makes ``locked`` equivalent to ``oracle``: exhaustively up to
    ``exhaustive_limit`` data inputs, otherwise on the all-zeros and all-ones
    vectors plus ``samples`` seeded random vectors.
    """
    exhaustive_limit = lab_setting('EXHAUSTIVE_VERIFY_LIMIT') if exhaustive_limit is None else exhaustive_limit
    keyed = apply_key(locked, key)
    answers = Oracle.for_locked(locked, oracle)
    width = len(locked.data_inputs)
    if width <= exhaustive_limit:
        rows = 1 << width
        patterns = exhaustive_patterns(locked.data_inputs)
        words = [patterns[net] for net in locked.data_inputs]
    else:
        samples = lab_setting('VERIFY_SAMPLES') if samples is None else samples
        rng = random.Random(lab_setting('VERIFY_SEED') if seed is None else seed)
        rows = samples + 2
        # row 0 all zeros, row 1 all ones
        words = [(rng.getrandbits(samples) << 2) | 0b10 for _ in locked.data_inputs]
    got = simulate_words(keyed, dict(zip(locked.data_inputs, words)), rows)
    expected = answers.query_words(words, rows)
    for net, word in zip(locked.outputs, expected):
        if got[net] != word:
            logger.debug(f"key {key} mismatches {oracle.name} on output {net}")
            return False
    return True
