"""
Oracle-guided SAT attack.

The miter holds two copies of the locked circuit over shared data inputs and
separate key variables K_A and K_B; its difference clause is guarded by an
activation literal. Each iteration solves the miter with the activation literal
and any key constraints assumed, reads the distinguishing input from the model,
asks the oracle, and adds the circuit constrained by the resulting IO pair once
over K_A and once over K_B. When no distinguishing input is left, the key is
read from K_A after solving the accumulated constraints alone.
"""
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from cnf.exceptions import UnsatisfiableUnderAssignment
from cnf.services.encoder import encode_under_io
from cnf.services.miter import build_miter
from locklab.conf import lab_setting
from locking.services.keys import KeyVector, LockedCircuit
from netlist.services.circuit import Circuit
from solver.services.backends import get_solver
from .keyspace import verify_key
from .oracle import IoPair, Oracle
from ..exceptions import (
    AttackBudgetExceeded,
    AttackError,
    ConstraintInconsistencyError,
    IterationCapExceeded,
    NotADistinguishingInputError,
    ReplayIncompleteError,
)

logger = logging.getLogger(__name__)

Bits = Tuple[int, ...]


@dataclass
class AttackOptions:
    constraints: Dict[int, int] = field(default_factory=dict)
    replay: List[Bits] = field(default_factory=list)
    replay_only: bool = False
    preload: bool = False
    max_iterations: Optional[int] = None
    time_budget: Optional[float] = None
    verify: bool = True
    solver_backend: Optional[str] = None
    substitute: bool = True

    @classmethod
    def from_settings(cls, **overrides) -> 'AttackOptions':
        """Options with the iteration cap and time budget taken from the LOCKLAB settings."""
        values = {
            'max_iterations': lab_setting('ATTACK_MAX_ITERATIONS'),
            'time_budget': lab_setting('ATTACK_TIME_BUDGET'),
        }
        values.update({name: value for name, value in overrides.items() if value is not None})
        return cls(**values)

    def validate(self, locked: LockedCircuit) -> None:
        for index, bit in self.constraints.items():
            if index < 0 or index >= locked.key_width:
                raise AttackError(f"constraint on key index {index} outside 0..{locked.key_width - 1}")
            if bit not in (0, 1):
                raise AttackError(f"constraint value for key index {index} must be 0 or 1")
        width = len(locked.data_inputs)
        for dip in self.replay:
            if len(dip) != width:
                raise AttackError(f"replay vector {''.join(map(str, dip))} has {len(dip)} bits, expected {width}")


@dataclass
class IterationRecord:
    index: int
    dip: Bits
    response: Bits
    solve_seconds: float
    clauses_added: int
    replayed: bool = False

    @property
    def pair(self) -> IoPair:
        return IoPair(self.dip, self.response)


@dataclass
class AttackTrace:
    circuit: str
    key_width: int
    iterations: List[IterationRecord] = field(default_factory=list)
    preloaded: List[IoPair] = field(default_factory=list)
    unsat_seconds: float = 0.0
    total_seconds: float = 0.0
    key: Optional[KeyVector] = None
    verified: Optional[bool] = None
    constraints: Dict[int, int] = field(default_factory=dict)
    complete: bool = False

    @property
    def total_iterations(self) -> int:
        """TI: every SAT iteration plus the final UNSAT one."""
        return len(self.iterations) + (1 if self.complete else 0)

    @property
    def io_pairs(self) -> int:
        """|P|: IO pairs added to the formula, preloads included."""
        return len(self.iterations) + len(self.preloaded)

    @property
    def io_pairs_seconds(self) -> float:
        return sum(record.solve_seconds for record in self.iterations)

    @property
    def average_seconds(self) -> float:
        return self.io_pairs_seconds / len(self.iterations) if self.iterations else 0.0

    @property
    def pairs(self) -> List[IoPair]:
        return list(self.preloaded) + [record.pair for record in self.iterations]

    def as_dict(self) -> dict:
        return {
            'circuit': self.circuit,
            'key_width': self.key_width,
            'key': str(self.key) if self.key is not None else None,
            'verified': self.verified,
            'complete': self.complete,
            'constraints': {str(index): bit for index, bit in sorted(self.constraints.items())},
            'io_pairs': self.io_pairs,
            'total_iterations': self.total_iterations,
            'total_seconds': self.total_seconds,
            'io_pairs_seconds': self.io_pairs_seconds,
            'average_seconds': self.average_seconds,
            'unsat_seconds': self.unsat_seconds,
            'preloaded': [{'dip': _bits(p.dip), 'response': _bits(p.response)} for p in self.preloaded],
            'iterations': [
                {**asdict(record), 'dip': _bits(record.dip), 'response': _bits(record.response)}
                for record in self.iterations
            ],
        }


def _bits(bits: Sequence[int]) -> str:
    return ''.join(str(b) for b in bits)


class SatAttack:
    """One attack run; owns its solver and miter."""

    def __init__(self, locked: LockedCircuit, oracle: Circuit, options: AttackOptions):
        options.validate(locked)
        self.locked = locked
        self.oracle_circuit = oracle
        self.oracle = Oracle.for_locked(locked, oracle)
        self.options = options
        self.solver = get_solver(options.solver_backend)
        self.miter = build_miter(locked, guarded=True)
        self.solver.add_clauses(self.miter.formula.clauses)
        self.solver.ensure_vars(self.miter.allocator.count)

        key_a, key_b = self.miter.key_a_vars, self.miter.key_b_vars
        self.constraints_a = [key_a[i] if bit else -key_a[i] for i, bit in sorted(options.constraints.items())]
        self.constraints_b = [key_b[i] if bit else -key_b[i] for i, bit in sorted(options.constraints.items())]
        self.find_dip = [self.miter.activation] + self.constraints_a + self.constraints_b
        self.trace = AttackTrace(
            circuit=locked.circuit.name,
            key_width=locked.key_width,
            constraints=dict(options.constraints),
        )
        self._started = None

    # --- formula growth -----------------------------------------------------------

    def add_pair(self, pair: IoPair) -> int:
        """Constrain both key copies with ``pair``; returns the number of clauses added."""
        added = 0
        for key_vars in (self.miter.key_a, self.miter.key_b):
            try:
                copy = encode_under_io(
                    self.locked, pair, self.miter.allocator, key_vars, substitute=self.options.substitute
                )
                clauses = copy.clauses
            except UnsatisfiableUnderAssignment:
                logger.warning(f"no key reproduces oracle response {pair}; the formula is now unsatisfiable")
                clauses = [()]
            self.solver.add_clauses(clauses)
            added += len(clauses)
        self.solver.ensure_vars(self.miter.allocator.count)
        return added

    def _input_literals(self, dip: Bits) -> List[int]:
        return [var if bit else -var for var, bit in zip(self.miter.input_vars, dip)]

    # --- loop -------------------------------------------------------------------------

    def _check_budget(self) -> None:
        budget = self.options.time_budget
        if budget is not None and time.perf_counter() - self._started > budget:
            self.trace.total_seconds = time.perf_counter() - self._started
            raise AttackBudgetExceeded(
                f"time budget of {budget}s exhausted after {len(self.trace.iterations)} iterations", self.trace
            )

    def _solve(self, assumptions: Sequence[int]) -> Tuple[bool, float]:
        started = time.perf_counter()
        status = self.solver.solve(assumptions)
        return status, time.perf_counter() - started

    def _record(self, dip: Bits, seconds: float, replayed: bool) -> None:
        cap = self.options.max_iterations
        if cap is not None and len(self.trace.iterations) >= cap:
            self.trace.total_seconds = time.perf_counter() - self._started
            raise IterationCapExceeded(f"still finding DIPs after {cap} iterations", self.trace)
        pair = self.oracle.pair(dip)
        added = self.add_pair(pair)
        record = IterationRecord(
            index=len(self.trace.iterations) + 1,
            dip=pair.dip,
            response=pair.response,
            solve_seconds=seconds,
            clauses_added=added,
            replayed=replayed,
        )
        self.trace.iterations.append(record)
        logger.info(
            f"iteration {record.index}: DIP {_bits(record.dip)} -> {_bits(record.response)}, "
            f"{seconds:.4f}s, {added} clauses"
        )

    def run(self) -> AttackTrace:
        logger.info(
            f"attacking {self.locked.circuit.name}: {len(self.locked.data_inputs)} data inputs, "
            f"{self.locked.key_width} key bits, {len(self.options.constraints)} constrained"
        )
        self._started = time.perf_counter()
        width = len(self.locked.data_inputs)
        if self.options.preload:
            for bit in (0, 1):
                pair = self.oracle.pair((bit,) * width)
                self.add_pair(pair)
                self.trace.preloaded.append(pair)

        replay = list(self.options.replay)
        while True:
            self._check_budget()
            if replay:
                dip = tuple(replay.pop(0))
                status, seconds = self._solve(self.find_dip + self._input_literals(dip))
                if not status:
                    raise NotADistinguishingInputError(
                        f"replayed vector {_bits(dip)} distinguishes no pair of remaining keys", self.trace
                    )
                self._record(dip, seconds, replayed=True)
                continue
            status, seconds = self._solve(self.find_dip)
            if not status:
                self.trace.unsat_seconds = seconds
                break
            if self.options.replay_only:
                raise ReplayIncompleteError(
                    f"distinguishing inputs remain after {len(self.options.replay)} replayed vectors", self.trace
                )
            dip = tuple(self.solver.model_value(var) for var in self.miter.input_vars)
            self._record(dip, seconds, replayed=False)

        self.trace.complete = True
        self.trace.key = self._extract_key()
        self.trace.total_seconds = time.perf_counter() - self._started
        if self.options.verify:
            self._verify()
        logger.info(
            f"recovered key {self.trace.key} after TI={self.trace.total_iterations}, "
            f"|P|={self.trace.io_pairs}, {self.trace.total_seconds:.4f}s"
        )
        return self.trace

    def _extract_key(self) -> KeyVector:
        if not self.solver.solve(self.constraints_a):
            if self.options.constraints:
                raise ConstraintInconsistencyError(
                    "no key satisfies both the key constraints and the oracle responses", self.trace
                )
            raise AttackError("no key reproduces the oracle responses", self.trace)
        return KeyVector(tuple(self.solver.model_value(var) for var in self.miter.key_a_vars))

    def _verify(self) -> None:
        self.trace.verified = verify_key(self.locked, self.trace.key, self.oracle_circuit)
        if self.trace.verified:
            return
        if self.options.constraints:
            raise ConstraintInconsistencyError(
                f"the key constraints exclude every functionally correct key (best candidate {self.trace.key})",
                self.trace,
            )
        logger.warning(f"recovered key {self.trace.key} fails verification against {self.oracle_circuit.name}")


def sat_attack(locked: LockedCircuit, oracle: Circuit, options: Optional[AttackOptions] = None) -> AttackTrace:
    return SatAttack(locked, oracle, options or AttackOptions.from_settings()).run()


def parse_constraints(text: str, locked: Optional[LockedCircuit] = None) -> Dict[int, int]:
    """
    ``k3=1,k4=0`` (or key input names, ``keyinput3=1``) to an index -> bit map.
    """
    constraints: Dict[int, int] = {}
    if not text:
        return constraints
    names = {net: i for i, net in enumerate(locked.key_inputs)} if locked is not None else {}
    for item in text.split(','):
        item = item.strip()
        if not item:
            continue
        try:
            name, value = item.split('=')
            bit = int(value)
        except ValueError:
            raise AttackError(f"bad key constraint {item!r}; expected k<index>=<bit>") from None
        name = name.strip()
        if name in names:
            index = names[name]
        elif name[:1] == 'k' and name[1:].isdigit():
            index = int(name[1:])
        else:
            raise AttackError(f"unknown key {name!r} in constraint {item!r}")
        if bit not in (0, 1):
            raise AttackError(f"constraint value must be 0 or 1 in {item!r}")
        constraints[index] = bit
    return constraints


def parse_replay(text: str) -> List[Bits]:
    """One binary vector per line; blank lines and ``#`` comments are skipped."""
    vectors = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if any(ch not in '01' for ch in line):
            raise AttackError(f"line {number}: {line!r} is not a binary vector")
        vectors.append(tuple(int(ch) for ch in line))
    return vectors


def merge_constraints(*maps: Mapping[int, int]) -> Dict[int, int]:
    merged: Dict[int, int] = {}
    for mapping in maps:
        for index, bit in mapping.items():
            if merged.get(index, bit) != bit:
                raise ConstraintInconsistencyError(f"key index {index} is constrained to both 0 and 1")
            merged[index] = bit
    return merged
