"""
Key-size sweeps over a fixed cone.

Size k locks the cone with the first k gates of its insertion order and the
first k bits of one seeded key, so each size extends the previous one by a
single key gate and no gate kind changes along the way.
"""
import logging
import random
from dataclasses import asdict, dataclass, fields
from typing import Callable, List, Optional, Sequence

from attacks.exceptions import AttackBudgetExceeded, IterationCapExceeded
from attacks.services.sat_attack import AttackOptions, AttackTrace, sat_attack
from cones.services.cone import cone_to_circuit, insertion_order, largest_cone
from locking.services.key_gates import insert_key_gates
from locking.services.keys import KeyVector
from netlist.services.circuit import Circuit
from ..exceptions import HarnessError

logger = logging.getLogger(__name__)

SUPPORTED_SCHEMES = ('xor',)


@dataclass(frozen=True)
class SweepRecord:
    key_size: int
    io_pairs: int
    total_iters: int
    total_s: float
    io_pairs_s: float
    avg_s: float
    unsat_s: float
    unsat_pct: float
    complete: bool = True
    recovered_key: str = ''

    @classmethod
    def from_trace(cls, key_size: int, trace: AttackTrace) -> 'SweepRecord':
        io_pairs_s = trace.io_pairs_seconds
        return cls(
            key_size=key_size,
            io_pairs=trace.io_pairs,
            total_iters=trace.total_iterations,
            total_s=trace.total_seconds,
            io_pairs_s=io_pairs_s,
            avg_s=io_pairs_s / trace.io_pairs if trace.io_pairs else 0.0,
            unsat_s=trace.unsat_seconds,
            unsat_pct=100.0 * trace.unsat_seconds / trace.total_seconds if trace.total_seconds else 0.0,
            complete=trace.complete,
            recovered_key=str(trace.key) if trace.key is not None else '',
        )

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'SweepRecord':
        names = {f.name for f in fields(cls)}
        return cls(**{name: value for name, value in data.items() if name in names})


@dataclass(frozen=True)
class SweepPlan:
    """Everything a sweep point needs: the cone, its insertion order and the full key."""
    cone: Circuit
    order: Sequence[str]
    key: KeyVector

    def lock(self, size: int):
        return insert_key_gates(self.cone, size, self.order, self.key.prefix(size))


def plan_sweep(cone: Circuit, max_keys: int, seed: int = 0, scheme: str = 'xor',
               order: Optional[Sequence[str]] = None) -> SweepPlan:
    if scheme not in SUPPORTED_SCHEMES:
        raise HarnessError(f"sweeps support the schemes {', '.join(SUPPORTED_SCHEMES)}, not {scheme!r}")
    if max_keys < 0:
        raise HarnessError("max keys must not be negative")
    order = list(order) if order is not None else insertion_order(largest_cone(cone))
    if max_keys > len(order):
        raise HarnessError(f"{max_keys} key gates requested but the cone has {len(order)} insertion locations")
    key = KeyVector.random(max_keys, random.Random(seed))
    return SweepPlan(cone=cone, order=tuple(order), key=key)


def sweep_point(plan: SweepPlan, size: int, options: Optional[AttackOptions] = None) -> SweepRecord:
    """Lock at ``size`` key bits and attack; a run stopped by the cap or budget is kept as incomplete."""
    locked = plan.lock(size)
    try:
        trace = sat_attack(locked, plan.cone, options or AttackOptions.from_settings())
    except (AttackBudgetExceeded, IterationCapExceeded) as exc:
        logger.warning(f"sweep point |K|={size} incomplete: {exc}")
        return SweepRecord.from_trace(size, exc.trace)
    record = SweepRecord.from_trace(size, trace)
    logger.info(f"sweep |K|={size}: TI={record.total_iters} |P|={record.io_pairs} {record.total_s:.4f}s")
    return record


def sweep(
    cone: Circuit,
    max_keys: int,
    scheme: str = 'xor',
    seed: int = 0,
    options: Optional[AttackOptions] = None,
    order: Optional[Sequence[str]] = None,
    progress: Optional[Callable[[SweepRecord], None]] = None,
) -> List[SweepRecord]:
    """One record per key size 1..max_keys, in key-size order."""
    plan = plan_sweep(cone, max_keys, seed=seed, scheme=scheme, order=order)
    records = []
    for size in range(1, max_keys + 1):
        record = sweep_point(plan, size, options)
        records.append(record)
        if progress is not None:
            progress(record)
    return records


def timing_anatomy(circuit: Circuit, key_size: int, seed: int = 0,
                   options: Optional[AttackOptions] = None) -> SweepRecord:
    """
    One attack on the largest cone of ``circuit`` locked with ``key_size`` key
    gates, reported as a sweep record so the UNSAT-phase share can be read off.
    """
    cone = cone_to_circuit(largest_cone(circuit), circuit)
    record = sweep_point(plan_sweep(cone, key_size, seed=seed), key_size, options)
    logger.info(f"{cone.name}: UNSAT phase {record.unsat_s:.4f}s of {record.total_s:.4f}s ({record.unsat_pct:.1f}%)")
    return record
