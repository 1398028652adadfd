# Attack services
from .oracle import IoPair, Oracle
from .keyspace import (
    remaining_keys, dip_elimination_count, verify_key,
    elimination_matrix, pruning_profile, PruningProfile, EliminationMatrix,
)
from .sat_attack import AttackOptions, AttackTrace, IterationRecord, SatAttack, sat_attack

__all__ = [
    'IoPair', 'Oracle',
    'remaining_keys', 'dip_elimination_count', 'verify_key',
    'elimination_matrix', 'pruning_profile', 'PruningProfile', 'EliminationMatrix',
    'AttackOptions', 'AttackTrace', 'IterationRecord', 'SatAttack', 'sat_attack',
]
