"""
Simplification of a formula under a partial assignment.
"""
import logging
from typing import Dict, FrozenSet, List, Mapping, Tuple

from .encoder import Clause, CnfFormula
from ..exceptions import UnsatisfiableUnderAssignment

logger = logging.getLogger(__name__)


def _reduce(clauses: List[Clause], assignment: Mapping[int, int]) -> List[Clause]:
    reduced: List[Clause] = []
    for clause in clauses:
        kept: List[int] = []
        satisfied = False
        for lit in clause:
            value = assignment.get(abs(lit))
            if value is None:
                if -lit in kept:
                    satisfied = True
                    break
                if lit not in kept:
                    kept.append(lit)
            elif (lit > 0) == bool(value):
                satisfied = True
                break
        if satisfied:
            continue
        if not kept:
            raise UnsatisfiableUnderAssignment(f"clause {clause} is falsified", clause=clause)
        reduced.append(tuple(kept))
    return reduced


def simplify(
    formula: CnfFormula,
    fixed: Mapping[int, int],
    propagate: bool = True,
    keep: FrozenSet[int] = frozenset(),
) -> CnfFormula:
    """
    Substitute ``fixed`` into ``formula``: satisfied clauses go, false literals go.
    With ``propagate`` the unit clauses that appear are assigned in turn until none
    is left. Propagated variables vanish from the result, except those in ``keep``,
    which stay as unit clauses. Every propagated value is recorded in ``units``.

    Raises UnsatisfiableUnderAssignment when a clause becomes empty.
    """
    assignment: Dict[int, int] = {var: int(bool(bit)) for var, bit in fixed.items()}
    clauses = _reduce(list(formula.clauses), assignment)
    units: Dict[int, int] = {}
    retained: List[Clause] = []

    while propagate:
        found: Dict[int, int] = {}
        for clause in clauses:
            if len(clause) != 1:
                continue
            lit = clause[0]
            var, bit = abs(lit), int(lit > 0)
            if found.get(var, bit) != bit:
                raise UnsatisfiableUnderAssignment(f"variable {var} is forced to both 0 and 1", clause=clause)
            found[var] = bit
        if not found:
            break
        for var, bit in found.items():
            units[var] = bit
            if var in keep:
                retained.append((var if bit else -var,))
        assignment.update(found)
        clauses = _reduce(clauses, assignment)

    logger.debug(f"simplified {len(formula.clauses)} clauses to {len(clauses) + len(retained)}")
    result = CnfFormula(
        clauses=clauses + retained,
        num_vars=formula.num_vars,
        net_maps={name: dict(mapping) for name, mapping in formula.net_maps.items()},
        units={**formula.units, **units},
    )
    return result


def model_count(formula: CnfFormula, variables) -> Tuple[int, set]:
    """
    Brute-force projected model enumeration over ``variables`` (small formulas only):
    returns the number of assignments to ``variables`` that extend to a model, and
    the set of those assignments as bit tuples.
    """
    variables = list(variables)
    others = sorted(formula.variables() - set(variables))
    projections = set()
    for index in range(1 << len(variables)):
        base = {var: (index >> (len(variables) - 1 - i)) & 1 for i, var in enumerate(variables)}
        for rest in range(1 << len(others)):
            assignment = dict(base)
            assignment.update({var: (rest >> (len(others) - 1 - i)) & 1 for i, var in enumerate(others)})
            if all(any((lit > 0) == bool(assignment[abs(lit)]) for lit in clause) for clause in formula.clauses):
                projections.add(tuple(base[v] for v in variables))
                break
    return len(projections), projections
