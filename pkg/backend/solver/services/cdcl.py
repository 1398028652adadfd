"""
Conflict-driven clause-learning SAT solver.

Literals at the interface are DIMACS integers. Internally literal ``2v`` is the
positive and ``2v + 1`` the negative literal of variable ``v``, so negation is
``lit ^ 1``. Propagation uses two watched literals per clause with the implied
literal always at position 0; conflicts are analysed to the first unique
implication point; decisions follow variable activity with the lowest index
winning ties, the saved phase, and geometric restarts. Assumptions occupy the
first decision levels.
"""
import heapq
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from ..exceptions import SolverError, UnknownVariableError

logger = logging.getLogger(__name__)

UNDEF = -1
RESCALE_LIMIT = 1e100


@dataclass
class SolverStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    restarts: int = 0
    learnt_clauses: int = 0
    solves: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _internal(lit: int) -> int:
    return (lit << 1) if lit > 0 else ((-lit) << 1) | 1


def _external(lit: int) -> int:
    return -(lit >> 1) if lit & 1 else lit >> 1


class Solver:
    def __init__(
        self,
        var_decay: float = 0.95,
        restart_first: int = 100,
        restart_inc: float = 1.5,
        default_phase: bool = False,
    ):
        self.var_decay = var_decay
        self.restart_first = restart_first
        self.restart_inc = restart_inc
        self.default_phase = default_phase

        self.num_vars = 0
        self.ok = True
        self.clauses: List[List[int]] = []
        self.learnts: List[int] = []
        self.watches: List[List[int]] = [[], []]
        self.assigns: List[int] = [UNDEF]
        self.level: List[int] = [0]
        self.reason: List[Optional[int]] = [None]
        self.polarity: List[bool] = [default_phase]
        self.activity: List[float] = [0.0]
        self.seen: List[bool] = [False]
        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.qhead = 0
        self.var_inc = 1.0
        self.heap: List[tuple] = []
        self.model: Optional[List[int]] = None
        self.stats = SolverStats()

    # --- variables and clauses ------------------------------------------------

    def new_var(self) -> int:
        self.num_vars += 1
        v = self.num_vars
        self.watches.extend(([], []))
        self.assigns.append(UNDEF)
        self.level.append(0)
        self.reason.append(None)
        self.polarity.append(self.default_phase)
        self.activity.append(0.0)
        self.seen.append(False)
        heapq.heappush(self.heap, (-0.0, v))
        return v

    def ensure_vars(self, count: int) -> None:
        while self.num_vars < count:
            self.new_var()

    def add_clause(self, clause: Iterable[int]) -> bool:
        """
        Add a clause, allocating any variable it mentions. Returns False once the
        clause database is unsatisfiable at the top level.
        """
        literals = [int(lit) for lit in clause]
        if any(lit == 0 for lit in literals):
            raise SolverError("literal 0 is not a valid literal")
        if literals:
            self.ensure_vars(max(abs(lit) for lit in literals))
        if not self.ok:
            return False

        kept: List[int] = []
        for lit in sorted(set(_internal(lit) for lit in literals)):
            value = self._value(lit)
            if value == 1 or (lit ^ 1) in kept:
                return True
            if value == 0:
                continue
            kept.append(lit)

        if not kept:
            self.ok = False
        elif len(kept) == 1:
            self._enqueue(kept[0], None)
            if self._propagate() is not None:
                self.ok = False
        else:
            self._attach(kept)
        return self.ok

    def add_clauses(self, clauses: Iterable[Iterable[int]]) -> bool:
        for clause in clauses:
            self.add_clause(clause)
        return self.ok

    def _attach(self, literals: List[int]) -> int:
        cref = len(self.clauses)
        self.clauses.append(literals)
        self.watches[literals[0]].append(cref)
        self.watches[literals[1]].append(cref)
        return cref

    # --- assignment -----------------------------------------------------------

    def _value(self, lit: int) -> int:
        value = self.assigns[lit >> 1]
        return value if value == UNDEF else value ^ (lit & 1)

    def _decision_level(self) -> int:
        return len(self.trail_lim)

    def _enqueue(self, lit: int, reason: Optional[int]) -> None:
        v = lit >> 1
        self.assigns[v] = 1 - (lit & 1)
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _cancel_until(self, level: int) -> None:
        if len(self.trail_lim) <= level:
            return
        start = self.trail_lim[level]
        for lit in reversed(self.trail[start:]):
            v = lit >> 1
            self.polarity[v] = bool(self.assigns[v])
            self.assigns[v] = UNDEF
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[start:]
        del self.trail_lim[level:]
        self.qhead = min(self.qhead, start)

    def _propagate(self) -> Optional[int]:
        """Unit propagation over the trail; returns a conflicting clause index or None."""
        clauses = self.clauses
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            self.stats.propagations += 1
            false_lit = p ^ 1
            watchers = self.watches[false_lit]
            kept: List[int] = []
            conflict = None
            index = 0
            while index < len(watchers):
                cref = watchers[index]
                index += 1
                c = clauses[cref]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                if self._value(first) == 1:
                    kept.append(cref)
                    continue
                for k in range(2, len(c)):
                    if self._value(c[k]) != 0:
                        c[1], c[k] = c[k], false_lit
                        self.watches[c[1]].append(cref)
                        break
                else:
                    kept.append(cref)
                    if self._value(first) == 0:
                        conflict = cref
                        kept.extend(watchers[index:])
                        break
                    self._enqueue(first, cref)
            self.watches[false_lit] = kept
            if conflict is not None:
                self.qhead = len(self.trail)
                return conflict
        return None

    # --- conflict analysis -------------------------------------------------------

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > RESCALE_LIMIT:
            for u in range(1, self.num_vars + 1):
                self.activity[u] *= 1.0 / RESCALE_LIMIT
            self.var_inc *= 1.0 / RESCALE_LIMIT
            self.heap = [(-self.activity[u], u) for u in range(1, self.num_vars + 1) if self.assigns[u] == UNDEF]
            heapq.heapify(self.heap)

    def _analyze(self, conflict: int):
        """First-UIP learnt clause (asserting literal first) and the backjump level."""
        seen = self.seen
        learnt = [0]
        pending = 0
        p = None
        index = len(self.trail) - 1
        cref = conflict
        current = self._decision_level()
        while True:
            clause = self.clauses[cref]
            for q in (clause if p is None else clause[1:]):
                v = q >> 1
                if not seen[v] and self.level[v] > 0:
                    self._bump(v)
                    seen[v] = True
                    if self.level[v] >= current:
                        pending += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[index] >> 1]:
                index -= 1
            p = self.trail[index]
            index -= 1
            cref = self.reason[p >> 1]
            seen[p >> 1] = False
            pending -= 1
            if pending == 0:
                break
        learnt[0] = p ^ 1
        for q in learnt[1:]:
            seen[q >> 1] = False

        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda i: self.level[learnt[i] >> 1])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[learnt[1] >> 1]

    # --- search ----------------------------------------------------------------

    def _pick_branch(self) -> Optional[int]:
        while self.heap:
            neg_activity, v = heapq.heappop(self.heap)
            if self.assigns[v] == UNDEF and -neg_activity == self.activity[v]:
                return (v << 1) | (0 if self.polarity[v] else 1)
        return None

    def _search(self, budget: float, assumptions: Sequence[int]) -> Optional[bool]:
        conflicts = 0
        while True:
            conflict = self._propagate()
            if conflict is not None:
                conflicts += 1
                self.stats.conflicts += 1
                if self._decision_level() == 0:
                    self.ok = False
                    return False
                learnt, backjump = self._analyze(conflict)
                self._cancel_until(backjump)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    cref = self._attach(learnt)
                    self.learnts.append(cref)
                    self.stats.learnt_clauses += 1
                    self._enqueue(learnt[0], cref)
                self.var_inc /= self.var_decay
                continue

            if conflicts >= budget:
                self._cancel_until(0)
                return None

            decision = None
            while self._decision_level() < len(assumptions):
                p = assumptions[self._decision_level()]
                value = self._value(p)
                if value == 1:
                    self.trail_lim.append(len(self.trail))
                elif value == 0:
                    return False
                else:
                    decision = p
                    break
            if decision is None:
                decision = self._pick_branch()
                if decision is None:
                    return True
                self.stats.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(decision, None)

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        """
        True with a total model when the clauses and ``assumptions`` are jointly
        satisfiable. A False answer under assumptions leaves the database usable;
        without assumptions it is final.
        """
        self.stats.solves += 1
        self.model = None
        internal = []
        for lit in assumptions:
            if lit == 0 or abs(lit) > self.num_vars:
                raise UnknownVariableError(f"assumption {lit} names no allocated variable")
            internal.append(_internal(lit))
        if not self.ok:
            return False

        status = None
        restarts = 0
        while status is None:
            budget = self.restart_first * self.restart_inc ** restarts
            status = self._search(budget, internal)
            if status is None:
                restarts += 1
                self.stats.restarts += 1
                logger.debug(f"restart {restarts} after {self.stats.conflicts} conflicts")
        if status:
            self.model = [0] + [max(value, 0) for value in self.assigns[1:]]
        self._cancel_until(0)
        return status

    def learnt_clauses(self) -> List[List[int]]:
        """Conflict clauses kept in the database, in DIMACS literals."""
        return [[_external(lit) for lit in self.clauses[cref]] for cref in self.learnts]

    # --- models -------------------------------------------------------------------

    def model_value(self, var: int) -> int:
        if self.model is None:
            raise SolverError("no model: the last solve did not return SAT")
        if var <= 0 or var >= len(self.model):
            raise UnknownVariableError(f"variable {var} is not allocated")
        return self.model[var]

    def model_literals(self) -> List[int]:
        if self.model is None:
            raise SolverError("no model: the last solve did not return SAT")
        return [v if self.model[v] else -v for v in range(1, len(self.model))]
