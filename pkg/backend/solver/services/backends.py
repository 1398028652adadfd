"""
Solver selection. Every backend offers the same surface: ``new_var``,
``add_clause``, ``add_clauses``, ``solve(assumptions)``, ``model_value`` and
``stats``.
"""
import logging
from typing import Iterable, List, Optional, Sequence

from locklab.conf import lab_setting
from .cdcl import Solver, SolverStats
from ..exceptions import BackendUnavailableError, SolverError, UnknownVariableError

logger = logging.getLogger(__name__)


class PySatSolver:
    """python-sat engine behind the built-in solver's interface."""

    def __init__(self, engine: str = 'minisat22'):
        try:
            from pysat.solvers import Solver as PySolver
        except ImportError as exc:
            raise BackendUnavailableError("python-sat is not installed") from exc
        try:
            self._solver = PySolver(name=engine)
        except Exception as exc:
            raise BackendUnavailableError(f"python-sat engine {engine!r} is unavailable: {exc}") from exc
        self.engine = engine
        self.num_vars = 0
        self.ok = True
        self.model: Optional[List[int]] = None
        self.stats = SolverStats()

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def ensure_vars(self, count: int) -> None:
        self.num_vars = max(self.num_vars, count)

    def add_clause(self, clause: Iterable[int]) -> bool:
        literals = [int(lit) for lit in clause]
        if any(lit == 0 for lit in literals):
            raise SolverError("literal 0 is not a valid literal")
        if literals:
            self.ensure_vars(max(abs(lit) for lit in literals))
        else:
            self.ok = False
        self._solver.add_clause(literals)
        return self.ok

    def add_clauses(self, clauses: Iterable[Iterable[int]]) -> bool:
        for clause in clauses:
            self.add_clause(clause)
        return self.ok

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        self.stats.solves += 1
        self.model = None
        for lit in assumptions:
            if lit == 0 or abs(lit) > self.num_vars:
                raise UnknownVariableError(f"assumption {lit} names no allocated variable")
        if not self.ok:
            return False
        status = bool(self._solver.solve(assumptions=list(assumptions)))
        if status:
            values = [0] * (self.num_vars + 1)
            for lit in self._solver.get_model() or []:
                if abs(lit) <= self.num_vars:
                    values[abs(lit)] = int(lit > 0)
            self.model = values
        return status

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

    def delete(self) -> None:
        self._solver.delete()


def get_solver(backend: Optional[str] = None, **params):
    """
    A fresh solver. ``backend`` and the solver parameters default to the LOCKLAB
    settings (``SOLVER_BACKEND``, ``SOLVER``, ``PYSAT_ENGINE``).
    """
    backend = backend or lab_setting('SOLVER_BACKEND')
    if backend == 'cdcl':
        options = dict(lab_setting('SOLVER'))
        options.update(params)
        return Solver(**options)
    if backend == 'pysat':
        return PySatSolver(params.get('engine') or lab_setting('PYSAT_ENGINE'))
    raise BackendUnavailableError(f"unknown solver backend {backend!r}")
