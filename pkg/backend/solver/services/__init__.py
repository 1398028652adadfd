# Solver services
from .cdcl import Solver, SolverStats
from .backends import PySatSolver, get_solver

__all__ = ['Solver', 'SolverStats', 'PySatSolver', 'get_solver']
