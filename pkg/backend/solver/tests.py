import importlib.util
import os
import random
import tempfile
from io import StringIO
from itertools import combinations

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from netlist.services.simulation import exhaustive_patterns
from .exceptions import BackendUnavailableError, SolverError, UnknownVariableError
from .services.backends import get_solver
from .services.cdcl import Solver

HAS_PYSAT = importlib.util.find_spec('pysat') is not None


def clause_rows(clause, patterns, mask):
    """Bitmask of the assignment rows that satisfy ``clause``."""
    word = 0
    for lit in clause:
        value = patterns[str(abs(lit))]
        word |= value if lit > 0 else ~value & mask
    return word


def satisfying_rows(clauses, num_vars):
    patterns = exhaustive_patterns([str(v) for v in range(1, num_vars + 1)])
    mask = (1 << (1 << num_vars)) - 1
    alive = mask
    for clause in clauses:
        alive &= clause_rows(clause, patterns, mask)
        if not alive:
            break
    return alive, patterns, mask


def brute_force_sat(clauses, num_vars):
    """True when some assignment of 1..num_vars satisfies every clause."""
    return satisfying_rows(clauses, num_vars)[0] != 0


def random_cnf(rng, num_vars, num_clauses, width=3):
    clauses = []
    for _ in range(num_clauses):
        chosen = rng.sample(range(1, num_vars + 1), min(width, num_vars))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in chosen))
    return clauses


def pigeonhole(pigeons, holes):
    def var(p, h):
        return p * holes + h + 1

    clauses = [tuple(var(p, h) for h in range(holes)) for p in range(pigeons)]
    for h in range(holes):
        for p, q in combinations(range(pigeons), 2):
            clauses.append((-var(p, h), -var(q, h)))
    return clauses


class CdclSolverTests(SimpleTestCase):

    def assertModelSatisfies(self, solver, clauses):
        for clause in clauses:
            self.assertTrue(
                any(solver.model_value(abs(lit)) == (lit > 0) for lit in clause),
                f"clause {clause} is falsified",
            )

    def test_agrees_with_exhaustive_enumeration(self):
        rng = random.Random(7)
        for _ in range(1000):
            num_vars = rng.randint(3, 20)
            clauses = random_cnf(rng, num_vars, rng.randint(num_vars, 5 * num_vars))
            solver = Solver()
            solver.ensure_vars(num_vars)
            solver.add_clauses(clauses)
            expected = brute_force_sat(clauses, num_vars)
            self.assertEqual(solver.solve(), expected, clauses)
            if expected:
                self.assertModelSatisfies(solver, clauses)

    def test_learnt_clauses_follow_from_the_formula(self):
        rng = random.Random(23)
        learnt_total = 0
        for _ in range(60):
            num_vars = rng.randint(8, 12)
            clauses = random_cnf(rng, num_vars, int(4.3 * num_vars))
            solver = Solver(restart_first=5)
            solver.ensure_vars(num_vars)
            solver.add_clauses(clauses)
            assumptions = [v if rng.random() < 0.5 else -v for v in rng.sample(range(1, num_vars + 1), 2)]
            solver.solve(assumptions)
            solver.solve()
            alive, patterns, mask = satisfying_rows(clauses, num_vars)
            for learnt in solver.learnt_clauses():
                self.assertEqual(alive & ~clause_rows(learnt, patterns, mask), 0, learnt)
            learnt_total += len(solver.learnts)
        self.assertGreater(learnt_total, 0)

    def test_pigeonhole_is_unsatisfiable(self):
        solver = Solver()
        solver.add_clauses(pigeonhole(5, 4))
        self.assertFalse(solver.solve())
        self.assertGreater(solver.stats.conflicts, 0)

    def test_pigeons_that_fit(self):
        clauses = pigeonhole(4, 4)
        solver = Solver()
        solver.add_clauses(clauses)
        self.assertTrue(solver.solve())
        self.assertModelSatisfies(solver, clauses)

    def test_assumptions_do_not_stick(self):
        solver = Solver()
        solver.add_clauses([(1, 2), (-1, 3), (-2, 3)])
        self.assertFalse(solver.solve([-3]))
        self.assertTrue(solver.solve())
        self.assertEqual(solver.model_value(3), 1)
        self.assertTrue(solver.solve([1, -2]))
        self.assertEqual(solver.model_literals(), [1, -2, 3])

    def test_conflicting_assumptions(self):
        solver = Solver()
        solver.ensure_vars(2)
        self.assertFalse(solver.solve([1, -1]))
        self.assertTrue(solver.solve([2]))

    def test_clauses_added_after_a_solve(self):
        solver = Solver()
        solver.add_clauses([(1, 2), (-1, 2)])
        self.assertTrue(solver.solve())
        self.assertEqual(solver.model_value(2), 1)
        solver.add_clause((-2, 3))
        self.assertTrue(solver.solve())
        self.assertEqual(solver.model_value(3), 1)
        self.assertFalse(solver.add_clause((-3,)))
        self.assertFalse(solver.solve())

    def test_clauses_allocate_variables(self):
        solver = Solver()
        solver.add_clause((4, -7))
        self.assertEqual(solver.num_vars, 7)
        self.assertEqual(solver.new_var(), 8)

    def test_assumption_on_an_unallocated_variable(self):
        solver = Solver()
        solver.add_clause((1, 2))
        with self.assertRaises(UnknownVariableError):
            solver.solve([3])
        with self.assertRaises(UnknownVariableError):
            solver.solve([0])

    def test_empty_clause(self):
        solver = Solver()
        self.assertFalse(solver.add_clause(()))
        self.assertFalse(solver.ok)
        self.assertFalse(solver.solve())

    def test_tautologies_are_dropped(self):
        solver = Solver()
        solver.add_clause((1, -1, 2))
        self.assertEqual(solver.clauses, [])

    def test_model_requires_a_satisfiable_answer(self):
        solver = Solver()
        solver.add_clauses([(1,), (-1,)])
        self.assertFalse(solver.solve())
        with self.assertRaises(SolverError):
            solver.model_value(1)

    def test_restarts_are_counted(self):
        solver = Solver(restart_first=1, restart_inc=1.0)
        solver.add_clauses(pigeonhole(5, 4))
        self.assertFalse(solver.solve())
        self.assertGreater(solver.stats.restarts, 0)
        self.assertEqual(solver.stats.as_dict()['solves'], 1)


class BackendSelectionTests(SimpleTestCase):

    def test_default_is_the_builtin_solver(self):
        self.assertIsInstance(get_solver(), Solver)

    @override_settings(LOCKLAB={'SOLVER': {'var_decay': 0.8, 'restart_first': 50, 'restart_inc': 2.0, 'default_phase': True}})
    def test_parameters_come_from_settings(self):
        solver = get_solver()
        self.assertEqual(solver.var_decay, 0.8)
        self.assertEqual(solver.restart_first, 50)
        self.assertTrue(solver.default_phase)
        self.assertEqual(get_solver(restart_first=7).restart_first, 7)

    def test_unknown_backend(self):
        with self.assertRaises(BackendUnavailableError):
            get_solver('bogus')

    def test_pysat_missing(self):
        if HAS_PYSAT:
            self.skipTest("python-sat is installed")
        with self.assertRaises(BackendUnavailableError):
            get_solver('pysat')

    def test_pysat_engine_matches_the_builtin_solver(self):
        if not HAS_PYSAT:
            self.skipTest("python-sat is not installed")
        rng = random.Random(11)
        for _ in range(50):
            num_vars = rng.randint(3, 10)
            clauses = random_cnf(rng, num_vars, 4 * num_vars)
            ours, theirs = Solver(), get_solver('pysat')
            for solver in (ours, theirs):
                solver.ensure_vars(num_vars)
                solver.add_clauses(clauses)
            self.assertEqual(ours.solve([1]), theirs.solve([1]))
            theirs.delete()


class SatCommandTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.path = os.path.join(self.tmp.name, 'small.cnf')
        with open(self.path, 'w') as handle:
            handle.write("p cnf 3 3\n1 2 0\n-1 3 0\n-2 3 0\n")

    def _sat(self, **options):
        out = StringIO()
        call_command('sat', self.path, stdout=out, **options)
        return out.getvalue().splitlines()

    def test_model_line(self):
        lines = self._sat(assume='1,-2', stats=True)
        self.assertEqual(lines[:2], ['s SATISFIABLE', 'v 1 -2 3 0'])
        self.assertIn('c solves 1', lines)

    def test_unsatisfiable_under_assumptions(self):
        self.assertEqual(self._sat(assume='-3'), ['s UNSATISFIABLE'])

    def test_unknown_assumption(self):
        with self.assertRaisesMessage(CommandError, 'UnknownVariableError'):
            self._sat(assume='9')
