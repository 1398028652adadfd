from cnf.services.dimacs import format_model, read_dimacs
from locklab.commands import LabCommand
from solver.services.backends import get_solver


class Command(LabCommand):
    help = "Solve a DIMACS CNF file and print the answer in SAT-competition style"

    def add_arguments(self, parser):
        parser.add_argument('cnf', help="DIMACS .cnf file")
        parser.add_argument('--backend', choices=['cdcl', 'pysat'], help="Defaults to LOCKLAB['SOLVER_BACKEND']")
        parser.add_argument('--assume', default='', help="Comma-separated assumption literals, e.g. 3,-7")
        parser.add_argument('--stats', action='store_true', help="Print solver counters as comment lines")

    def run(self, *args, **options):
        formula = read_dimacs(options['cnf'])
        solver = get_solver(options['backend'])
        solver.ensure_vars(formula.num_vars)
        solver.add_clauses(formula.clauses)
        assumptions = [int(lit) for lit in options['assume'].split(',') if lit.strip()]

        if solver.solve(assumptions):
            self.stdout.write('s SATISFIABLE')
            self.stdout.write(format_model(solver.model_literals()))
        else:
            self.stdout.write('s UNSATISFIABLE')
        stats = getattr(solver, 'stats', None)
        if options['stats'] and stats is not None:
            for name, value in stats.as_dict().items():
                self.stdout.write(f"c {name} {value}")
