"""
Command-line surface of the search toolkit.

    python manage.py d2p solve --lambda 0.0625
    python manage.py d2p simulate --n 4 --marked 7 --lowered
    python manage.py d2p sweep-lambda --points 200 --format csv --output lambda.csv
    python manage.py d2p sweep-alpha --lambda 0.0625 --points 721 --format json
    python manage.py d2p trajectory --lambda 0.05 --protocol standard
    python manage.py d2p emit-qasm --n 3 --marked 2,5 --output search.qasm

Machine-readable JSON goes to standard output; diagnostics go to standard
error. Exit codes: 0 success, 2 invalid input, 3 no convergence, 4 I/O error.
"""
import json
import logging
import math
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from grover import circuits, experiments, services, solver, statevector, subspace
from grover.exceptions import DomainError, ExportError, NoConvergence
from grover.models import SweepRun

logger = logging.getLogger(__name__)

EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3
EXIT_IO = 4


def marked_list(value):
    try:
        return [int(part) for part in value.split(',') if part.strip()]
    except ValueError:
        raise DomainError(f"--marked expects comma-separated integers, got {value!r}")


class Command(BaseCommand):
    help = "Solve, simulate, sweep and export deterministic two-phase Grover searches"
    requires_system_checks = []

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest='subcommand', required=True)

        solve = subparsers.add_parser('solve', help="Print the phase schedule for a marked fraction")
        solve.add_argument('--lambda', dest='lam', type=float, required=True)
        solve.add_argument('--k', type=int, help="Query count (default: the smallest that admits a solution)")
        solve.add_argument('--alpha', type=float, default=math.pi, help="Oracle phase in radians")
        solve.add_argument('--k-cap', type=int)

        simulate = subparsers.add_parser('simulate', help="Run the full circuit on a statevector")
        self._add_search_arguments(simulate)
        simulate.add_argument('--lowered', action='store_true', help="Lower multiply-controlled phases first")

        for name, grid_help in (('sweep-lambda', "log-spaced lambda points"), ('sweep-alpha', "alpha points in (0, 2pi)")):
            sweep = subparsers.add_parser(name, help=f"Export a sweep over {grid_help}")
            sweep.add_argument('--points', type=int, help=f"Number of {grid_help}")
            sweep.add_argument('--format', choices=['csv', 'json'], default='csv')
            sweep.add_argument('--output', type=Path)
            sweep.add_argument('--save', action='store_true', help="Store the run and its rows in the database")
            if name == 'sweep-lambda':
                sweep.add_argument('--lambda-min', type=float, default=settings.D2P_LAMBDA_MIN)
                sweep.add_argument('--lambda-max', type=float, default=settings.D2P_LAMBDA_MAX)
                sweep.add_argument('--alpha', type=float, default=math.pi)
            else:
                sweep.add_argument('--lambda', dest='lam', type=float, required=True)
                sweep.add_argument(
                    '--k-cap', type=int,
                    help="Largest query count tried per alpha (default: D2P_K_CAP_FACTOR * k_opt). "
                         "An alpha with no solution costs a full multistart at about log2(cap) query counts, "
                         "so large caps on fine grids take hours",
                )

        trajectory = subparsers.add_parser('trajectory', help="Export the Bloch vector after each iterate")
        trajectory.add_argument('--lambda', dest='lam', type=float, required=True)
        trajectory.add_argument('--protocol', choices=['d2p', 'standard', 'theta0'], default='d2p')
        trajectory.add_argument('--k', type=int)
        trajectory.add_argument('--alpha', type=float, default=math.pi)
        trajectory.add_argument('--format', choices=['csv', 'json'], default='csv')
        trajectory.add_argument('--output', type=Path)

        qasm = subparsers.add_parser('emit-qasm', help="Write the circuit as OpenQASM 3")
        self._add_search_arguments(qasm)
        qasm.add_argument('--lowered', action='store_true')
        qasm.add_argument('--output', type=Path)

    def _add_search_arguments(self, parser):
        parser.add_argument('--n', type=int, required=True, help="Number of qubits")
        parser.add_argument('--marked', type=str, required=True, help="Comma-separated marked indices")
        parser.add_argument('--k', type=int)
        parser.add_argument('--alpha', type=float, default=math.pi)

    def handle(self, *args, **options):
        handler = getattr(self, 'handle_' + options['subcommand'].replace('-', '_'))
        try:
            result = handler(options)
        except DomainError as e:
            raise CommandError(str(e), returncode=EXIT_INVALID)
        except NoConvergence as e:
            raise CommandError(str(e), returncode=EXIT_NO_CONVERGENCE)
        except (ExportError, OSError) as e:
            raise CommandError(str(e), returncode=EXIT_IO)
        self.stdout.write(json.dumps(result, indent=2))

    # --- validation helpers ---

    def _output_path(self, options, default_name):
        return options['output'] or Path(settings.D2P_EXPORT_DIR) / default_name

    def _search(self, options):
        return statevector.SearchSpec(options['n'], marked_list(options['marked']))

    def _schedule(self, lam, k, alpha, k_cap=None):
        if k is None:
            return solver.solve_min_k(lam, alpha, k_cap)
        return solver.solve(lam, k, alpha)

    def _search_circuit(self, options):
        search = self._search(options)
        solver.check_search_fraction(search.lam)
        if options['k'] is not None:
            subspace.check_query_count(options['k'])
        schedule = self._schedule(search.lam, options['k'], options['alpha'])
        circuit = circuits.build_d2p(search, schedule)
        if options['lowered']:
            circuit = circuits.lower_all(circuit)
        return search, schedule, circuit

    # --- subcommands ---

    def handle_solve(self, options):
        solver.check_search_fraction(options['lam'])
        if options['k'] is not None:
            subspace.check_query_count(options['k'])
        schedule = self._schedule(options['lam'], options['k'], options['alpha'], options['k_cap'])
        return schedule.to_dict()

    def handle_simulate(self, options):
        search, schedule, circuit = self._search_circuit(options)
        state = statevector.run(circuit, statevector.StateVector.basis(search.n_qubits, 0))
        return {
            'n': search.n_qubits,
            'marked': sorted(search.marked),
            'lambda': search.lam,
            'k': schedule.k,
            'theta1': schedule.theta1,
            'theta2': schedule.theta2,
            'lowered': options['lowered'],
            'gates': len(circuit),
            'success': statevector.success_probability(state, search.marked),
            'marked_probabilities': {
                str(i): statevector.success_probability(state, [i]) for i in sorted(search.marked)
            },
        }

    def _sweep(self, options, kind, grid, **run_options):
        path = self._output_path(options, f"{kind}_sweep.{options['format']}")
        if options['save']:
            run = services.create_sweep_run(kind, grid, **run_options)
            services.run_sweep(run)
            records = services.run_to_records(run)
            run_id = run.pk
        elif kind == SweepRun.KIND_ALPHA:
            records = experiments.sweep_alpha(run_options['lambda_value'], grid, run_options['k_cap'])
            run_id = None
        else:
            records = experiments.sweep_lambda(grid, run_options['alpha'])
            run_id = None
        experiments.export(records, options['format'], path)
        return {
            'path': str(path),
            'rows': len(records),
            'solved': sum(r.solved for r in records),
            'run_id': run_id,
        }

    def handle_sweep_lambda(self, options):
        grid = experiments.log_lambda_grid(
            settings.D2P_LAMBDA_GRID_POINTS if options['points'] is None else options['points'],
            options['lambda_min'],
            options['lambda_max'],
        )
        for lam in grid:
            solver.check_search_fraction(lam)
        return self._sweep(options, SweepRun.KIND_LAMBDA, grid, alpha=options['alpha'])

    def handle_sweep_alpha(self, options):
        lam = solver.check_search_fraction(options['lam'])
        lowest = solver.k_opt(lam)
        k_cap = settings.D2P_K_CAP_FACTOR * lowest if options['k_cap'] is None else options['k_cap']
        if k_cap < lowest:
            raise DomainError(f"--k-cap {k_cap} is below k_opt={lowest} for lambda={lam!r}")
        grid = experiments.alpha_grid(settings.D2P_ALPHA_GRID_POINTS if options['points'] is None else options['points'])
        return self._sweep(options, SweepRun.KIND_ALPHA, grid, lambda_value=lam, k_cap=k_cap)

    def handle_trajectory(self, options):
        lam, k = options['lam'], options['k']
        if k is not None:
            subspace.check_query_count(k)
        if options['protocol'] == 'standard':
            schedule = solver.standard_schedule(lam, k)
        elif options['protocol'] == 'theta0':
            schedule = solver.theta0_schedule(lam, k if k is not None else solver.k_opt(lam))
        else:
            solver.check_search_fraction(lam)
            schedule = self._schedule(lam, k, options['alpha'])
        points = subspace.trajectory(schedule.lam, schedule.alpha, schedule.theta1, schedule.theta2, schedule.k)
        path = self._output_path(options, f"trajectory.{options['format']}")
        experiments.export(points, options['format'], path)
        return {'path': str(path), 'points': len(points), 'schedule': schedule.to_dict()}

    def handle_emit_qasm(self, options):
        search, schedule, circuit = self._search_circuit(options)
        path = self._output_path(options, f"d2p_n{search.n_qubits}.qasm")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(circuits.to_qasm(circuit), encoding='utf-8', newline='\n')
        except OSError as e:
            raise ExportError(path, e) from e
        logger.info("Wrote %d gates to %s", len(circuit), path)
        return {'path': str(path), 'gates': len(circuit), 'k': schedule.k, 'lowered': options['lowered']}
