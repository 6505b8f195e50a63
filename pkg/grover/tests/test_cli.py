import io
import json
import tempfile
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from grover.circuits import build_d2p, to_qasm
from grover.cli import main
from grover.exceptions import NoConvergence
from grover.models import SweepRun
from grover.solver import solve
from grover.statevector import SearchSpec


def d2p(*args):
    out = io.StringIO()
    call_command('d2p', *args, stdout=out)
    return json.loads(out.getvalue())


class SolveCommandTests(SimpleTestCase):

    def test_solve_quarter(self):
        data = d2p('solve', '--lambda', '0.25')
        self.assertEqual(data['k'], 1)
        self.assertAlmostEqual(data['success'], 1.0, places=12)
        self.assertEqual(data['lambda'], 0.25)

    def test_explicit_query_count(self):
        data = d2p('solve', '--lambda', '0.0625', '--k', '4')
        self.assertEqual(data['k'], 4)
        self.assertGreaterEqual(data['success'], 1 - 1e-9)

    def test_large_lambda_exit_code(self):
        stderr = io.StringIO()
        with mock.patch('sys.stderr', stderr):
            code = main(['solve', '--lambda', '0.3'])
        self.assertEqual(code, 2)
        self.assertIn("single query of standard Grover's search", stderr.getvalue())

    def test_missing_argument_exit_code(self):
        with mock.patch('sys.stderr', io.StringIO()):
            self.assertEqual(main(['solve']), 2)

    def test_no_convergence_exit_code(self):
        with mock.patch('grover.solver.solve_min_k', side_effect=NoConvergence('no phases')):
            with self.assertRaises(CommandError) as ctx:
                d2p('solve', '--lambda', '0.1', '--alpha', '1.0')
        self.assertEqual(ctx.exception.returncode, 3)


class SimulateCommandTests(SimpleTestCase):

    def test_lowered_simulation_through_main(self):
        stdout = io.StringIO()
        with mock.patch('sys.stdout', stdout):
            code = main(['simulate', '--n', '3', '--marked', '5', '--lowered'])
        self.assertEqual(code, 0)
        data = json.loads(stdout.getvalue())
        self.assertTrue(data['lowered'])
        self.assertGreaterEqual(data['success'], 1 - 1e-8)

    def test_marked_probabilities(self):
        data = d2p('simulate', '--n', '4', '--marked', '1,2')
        self.assertEqual(data['marked'], [1, 2])
        self.assertEqual(data['lambda'], 0.125)
        for probability in data['marked_probabilities'].values():
            self.assertAlmostEqual(probability, 0.5, places=9)

    def test_bad_marked_list(self):
        with self.assertRaises(CommandError) as ctx:
            d2p('simulate', '--n', '3', '--marked', 'a,b')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_too_many_marked_states(self):
        with self.assertRaises(CommandError) as ctx:
            d2p('simulate', '--n', '2', '--marked', '0,1')
        self.assertEqual(ctx.exception.returncode, 2)


class ExportCommandTests(SimpleTestCase):

    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.tmp = Path(tmp.name)

    def test_emit_qasm(self):
        path = self.tmp / 'search.qasm'
        data = d2p('emit-qasm', '--n', '2', '--marked', '3', '--output', str(path))
        self.assertEqual(data['k'], 1)
        spec = SearchSpec(2, {3})
        expected = to_qasm(build_d2p(spec, solve(spec.lam, 1)))
        self.assertEqual(path.read_text(encoding='utf-8'), expected)

    def test_emit_qasm_is_deterministic(self):
        first, second = self.tmp / 'a.qasm', self.tmp / 'b.qasm'
        for path in (first, second):
            d2p('emit-qasm', '--n', '4', '--marked', '2,9', '--lowered', '--output', str(path))
        self.assertEqual(first.read_bytes(), second.read_bytes())
        self.assertNotIn(b'\r', first.read_bytes())

    def test_trajectory(self):
        path = self.tmp / 'trajectory.json'
        data = d2p('trajectory', '--lambda', '0.25', '--protocol', 'standard', '--format', 'json', '--output', str(path))
        self.assertEqual(data['points'], 2)
        points = json.loads(path.read_text())
        self.assertEqual([p['step'] for p in points], [0, 1])
        self.assertAlmostEqual(points[1]['z'], -1.0, places=12)

    def test_theta0_trajectory(self):
        data = d2p('trajectory', '--lambda', '0.0625', '--protocol', 'theta0', '--output', str(self.tmp / 't.csv'))
        self.assertEqual(data['points'], 4)
        self.assertGreaterEqual(data['schedule']['success'], 1 - 1e-9)

    def test_sweep_without_saving(self):
        path = self.tmp / 'alpha.csv'
        data = d2p('sweep-alpha', '--lambda', '0.25', '--points', '1', '--output', str(path))
        self.assertEqual((data['rows'], data['solved'], data['run_id']), (1, 1, None))
        self.assertEqual(len(path.read_text().splitlines()), 2)

    def test_unwritable_output(self):
        blocker = self.tmp / 'file'
        blocker.write_text('')
        with self.assertRaises(CommandError) as ctx:
            d2p('trajectory', '--lambda', '0.25', '--output', str(blocker / 'out.csv'))
        self.assertEqual(ctx.exception.returncode, 4)

    def test_zero_points_is_invalid(self):
        for args in (('sweep-lambda',), ('sweep-alpha', '--lambda', '0.25')):
            path = self.tmp / 'empty.csv'
            with self.assertRaises(CommandError) as ctx:
                d2p(*args, '--points', '0', '--output', str(path))
            self.assertEqual(ctx.exception.returncode, 2, msg=args[0])
            self.assertFalse(path.exists())

    def test_k_cap_below_k_opt_is_invalid(self):
        with self.assertRaises(CommandError) as ctx:
            d2p('sweep-alpha', '--lambda', '0.0625', '--k-cap', '2', '--points', '3',
                '--output', str(self.tmp / 'alpha.csv'))
        self.assertEqual(ctx.exception.returncode, 2)


class SavedSweepCommandTests(TestCase):

    def test_sweep_lambda_save(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'lambda.json'
            data = d2p('sweep-lambda', '--points', '3', '--lambda-min', '0.01', '--format', 'json',
                       '--output', str(path), '--save')
            rows = json.loads(path.read_text())
        self.assertEqual((data['rows'], data['solved']), (3, 3))
        run = SweepRun.objects.get(pk=data['run_id'])
        self.assertEqual(run.status, SweepRun.STATUS_DONE)
        self.assertEqual(run.rows.count(), 3)
        self.assertEqual([row['lambda'] for row in rows], run.grid)
