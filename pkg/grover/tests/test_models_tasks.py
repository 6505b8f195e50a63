import json
import math
from unittest import mock

from django.contrib import admin
from django.test import RequestFactory, TestCase

from grover.admin import SweepRunAdmin
from grover.exceptions import DomainError
from grover.models import SweepRow, SweepRun
from grover.services import create_sweep_run, run_sweep, run_to_records
from grover.tasks import REDIS_PROGRESS_KEY, run_sweep_task, update_progress


class SweepServiceTests(TestCase):

    def test_lambda_sweep_rows(self):
        run = create_sweep_run(SweepRun.KIND_LAMBDA, [0.25, 0.3, 1 / 16])
        self.assertEqual(run.status, SweepRun.STATUS_PENDING)
        progress = mock.Mock()

        run_sweep(run, progress=progress)

        run.refresh_from_db()
        self.assertEqual(run.status, SweepRun.STATUS_DONE)
        self.assertIsNotNone(run.finished_at)
        self.assertEqual(progress.call_args_list[-1], mock.call(3, 3))
        rows = list(run.rows.all())
        self.assertEqual([row.index for row in rows], [0, 1, 2])
        self.assertEqual([row.status for row in rows], ['solved', 'invalid', 'solved'])
        self.assertEqual(rows[2].k, 3)
        self.assertIsNone(rows[1].theta1)

    def test_records_round_trip_through_database(self):
        run = create_sweep_run(SweepRun.KIND_LAMBDA, [1 / 16])
        run_sweep(run)
        [record] = run_to_records(run)
        self.assertTrue(record.solved)
        self.assertEqual(record.lam, 1 / 16)
        self.assertGreaterEqual(record.success_d2p, 1 - 1e-9)
        self.assertEqual(record.schedule().k, 3)

    def test_alpha_sweep(self):
        run = create_sweep_run(SweepRun.KIND_ALPHA, [math.pi], lambda_value=0.25, k_cap=4)
        run_sweep(run)
        row = SweepRow.objects.get(run=run, index=0)
        self.assertEqual(row.status, 'solved')
        self.assertEqual(row.k, 1)
        self.assertEqual(row.lambda_value, 0.25)

    def test_rerun_replaces_rows(self):
        run = create_sweep_run(SweepRun.KIND_LAMBDA, [0.25])
        run_sweep(run)
        run_sweep(run)
        self.assertEqual(run.rows.count(), 1)

    def test_invalid_runs(self):
        with self.assertRaises(DomainError):
            create_sweep_run(SweepRun.KIND_ALPHA, [1.0])
        with self.assertRaises(DomainError):
            create_sweep_run(SweepRun.KIND_LAMBDA, [])
        with self.assertRaises(DomainError):
            create_sweep_run('theta', [0.1])

    def test_unexpected_error_marks_run_failed(self):
        run = create_sweep_run(SweepRun.KIND_LAMBDA, [0.25, 0.1])
        with mock.patch('grover.services._evaluate_point', side_effect=RuntimeError('disk full')):
            with self.assertRaises(RuntimeError):
                run_sweep(run)
        run.refresh_from_db()
        self.assertEqual(run.status, SweepRun.STATUS_FAILED)
        self.assertEqual(run.error, 'disk full')
        self.assertEqual(run.rows.count(), 0)

    def test_str(self):
        run = create_sweep_run(SweepRun.KIND_ALPHA, [1.0, 2.0], lambda_value=0.0625)
        self.assertEqual(str(run), "Alpha sweep at lambda=0.0625 (2 points)")


class SweepTaskTests(TestCase):

    def setUp(self):
        self.redis = mock.MagicMock()
        self.redis.get.return_value = None
        patcher = mock.patch('grover.tasks.get_redis_client', return_value=self.redis)
        patcher.start()
        self.addCleanup(patcher.stop)

    def _stored_progress(self):
        key, payload = self.redis.set.call_args.args
        self.assertEqual(key, REDIS_PROGRESS_KEY)
        return json.loads(payload)

    def test_runs_sweep_and_reports_progress(self):
        run = create_sweep_run(SweepRun.KIND_LAMBDA, [0.25, 0.3])

        message = run_sweep_task(run.pk)

        self.assertEqual(message, f"Sweep {run.pk}: 1/2 points solved")
        progress = self._stored_progress()[str(run.pk)]
        self.assertEqual((progress['done'], progress['total'], progress['status']), (2, 2, 'done'))
        run.refresh_from_db()
        self.assertEqual(run.status, SweepRun.STATUS_DONE)

    def test_missing_run(self):
        self.assertEqual(run_sweep_task(12345), "SweepRun 12345 not found")
        self.redis.set.assert_not_called()

    def test_failure_is_reported(self):
        run = create_sweep_run(SweepRun.KIND_LAMBDA, [0.25])
        with mock.patch('grover.tasks.run_sweep', side_effect=RuntimeError('boom')):
            with self.assertLogs('grover.tasks', level='ERROR'):
                message = run_sweep_task(run.pk)
        self.assertIn('boom', message)
        progress = self._stored_progress()[str(run.pk)]
        self.assertEqual(progress['status'], 'error')
        self.assertEqual(progress['error'], 'boom')

    def test_redis_errors_are_swallowed(self):
        self.redis.get.side_effect = ConnectionError('redis down')
        with self.assertLogs('grover.tasks', level='ERROR') as logs:
            update_progress(1, 0, 10)
        self.assertIn('Error updating Redis progress', logs.output[0])

    def test_progress_merges_existing_runs(self):
        self.redis.get.return_value = json.dumps({'7': {'status': 'done'}})
        update_progress(8, 1, 4)
        progress = self._stored_progress()
        self.assertEqual(progress['7'], {'status': 'done'})
        self.assertEqual(progress['8']['done'], 1)


class SweepAdminTests(TestCase):

    def test_queue_action(self):
        runs = [create_sweep_run(SweepRun.KIND_LAMBDA, [0.25]) for _ in range(2)]
        model_admin = SweepRunAdmin(SweepRun, admin.site)
        request = RequestFactory().post('/admin/grover/sweeprun/')
        with mock.patch('grover.admin.run_sweep_task') as task, \
                mock.patch.object(SweepRunAdmin, 'message_user') as message_user:
            model_admin.queue_runs(request, SweepRun.objects.all())
        self.assertEqual(sorted(c.args[0] for c in task.delay.call_args_list), sorted(r.pk for r in runs))
        self.assertIn('Queued 2 sweep(s)', message_user.call_args.args[1])

    def test_point_count(self):
        run = create_sweep_run(SweepRun.KIND_LAMBDA, [0.1, 0.2, 0.25])
        self.assertEqual(SweepRunAdmin(SweepRun, admin.site).get_point_count(run), 3)
