import json
import os
import tempfile
from io import StringIO
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from rest_framework.test import APITestCase

from attacks.services.keyspace import verify_key
from attacks.services.sat_attack import AttackOptions
from cones.services.cone import cone_to_circuit, largest_cone
from locking.services.keys import KeyVector
from netlist.fixtures import array_multiplier, two_cone_original, wrapped_cone
from netlist.services.bench import write_bench
from .exceptions import DegenerateFitError, HarnessError
from .models import SweepPoint, SweepRun
from .services.comparison import circuit_order, compare_circuit_and_cone
from .services.report import from_json, iteration_drops, report, text_summary, to_csv, to_json
from .services.sweep import SweepRecord, plan_sweep, sweep, sweep_point, timing_anatomy
from .services.trend import fit_linear
from .tasks import run_sweep_task


def record(key_size, total_iters, total_s=1.0, unsat_s=0.5):
    io_pairs = total_iters - 1
    return SweepRecord(
        key_size=key_size,
        io_pairs=io_pairs,
        total_iters=total_iters,
        total_s=total_s,
        io_pairs_s=total_s - unsat_s,
        avg_s=(total_s - unsat_s) / io_pairs if io_pairs else 0.0,
        unsat_s=unsat_s,
        unsat_pct=100.0 * unsat_s / total_s,
    )


class TrendTests(SimpleTestCase):

    def test_exact_line(self):
        fit = fit_linear([(1, 3), (2, 5), (3, 7), (4, 9)])
        self.assertAlmostEqual(fit.slope, 2.0)
        self.assertAlmostEqual(fit.intercept, 1.0)
        self.assertAlmostEqual(fit.residual, 0.0)
        self.assertAlmostEqual(fit.predict(10), 21.0)
        self.assertEqual(fit.equation(), 'TI = 2.000|K| + 1.000')

    def test_records_and_normal_equations(self):
        records = [record(1, 2), record(2, 5), record(3, 4), record(4, 8)]
        fit = fit_linear(records)
        self.assertAlmostEqual(sum(fit.deviations), 0.0)
        self.assertLess(fit.normal_residual, 1e-9)
        self.assertGreater(fit.residual, 0.0)

    def test_degenerate_inputs(self):
        with self.assertRaises(DegenerateFitError):
            fit_linear([(3, 4)])
        with self.assertRaises(DegenerateFitError):
            fit_linear([(3, 4), (3, 5)])


class ReportTests(SimpleTestCase):

    def test_csv_columns(self):
        text = to_csv([record(1, 2, total_s=2.0, unsat_s=1.5)])
        header, row = text.splitlines()
        self.assertEqual(header, 'key_size,io_pairs,total_iters,total_s,io_pairs_s,avg_s,unsat_s,unsat_pct')
        self.assertEqual(row, '1,1,2,2.000000,0.500000,0.500000,1.500000,75.000000')

    def test_json_keeps_records_and_fit(self):
        records = [record(1, 2), record(2, 3)]
        text = to_json(records, fit_linear(records))
        self.assertEqual(from_json(text), records)
        self.assertAlmostEqual(json.loads(text)['fit']['slope'], 1.0)

    def test_iteration_drops(self):
        records = [record(size, ti) for size, ti in ((1, 2), (2, 5), (3, 3), (4, 4), (5, 2))]
        self.assertEqual(iteration_drops(records), [(3, 5, 3), (5, 4, 2)])
        summary = text_summary(records)
        self.assertIn('TI drop at |K|=3: 5 -> 3', summary)
        self.assertIn('TI drop at |K|=5: 4 -> 2', summary)

    def test_summary_without_drops(self):
        records = [record(1, 2), record(2, 3)]
        summary = text_summary(records, fit_linear(records))
        self.assertIn('no TI drops', summary)
        self.assertIn('UNSAT share of total time: 50.0%', summary)
        self.assertIn('trend: TI = 1.000|K| + 1.000', summary)

    def test_report_formats(self):
        records = [record(1, 2), record(2, 3), record(3, 4)]
        self.assertEqual(len(report(records).splitlines()), 4)
        self.assertEqual(from_json(report(records, 'json')), records)
        self.assertIn('no TI drops', report(records, 'text'))
        with self.assertRaises(HarnessError):
            report(records, 'xml')


class SweepTests(SimpleTestCase):

    def test_each_size_extends_the_previous_lock(self):
        plan = plan_sweep(wrapped_cone(6), 3, seed=4)
        previous = None
        for size in (1, 2, 3):
            locked = plan.lock(size)
            self.assertEqual(locked.correct_key, plan.key.prefix(size))
            if previous is not None:
                self.assertEqual(locked.key_inputs[:-1], previous.key_inputs)
                self.assertEqual(locked.params['locations'][:-1], previous.params['locations'])
            previous = locked

    def test_sweep_records(self):
        cone = wrapped_cone(6)
        seen = []
        records = sweep(cone, 3, seed=1, progress=seen.append)
        self.assertEqual(seen, records)
        self.assertEqual([r.key_size for r in records], [1, 2, 3])
        plan = plan_sweep(cone, 3, seed=1)
        for r in records:
            self.assertTrue(r.complete)
            self.assertEqual(r.io_pairs, r.total_iters - 1)
            self.assertGreaterEqual(r.total_s, r.unsat_s)
            key = KeyVector.from_string(r.recovered_key)
            self.assertTrue(verify_key(plan.lock(r.key_size), key, cone))

    def test_capped_point_is_kept_as_incomplete(self):
        plan = plan_sweep(wrapped_cone(8), 4, seed=2)
        r = sweep_point(plan, 4, AttackOptions(max_iterations=0))
        self.assertFalse(r.complete)
        self.assertEqual(r.recovered_key, '')
        self.assertEqual(r.total_iters, 0)

    def test_bad_plans(self):
        with self.assertRaises(HarnessError):
            plan_sweep(wrapped_cone(4), 3, scheme='antisat')
        with self.assertRaises(HarnessError):
            plan_sweep(wrapped_cone(4), 50)


class ComparisonTests(SimpleTestCase):

    def test_circuit_order_starts_with_the_largest_cone(self):
        self.assertEqual(circuit_order(two_cone_original()), ['y0', 'G1', 'G2', 'y1', 'G3'])

    def test_whole_circuit_against_its_cone(self):
        rows = compare_circuit_and_cone(two_cone_original(), 2, seed=3)
        self.assertEqual([row.target for row in rows], ['circuit', 'cone'])
        self.assertEqual([row.outputs for row in rows], [2, 1])
        for row in rows:
            self.assertEqual(row.key_size, 2)
            self.assertEqual(row.io_pairs, row.total_iters - 1)

    def test_too_many_keys_for_the_cone(self):
        with self.assertRaises(HarnessError):
            compare_circuit_and_cone(two_cone_original(), 4)


class TimingAnatomyTests(SimpleTestCase):

    def test_multiplier_cone_reports_its_unsat_share(self):
        circuit = array_multiplier(6)
        record = timing_anatomy(circuit, 8, seed=1, options=AttackOptions())
        cone = cone_to_circuit(largest_cone(circuit), circuit)
        self.assertEqual(len(cone.inputs), 12)
        self.assertTrue(record.complete)
        self.assertEqual(record.key_size, 8)
        self.assertEqual(record.io_pairs, record.total_iters - 1)
        self.assertGreaterEqual(record.total_s, record.unsat_s)
        self.assertGreaterEqual(record.unsat_pct, 0.0)
        self.assertLessEqual(record.unsat_pct, 100.0)
        locked = plan_sweep(cone, 8, seed=1).lock(8)
        self.assertTrue(verify_key(locked, KeyVector.from_string(record.recovered_key), cone))


class SweepTaskTests(TestCase):

    def _run(self, **fields):
        values = {'name': 'wrapped', 'cone_bench': write_bench(wrapped_cone(4)), 'max_keys': 3}
        values.update(fields)
        return SweepRun.objects.create(**values)

    def test_sequential_sweep(self):
        run = self._run()
        result = run_sweep_task(run.id)
        run.refresh_from_db()
        self.assertEqual(result, {'sweep_id': run.id, 'points': 3})
        self.assertEqual(run.status, SweepRun.COMPLETED)
        self.assertEqual([r.key_size for r in run.records()], [1, 2, 3])
        self.assertIn('slope', run.fit)

    def test_points_are_stored_once_per_size(self):
        run = self._run()
        r = record(1, 2)
        SweepPoint.store(run, r)
        SweepPoint.store(run, record(1, 3))
        self.assertEqual(run.points.count(), 1)
        self.assertEqual(run.records()[0].total_iters, 3)

    def test_unplannable_sweep_fails(self):
        run = self._run(max_keys=10)
        run_sweep_task(run.id)
        run.refresh_from_db()
        self.assertEqual(run.status, SweepRun.FAILED)
        self.assertTrue(run.error_message.startswith('HarnessError'))


def run_locally(sweep_id):
    return run_sweep_task.apply(args=(sweep_id,))


class SweepApiTests(APITestCase):

    def setUp(self):
        patcher = mock.patch('harness.views.run_sweep_task.delay', side_effect=run_locally)
        patcher.start()
        self.addCleanup(patcher.stop)

    def test_create_then_report(self):
        response = self.client.post('/api/v1/sweeps/', {
            'name': 'wrapped',
            'cone_bench': write_bench(wrapped_cone(4)),
            'max_keys': 3,
            'seed': 2,
        }, format='json')
        self.assertEqual(response.status_code, 202)
        self.assertEqual(response.data['status'], SweepRun.COMPLETED)
        self.assertEqual(len(response.data['points']), 3)
        self.assertTrue(response.data['task_id'])
        sweep_id = response.data['id']

        report = self.client.get(f'/api/v1/sweeps/{sweep_id}/report/')
        self.assertEqual(report.status_code, 200)
        self.assertEqual([r['key_size'] for r in report.data['records']], [1, 2, 3])
        self.assertIn('slope', report.data['fit'])

        csv_report = self.client.get(f'/api/v1/sweeps/{sweep_id}/report/?format=csv')
        self.assertEqual(csv_report.status_code, 200)
        self.assertEqual(csv_report['Content-Type'], 'text/csv')
        lines = csv_report.content.decode().splitlines()
        self.assertEqual(lines[0].split(',')[0], 'key_size')
        self.assertEqual(len(lines), 4)

    def test_unsupported_scheme(self):
        response = self.client.post('/api/v1/sweeps/', {
            'cone_bench': write_bench(wrapped_cone(4)),
            'max_keys': 2,
            'scheme': 'antisat',
        }, format='json')
        self.assertEqual(response.status_code, 400)
        self.assertIn('scheme', response.data['details'])

    def test_sweep_larger_than_the_cone(self):
        response = self.client.post('/api/v1/sweeps/', {
            'cone_bench': write_bench(wrapped_cone(4)),
            'max_keys': 10,
        }, format='json')
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.data['error'], 'HarnessError')
        self.assertEqual(SweepRun.objects.count(), 0)


class HarnessCommandTests(TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def _path(self, name):
        return os.path.join(self.tmp.name, name)

    def _write(self, name, text):
        with open(self._path(name), 'w') as handle:
            handle.write(text)
        return self._path(name)

    def test_sweep_writes_reports_and_stores_the_run(self):
        bench = self._write('cone.bench', write_bench(wrapped_cone(4)))
        out = StringIO()
        call_command('sweep', bench, max_keys=3, csv=self._path('sweep.csv'), json=self._path('sweep.json'),
                     store=True, stdout=out)
        self.assertIn('|K|=3:', out.getvalue())
        with open(self._path('sweep.csv')) as handle:
            self.assertEqual(len(handle.read().splitlines()), 4)
        with open(self._path('sweep.json')) as handle:
            self.assertEqual(len(from_json(handle.read())), 3)
        run = SweepRun.objects.get()
        self.assertEqual(run.status, SweepRun.COMPLETED)
        self.assertEqual(run.points.count(), 3)

    def test_sweep_rejects_oversized_requests(self):
        bench = self._write('cone.bench', write_bench(wrapped_cone(4)))
        with self.assertRaisesMessage(CommandError, 'HarnessError'):
            call_command('sweep', bench, max_keys=9, stdout=StringIO())

    def test_compare(self):
        bench = self._write('two.bench', write_bench(two_cone_original()))
        out = StringIO()
        call_command('compare', bench, keys=2, stdout=out)
        lines = out.getvalue().splitlines()
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[1].startswith('circuit'))
        self.assertTrue(lines[2].startswith('cone'))

    def test_anatomy_on_a_generated_multiplier(self):
        out = StringIO()
        call_command('anatomy', multiplier=4, keys=4, seed=2, stdout=out)
        lines = out.getvalue().splitlines()
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[0].startswith('mult4x4: |K|=4 '))
        self.assertTrue(lines[2].startswith('UNSAT phase '))

    def test_anatomy_needs_exactly_one_source(self):
        with self.assertRaises(CommandError):
            call_command('anatomy', stdout=StringIO())

    def test_missing_file(self):
        with self.assertRaises(CommandError):
            call_command('compare', self._path('absent.bench'), keys=1, stdout=StringIO())
