import io
import json
import math
import tempfile
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from django.test.utils import override_settings
from openpyxl import load_workbook

from criteria.series import PowerSeries2D, write_series

from .demos import demo_manifest
from .manifest import RunManifest
from .runner import cmd_check, cmd_demo


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def dq(self, *args):
        """Runs ``dq``; returns the exit status and the captured stdout."""
        stdout = io.StringIO()
        try:
            call_command('dq', *args, stdout=stdout)
        except SystemExit as exc:
            return exc.code, stdout.getvalue()
        return 0, stdout.getvalue()

    def read(self, name):
        return json.loads((self.tmp / name).read_text(encoding='utf-8'))


class CheckCommandTest(CommandTestCase):
    def test_product_is_rejected_with_witness(self):
        out = self.tmp / 'report.json'
        status, _ = self.dq('check', '--criterion', 'algebraic', '--expr', 'a*b', '--out', str(out))
        self.assertEqual(status, 1)
        report = self.read('report.json')
        self.assertEqual(report['verdict'], 'reject')
        self.assertEqual(len(report['criteria'][0]['witness']), 3)
        first = report['criteria'][0]['samples'][0]
        self.assertEqual(first['sample'], [0.0, 0.5, 1.0])
        self.assertAlmostEqual(first['residual'], -0.25, delta=1e-15)

    def test_report_goes_to_stdout(self):
        status, stdout = self.dq('check', '--expr', 'a + b', '--count', '16')
        self.assertEqual(status, 0)
        report = json.loads(stdout)
        self.assertEqual(report['verdict'], 'accept')
        criteria = [run['criterion'] for run in report['criteria']]
        self.assertEqual(criteria, ['algebraic', 'matrix', 'integrable'])
        self.assertIsNone(report['wall_time'])

    def test_syntax_error_is_a_usage_error(self):
        with self.assertRaises(CommandError) as caught:
            self.dq('check', '--expr', '(((')
        self.assertEqual(caught.exception.returncode, 3)
        self.assertIn('position 3', str(caught.exception))

    def test_deep_nesting_is_a_usage_error(self):
        with self.assertRaises(CommandError) as caught:
            self.dq('check', '--expr', '(' * 2000 + 'a' + ')' * 2000)
        self.assertEqual(caught.exception.returncode, 3)
        self.assertIn('nested too deeply', str(caught.exception))

    def test_bad_flag_value_is_a_usage_error(self):
        with self.assertRaises(CommandError) as caught:
            self.dq('check', '--expr', 'a', '--criterion', 'quadratic')
        self.assertEqual(caught.exception.returncode, 3)

    def test_missing_subject(self):
        with self.assertRaises(CommandError) as caught:
            self.dq('check')
        self.assertEqual(caught.exception.returncode, 3)

    def test_summation_needs_a_series(self):
        with self.assertRaises(CommandError) as caught:
            self.dq('check', '--criterion', 'summation', '--expr', 'a*b')
        self.assertEqual(caught.exception.returncode, 3)

    def test_missing_series_file(self):
        with self.assertRaises(CommandError) as caught:
            self.dq('check', '--series', str(self.tmp / 'absent.coeffs'))
        self.assertEqual(caught.exception.returncode, 3)

    def test_inconclusive(self):
        status, stdout = self.dq(
            'check', '--criterion', 'integrable', '--expr', '1/(b-a)', '--count', '8'
        )
        self.assertEqual(status, 2)
        self.assertEqual(json.loads(stdout)['verdict'], 'inconclusive')

    def test_series_file(self):
        series = PowerSeries2D.from_function(lambda i, j: 1 / math.factorial(i + j), 20)
        path = self.tmp / 'xexp.coeffs'
        with open(path, 'w', encoding='utf-8') as handle:
            write_series(series, handle)
        status, stdout = self.dq('check', '--criterion', 'summation', '--series', str(path))
        self.assertEqual(status, 0)
        profile = json.loads(stdout)['criteria'][0]['details']['profile']
        for p in range(21):
            self.assertAlmostEqual(profile[str(p)], 1 / math.factorial(p), delta=1e-15)

    def test_exact_pool(self):
        status, stdout = self.dq(
            'check', '--criterion', 'matrix', '--expr', 'a + b',
            '--mode', 'exact', '--pool', '0, 1/3, 1/2*sqrt2, 1',
        )
        self.assertEqual(status, 0)
        self.assertTrue(json.loads(stdout)['criteria'][0]['all_residuals_zero'])


class RecoverCommandTest(CommandTestCase):
    def test_rejected_input_leaves_no_function_file(self):
        function_out = self.tmp / 'f.txt'
        status, _ = self.dq('recover', '--expr', 'a*b', '--function-out', str(function_out))
        self.assertEqual(status, 1)
        self.assertFalse(function_out.exists())

    def test_recovered_square(self):
        function_out = self.tmp / 'f.txt'
        status, stdout = self.dq(
            'recover', '--expr', 'a + b', '--criterion', 'algebraic',
            '--constant', '2', '--function-out', str(function_out),
        )
        self.assertEqual(status, 0)
        report = json.loads(stdout)
        self.assertEqual(report['recovery']['kind'], 'algebraic')
        self.assertEqual(report['roundtrip']['verdict'], 'accept')
        lines = function_out.read_text(encoding='utf-8').splitlines()
        self.assertEqual(lines[-1], 'C 2.0')
        self.assertEqual(lines[-2], '1.0 3.0')


class VerifyCommandTest(CommandTestCase):
    def test_cube_with_derivative(self):
        status, stdout = self.dq('verify', '--expr', 'x^3', '--derivative', '3*x^2')
        self.assertEqual(status, 0)
        report = json.loads(stdout)
        self.assertEqual(report['partials']['verdict'], 'accept')
        self.assertLessEqual(report['partials']['max_residual'], 1e-6)

    def test_wrong_derivative(self):
        status, _ = self.dq('verify', '--expr', 'x^3', '--derivative', 'x^2')
        self.assertEqual(status, 1)

    def test_without_derivative(self):
        status, stdout = self.dq('verify', '--expr', 'x^2')
        self.assertEqual(status, 0)
        report = json.loads(stdout)
        criteria = [run['criterion'] for run in report['criteria']]
        self.assertEqual(criteria, ['algebraic', 'matrix'])
        self.assertIsNone(report['partials'])

    def test_integrable_needs_derivative(self):
        with self.assertRaises(CommandError) as caught:
            self.dq('verify', '--expr', 'x^2', '--criterion', 'integrable')
        self.assertEqual(caught.exception.returncode, 3)


class DemoCommandTest(CommandTestCase):
    def test_dirichlet(self):
        out = self.tmp / 'dirichlet.json'
        status, _ = self.dq('demo', 'dirichlet', '--out', str(out))
        self.assertEqual(status, 0)
        report = self.read('dirichlet.json')
        self.assertTrue(report['criteria'][0]['all_residuals_zero'])
        self.assertTrue(report['roundtrip']['all_residuals_zero'])
        table = dict(report['recovery']['table'])
        self.assertEqual(table['1/4'], '1/1')
        self.assertEqual(table['1/1'], '1/1')
        self.assertEqual(table['0/1+1/2*sqrt2'], '0/1')
        self.assertEqual(table['0/1+1/3*sqrt2'], '0/1')

    def test_avg_exp(self):
        status, stdout = self.dq('demo', 'avg-exp')
        self.assertEqual(status, 0)
        report = json.loads(stdout)
        self.assertLessEqual(report['criteria'][0]['max_residual'], 1e-9)
        x, value = report['recovery']['table'][-1]
        self.assertEqual(x, 1.0)
        self.assertAlmostEqual(value, 1.4626517459071816, delta=1e-8)

    def test_xexp(self):
        status, stdout = self.dq('demo', 'xexp')
        self.assertEqual(status, 0)
        report = json.loads(stdout)
        coefficients = report['recovery']['coefficients']
        self.assertEqual(len(coefficients), 21)
        for p, c in enumerate(coefficients):
            self.assertAlmostEqual(c, 1 / math.factorial(p), delta=1e-15)
        self.assertTrue(report['criteria'][0]['notes'][0].endswith(': plausible'))

    def test_reports_are_byte_identical(self):
        for name in ('dirichlet', 'avg-exp', 'xexp'):
            with self.subTest(demo=name):
                first, second = self.tmp / f'{name}-1.json', self.tmp / f'{name}-2.json'
                self.dq('demo', name, '--out', str(first))
                self.dq('demo', name, '--out', str(second))
                self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_unknown_demo(self):
        with self.assertRaises(CommandError) as caught:
            self.dq('demo', 'zeta')
        self.assertEqual(caught.exception.returncode, 3)


class FromReportTest(CommandTestCase):
    def test_rerun_reproduces_the_report(self):
        first, second = self.tmp / 'first.json', self.tmp / 'second.json'
        status, _ = self.dq(
            'check', '--expr', 'exp(a) + b', '--seed', '7', '--count', '20', '--out', str(first)
        )
        self.assertEqual(status, 1)
        status, _ = self.dq('check', '--from-report', str(first), '--out', str(second))
        self.assertEqual(status, 1)
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_command_must_match(self):
        first = self.tmp / 'first.json'
        self.dq('check', '--expr', 'a + b', '--count', '4', '--out', str(first))
        with self.assertRaises(CommandError):
            self.dq('recover', '--from-report', str(first))

    def test_not_a_report(self):
        path = self.tmp / 'junk.json'
        path.write_text('[1, 2]', encoding='utf-8')
        with self.assertRaises(CommandError) as caught:
            self.dq('check', '--from-report', str(path))
        self.assertEqual(caught.exception.returncode, 3)


class WorkbookTest(CommandTestCase):
    def test_sheets(self):
        xlsx = self.tmp / 'dirichlet.xlsx'
        status, _ = self.dq('demo', 'dirichlet', '--xlsx', str(xlsx))
        self.assertEqual(status, 0)
        wb = load_workbook(xlsx)
        self.assertEqual(wb.sheetnames, ['Summary', 'algebraic', 'roundtrip', 'Recovery'])
        self.assertEqual(wb['Summary']['A1'].value, 'dq demo: accept')
        self.assertEqual(wb['Summary']['A4'].value, 'algebraic')
        self.assertEqual(wb['Recovery']['A3'].value, 'x')


class ManifestTest(SimpleTestCase):
    @override_settings(DQ_SEED=7, DQ_COUNT=5)
    def test_defaults_follow_settings(self):
        manifest = RunManifest()
        self.assertEqual(manifest.seed, 7)
        self.assertEqual(manifest.plan().count, 5)

    def test_demo_pins_ignore_settings(self):
        with override_settings(DQ_SEED=7):
            self.assertEqual(demo_manifest('xexp').seed, 42)

    def test_outputs_are_not_part_of_the_manifest(self):
        manifest = RunManifest(expr='a', out='report.json')
        self.assertNotIn('out', manifest.to_dict())
        self.assertEqual(RunManifest.from_dict(manifest.to_dict()).expr, 'a')

    def test_unknown_fields(self):
        with self.assertRaises(ValueError):
            RunManifest.from_dict({'command': 'check', 'colour': 'blue'})
        with self.assertRaises(ValueError):
            RunManifest(criterion='quadratic')

    @override_settings(DQ_REPORT_WALL_TIME=True)
    def test_wall_time(self):
        outcome = cmd_check(RunManifest(expr='a + b', count=4))
        self.assertIsInstance(outcome.wall_time, float)

    def test_demo_outcome(self):
        outcome = cmd_demo(RunManifest(command='demo', builtin='dirichlet'))
        self.assertEqual(outcome.exit_code, 0)
        self.assertEqual(outcome.manifest.variant, 'anchored')
