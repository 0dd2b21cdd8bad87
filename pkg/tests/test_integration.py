"""
Integration tests for the turyn-storer-audit command line.

Tests cover:
- verify, falsify, barker and rle runs with text and JSON output
- Exit codes for every report status
- Worker count from the environment
- Table output written with --out
"""

import json
import os
import sys
import unittest
from io import StringIO
from unittest.mock import patch

# Add parent directory to path to import the package under test
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from turyn_storer_audit import cli
from turyn_storer_audit.falsifier import parse_catalog_table
from turyn_storer_audit.seqcore import format_rle
from tests.test_base import BaseAuditTest


def run_cli(argv):
    """Run main() and return (exit code, stdout, stderr)."""
    with patch('sys.stdout', new_callable=StringIO) as out, \
            patch('sys.stderr', new_callable=StringIO) as err:
        code = cli.main(argv)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):
    code, out, _ = run_cli(argv + ['--json'])
    return code, json.loads(out)


class TestVerifyCommand(unittest.TestCase):
    """Test the verify subcommand."""

    def test_catalog_prefix_is_falsified(self):
        """Test that claim (iv) fails on the first catalog prefix."""
        code, report = run_json(['verify', '--rle', '+3,3,6,3,2,2', '--t', '9', '--pad', '20'])
        self.assertEqual(code, 1)
        self.assertEqual(report['status'], 'falsified')
        verdicts = report['verdicts']
        self.assertEqual(verdicts['claims'], {'i': True, 'ii': True, 'iii': True, 'iv': False})
        self.assertEqual(verdicts['failing_iv_k'], [3])
        self.assertEqual(verdicts['max_t'], 9)
        self.assertEqual(report['inputs']['n'], 20)

    def test_rle_without_sign_defaults_to_plus(self):
        """Test that the command line accepts an unsigned encoding."""
        code, report = run_json(['verify', '--rle', '(3,3,6,3,2,2)', '--t', '9'])
        self.assertEqual(code, 1)
        self.assertEqual(report['inputs']['sequence'], "+++---++++++---++--")

    def test_claims_hold(self):
        """Test a sequence where the premise and every claim hold."""
        code, out, _ = run_cli(['verify', '--seq', '+++++--++-+-+', '--t', '1'])
        self.assertEqual(code, 0)
        self.assertIn("✅", out)

    def test_premise_not_satisfied(self):
        """Test that a failed premise is an error, not a counterexample."""
        code, report = run_json(['verify', '--seq=-++', '--t', '1'])
        self.assertEqual(code, 1)
        self.assertEqual(report['status'], 'error')
        self.assertFalse(report['verdicts']['premise_ok'])
        self.assertIsNone(report['verdicts']['claims']['iv'])

    def test_text_output_omits_undefined_p(self):
        """Test that text output leaves p out when the leading element is -1."""
        code, out, _ = run_cli(['verify', '--seq=-++', '--t', '1'])
        self.assertEqual(code, 1)
        self.assertNotIn("p=None", out)
        self.assertIn("t=1  max_t=", out)
        _, out, _ = run_cli(['verify', '--rle', '+3,3,6,3,2,2', '--t', '9'])
        self.assertIn("t=9  p=3  max_t=", out)

    def test_text_output_lists_premise_failures(self):
        """Test the readable form of a failed premise."""
        code, out, _ = run_cli(['verify', '--seq', '++++', '--t', '1'])
        self.assertEqual(code, 1)
        self.assertIn("Premise", out)
        self.assertIn("no -1 follows", out)

    def test_usage_errors(self):
        """Test that malformed input exits with 2."""
        code, report = run_json(['verify', '--rle', '+3,x', '--t', '2'])
        self.assertEqual(code, 2)
        self.assertEqual(report['status'], 'usage')
        code, _, err = run_cli(['verify', '--seq', '+-?', '--t', '1'])
        self.assertEqual(code, 2)
        self.assertIn("❌ Error:", err)
        code, _, _ = run_cli(['verify', '--seq', '+++', '--t', '0'])
        self.assertEqual(code, 2)
        code, _, _ = run_cli(['verify', '--seq', '+++', '--t', '1', '--pad', '2'])
        self.assertEqual(code, 2)
        self.assertEqual(run_cli(['verify', '--rle', '+0,3', '--t', '1'])[0], 2)

    def test_constant_sequence_has_no_premise(self):
        """Test that a sequence without a -1 exits 1 with status error."""
        code, report = run_json(['verify', '--seq', '+++', '--t', '1'])
        self.assertEqual(code, 1)
        self.assertEqual(report['status'], 'error')


class TestFalsifyCommand(BaseAuditTest):
    """Test the falsify subcommand."""

    def test_catalog(self):
        """Test that the catalog is emitted and re-verified."""
        code, report = run_json(['falsify', '--catalog'])
        self.assertEqual(code, 0)
        self.assertEqual(report['status'], 'found')
        self.assertEqual(report['verdicts']['count'], 4)
        self.assertEqual(report['verdicts']['records'][0]['rle'], "+3,3,6,3,2,2")

    def test_family(self):
        """Test one family member and an invalid p."""
        code, report = run_json(['falsify', '--family', '--p', '5'])
        self.assertEqual(code, 0)
        self.assertEqual(report['verdicts']['records'][0]['rle'], "+5,5,10,5,4,4")
        self.assertEqual(run_cli(['falsify', '--family', '--p', '4'])[0], 2)
        self.assertEqual(run_cli(['falsify', '--family'])[0], 2)

    def test_empty_search(self):
        """Test that a search without counterexamples exits with 1."""
        code, report = run_json(['falsify', '--p', '3', '--t', '5'])
        self.assertEqual(code, 1)
        self.assertEqual(report['status'], 'empty')
        self.assertEqual(report['verdicts']['records'], [])
        self.assertEqual(run_cli(['falsify', '--p', '3', '--t', '2'])[0], 1)

    def test_search_with_table_output(self):
        """Test that --out writes a table holding the catalog prefix."""
        path = self.temp_path("found.tsv")
        code, out, _ = run_cli(['falsify', '--p', '3', '--t', '9', '--out', path])
        self.assertEqual(code, 0)
        self.assertIn("+3,3,6,3,2,2", out)
        with open(path, encoding='utf-8') as f:
            records = parse_catalog_table(f.read())
        self.assertIn("+3,3,6,3,2,2", [format_rle(r.rle) for r in records])

    def test_search_usage(self):
        """Test that a search needs both --p and --t."""
        self.assertEqual(run_cli(['falsify', '--p', '3'])[0], 2)
        self.assertEqual(run_cli(['falsify', '--p', '2', '--t', '5'])[0], 2)


class TestBarkerCommand(unittest.TestCase):
    """Test the barker subcommand."""

    def test_single_length(self):
        """Test listing the Barker sequences of length 13 with profiles."""
        code, report = run_json(['barker', '--n', '13', '--profile'])
        self.assertEqual(code, 0)
        verdicts = report['verdicts']
        self.assertEqual(verdicts['count'], 4)
        self.assertIn("+++++--++-+-+", verdicts['sequences'])
        self.assertEqual(set(verdicts['eq_k_profiles']), set(verdicts['sequences']))
        self.assertNotIn('elapsed', verdicts)

    def test_timing_goes_to_stderr(self):
        """Test that text mode keeps the timing line off stdout."""
        code, out, err = run_cli(['barker', '--n', '5'])
        self.assertEqual(code, 0)
        self.assertIn("4 Barker sequence(s) of length 5", out)
        self.assertIn("n=5", err)

    def test_odd_scan(self):
        """Test the odd-length scan up to 19."""
        code, report = run_json(['barker', '--odd-scan', '19'])
        self.assertEqual(code, 0)
        self.assertEqual(report['verdicts']['anomalies'], [])
        self.assertEqual([e['n'] for e in report['verdicts']['counts']], [15, 17, 19])

    def test_out_of_range(self):
        """Test that lengths outside the bounds are usage errors."""
        self.assertEqual(run_cli(['barker', '--n', '1'])[0], 2)
        self.assertEqual(run_cli(['barker', '--n', '40'])[0], 2)


class TestRleCommand(unittest.TestCase):
    """Test the rle subcommand."""

    def test_decode(self):
        """Test decoding with and without a sign."""
        self.assertEqual(run_cli(['rle', 'decode', '+3,3,6,3,2,2'])[1].strip(), "+++---++++++---++--")
        self.assertEqual(run_cli(['rle', 'decode', '3,3'])[1].strip(), "+++---")

    def test_encode(self):
        """Test encoding literals into signed run lengths."""
        self.assertEqual(run_cli(['rle', 'encode', '+++---++'])[1].strip(), "+3,3,2")
        self.assertEqual(run_cli(['rle', 'encode', '+-+'])[1].strip(), "+1,1,1")
        self.assertEqual(run_cli(['rle', 'encode', '+++++'])[1].strip(), "+5")

    def test_invalid_input(self):
        """Test that bad input exits with 2."""
        self.assertEqual(run_cli(['rle', 'decode', '+0,2'])[0], 2)
        self.assertEqual(run_cli(['rle', 'encode'])[0], 2)


class TestRunReport(unittest.TestCase):
    """Test the report object and the worker configuration."""

    def test_json_round_trip(self):
        """Test that a report survives to_json and from_json."""
        report = cli.RunReport('rle', {'action': 'decode'}, {'output': '+++'}, 'ok')
        self.assertEqual(cli.RunReport.from_json(report.to_json()), report)
        self.assertEqual(report.exit_code, 0)
        self.assertEqual(report.tool_version, cli.TOOL_VERSION)

    def test_unknown_status(self):
        """Test that statuses outside the exit code map are rejected."""
        with self.assertRaises(ValueError):
            cli.RunReport('verify', status='maybe')

    def test_exit_codes(self):
        """Test the status to exit code map."""
        self.assertEqual(cli.STATUS_EXIT_CODES['ok'], 0)
        self.assertEqual(cli.STATUS_EXIT_CODES['found'], 0)
        self.assertEqual(cli.STATUS_EXIT_CODES['falsified'], 1)
        self.assertEqual(cli.STATUS_EXIT_CODES['usage'], 2)

    def test_threads_from_environment(self):
        """Test the environment variable and its fallback."""
        with patch.dict(os.environ, {cli.THREADS_ENV_VAR: '3'}):
            self.assertEqual(cli.default_thread_count(), 3)
        with patch.dict(os.environ, {cli.THREADS_ENV_VAR: 'many'}), \
                patch('sys.stderr', new_callable=StringIO) as err:
            self.assertEqual(cli.default_thread_count(), 1)
        self.assertIn("Warning", err.getvalue())
        with patch.dict(os.environ, {cli.THREADS_ENV_VAR: ''}):
            self.assertEqual(cli.default_thread_count(), 1)

    def test_invalid_threads_flag(self):
        """Test that --threads 0 is rejected by the parser."""
        with patch('sys.stderr', new_callable=StringIO):
            with self.assertRaises(SystemExit) as cm:
                cli.main(['barker', '--n', '5', '--threads', '0'])
        self.assertEqual(cm.exception.code, 2)

    def test_version(self):
        """Test --version."""
        with patch('sys.stdout', new_callable=StringIO) as out:
            with self.assertRaises(SystemExit) as cm:
                cli.main(['--version'])
        self.assertEqual(cm.exception.code, 0)
        self.assertIn(cli.TOOL_VERSION, out.getvalue())


if __name__ == '__main__':
    unittest.main()
