import json
import os
import tempfile
from io import StringIO

import jsonschema
from django.core import management
from django.core.management import CommandError
from django.test import SimpleTestCase

from thurston.cli import report_schema, run_command


class ThurstonCommandTestCase(SimpleTestCase):
    @staticmethod
    def call_command(command, *args, **kwargs):
        out = StringIO()
        name = "thurston_" + command.replace("-", "_")
        management.call_command(name, *args, stdout=out, stderr=StringIO(), **kwargs)
        return out.getvalue()

    def test__thurston__orbifold(self):
        out = self.call_command("orbifold", "z2")

        self.assertEqual(out, "signature (∞,∞), chi = 0, parabolic\n")

    def test__thurston__decide_same_map(self):
        out = self.call_command("decide", "z2", "z2")

        self.assertEqual(out, "Equivalent (identity)\n")

    def test__thurston__unknown_map_raises_exc(self):
        with self.assertRaisesMessage(CommandError, "error: "):
            self.call_command("orbifold", "no-such-map")

    def test__thurston__inconclusive_raises_exc(self):
        with self.assertRaisesMessage(CommandError, "Inconclusive within budget."):
            self.call_command("obstruct", "levy-disk", "--budget-seconds", "-1")

    def test__thurston_matrix_conjugacy__keyword_options(self):
        out = self.call_command("matrix-conjugacy", a1="2 1 1 1", a2="3 1 1 1")

        self.assertEqual(out, "not conjugate in GL2(Z)\n")

    def test__thurston_orbifold__affine_section(self):
        out = self.call_command("orbifold", "affine-2z")

        self.assertEqual(out, "signature (2,2,2,2), chi = 0, parabolic\n")


class RunCommandTestCase(SimpleTestCase):
    @staticmethod
    def json_report(argv):
        report = run_command(list(argv) + ["--json"])
        data = json.loads(report.render())
        jsonschema.validate(instance=data, schema=report_schema())
        return report, data

    def test__orbifold__lattes(self):
        report = run_command(["orbifold", "lattes2"])

        self.assertEqual(report.exit_code, 0)
        self.assertEqual(report.render(), "signature (2,2,2,2), chi = 0, parabolic\n")

    def test__orbifold__hyperbolic_json(self):
        report, data = self.json_report(["orbifold", "basilica"])

        self.assertEqual(report.exit_code, 0)
        self.assertEqual(data["status"], "decided")
        self.assertEqual(data["result"]["signature"], ["∞", "∞", "∞"])
        self.assertEqual(data["result"]["euler"], "-1")
        self.assertEqual(data["result"]["kind"], "hyperbolic")

    def test__orbifold__affine_section_weights(self):
        report, data = self.json_report(["orbifold", "affine-1-i"])

        self.assertEqual(report.exit_code, 0)
        self.assertEqual(data["result"]["signature"], ["2", "2", "2", "2"])
        self.assertEqual(data["result"]["euler"], "0")
        self.assertEqual(set(data["result"]["weights"].values()), {"2"})

    def test__orbifold__marked_lattes_weights(self):
        report, data = self.json_report(["orbifold", "lattes2-marked"])

        self.assertEqual(report.exit_code, 0)
        self.assertEqual(data["result"]["signature"], ["2", "2", "2", "2"])
        self.assertEqual(sorted(data["result"]["weights"].values()), ["1", "2", "2", "2", "2"])

    def test__validate__bundled_map(self):
        report = run_command(["validate", "z2"])

        self.assertEqual(report.exit_code, 0)
        self.assertTrue(report.lines[0].startswith("valid PL Thurston map: degree 2"))

    def test__matrix_conjugacy__conjugate_pair(self):
        report, data = self.json_report(["matrix-conjugacy", "--a1", "2 1 1 1", "--a2", "1 1 1 2"])

        self.assertEqual(report.exit_code, 0)
        self.assertTrue(data["result"]["conjugate"])

    def test__matrix_conjugacy__different_trace(self):
        report = run_command(["matrix-conjugacy", "--a1", "2 1 1 1", "--a2", "3 1 1 1"])

        self.assertEqual(report.exit_code, 0)
        self.assertEqual(report.render(), "not conjugate in GL2(Z)\n")

    def test__matrix_conjugacy__malformed_matrix(self):
        report = run_command(["matrix-conjugacy", "--a1", "2 1", "--a2", "1 1 1 2"])

        self.assertEqual(report.exit_code, 1)
        self.assertIn("--a1 expects four integers", report.render())

    def test__decide__degree_differs(self):
        report, data = self.json_report(["decide", "z2", "z3"])

        self.assertEqual(report.exit_code, 0)
        self.assertFalse(data["result"]["equivalent"])
        self.assertEqual(data["result"]["invariant"], "degree")

    def test__obstruct__levy_disk(self):
        report, data = self.json_report(["obstruct", "levy-disk", "--max-weight", "4"])

        self.assertEqual(report.exit_code, 0)
        self.assertTrue(data["result"]["obstructed"])
        self.assertEqual(len(data["result"]["curves"]), 1)

    def test__obstruct__out_of_time(self):
        report, data = self.json_report(["obstruct", "levy-disk", "--budget-seconds", "-1"])

        self.assertEqual(report.exit_code, 2)
        self.assertEqual(data["status"], "inconclusive")
        self.assertEqual(data["result"]["reason"], "budget_exhausted")
        self.assertEqual(data["result"]["budget"]["seconds"], -1)

    def test__unknown_flag(self):
        report, data = self.json_report(["orbifold", "z2", "--no-such-flag"])

        self.assertEqual(report.exit_code, 1)
        self.assertEqual(data["status"], "error")
        self.assertEqual(data["error"]["type"], "UsageError")

    def test__missing_command(self):
        report = run_command([])

        self.assertEqual(report.exit_code, 1)
        self.assertIsNone(report.command)

    def test__export_corpus(self):
        with tempfile.TemporaryDirectory() as directory:
            report = run_command(["export-corpus", directory])

            self.assertEqual(report.exit_code, 0)
            self.assertIn("z2", report.result["written"])
            self.assertIn("affine-2z", report.result["written"])
            for name in report.result["written"]:
                self.assertTrue(os.path.exists(os.path.join(directory, name + ".json")))
            validated = run_command(["validate", os.path.join(directory, "z2.json")])
            self.assertEqual(validated.exit_code, 0)
