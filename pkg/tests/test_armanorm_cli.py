# type: ignore
"""
This file is part of armanorm.
Copyright (c) 2022 spezifisch (https://github.com/spezifisch)

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU Affero General Public License as
published by the Free Software Foundation, version 3 of the License.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU Affero General Public License for more details.

You should have received a copy of the GNU Affero General Public License
along with this program.  If not, see <https://www.gnu.org/licenses/>.
"""

import json
from unittest import TestCase
from unittest.mock import patch

from click.testing import CliRunner
from loguru import logger

from armanorm import __version__, armanorm_cli
from armanorm.armanorm_commands import cmd_examples, cmd_spectral_check, run_command
from armanorm.armanorm_report import Report
from armanorm.run_config import RunConfig


def test_version() -> None:
    assert __version__ == "0.1.0"


class TestArmanormCLI(TestCase):
    def setUp(self) -> None:
        self.mock_run_command = patch("armanorm.armanorm_commands.run_command", spec_set=run_command).start()
        self.addCleanup(patch.stopall)

    def test_help(self):
        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["--help"])
        assert result.exit_code == 0
        assert result.output.startswith("Usage:")
        for command in ("examples", "figure1", "optimize", "conjecture", "spectral-check", "simulate"):
            assert command in result.output

    def test_config_not_found(self):
        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["--config", "not-an-existing-file-foo.bar", "examples"])
        assert result.exit_code == 1
        assert "No such file" in result.output
        self.mock_run_command.assert_not_called()

    def test_config_bad_format(self):
        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["--config", "tests/data/config.bad-format.yaml", "examples"])
        assert result.exit_code == 1
        assert "config file parsing error" in result.output

    def test_config_unknown_key(self):
        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["--config", "tests/data/config.unknown-key.yaml", "examples"])
        assert result.exit_code == 1
        assert "max_degree" in result.output

    def test_config_bad_order(self):
        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["--config", "tests/data/config.bad-order.yaml", "examples"])
        assert result.exit_code == 1
        assert "invalid order" in result.output
        self.mock_run_command.assert_not_called()

    def test_loglevel_trace(self):
        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["--trace", "--config", "not-an-existing-file-foo.bar", "examples"])
        assert result.exit_code == 1
        assert "level=5" in str(logger)  # hacky but loguru doesn't have a way to request the loglevel

    def test_loglevel_debug(self):
        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["--debug", "--config", "not-an-existing-file-foo.bar", "examples"])
        assert result.exit_code == 1
        assert "level=10" in str(logger)

    def test_success(self):
        self.mock_run_command.return_value = Report("examples", RunConfig(), ("value",))

        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["--config", "tests/data/success.yaml", "examples", "--seed", "9"])
        assert result.exit_code == 0
        assert result.output == "value\n"

        command, config = self.mock_run_command.call_args.args
        assert command is cmd_examples
        # file values, then command line overrides
        assert config.order == 128
        assert config.budget == 200
        assert config.seed == 9
        assert config.output_format == "csv"

    def test_failed_check(self):
        report = Report("spectral-check", RunConfig(), ("value",))
        report.add_check("hinf_h0", 0.0)
        self.mock_run_command.return_value = report

        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["spectral-check", "--ns", "2,8", "--functions", "constant"])
        assert result.exit_code == 1
        assert "# check hinf_h0 = 0.0" in result.output

        command, _ = self.mock_run_command.call_args.args
        assert command is cmd_spectral_check
        assert self.mock_run_command.call_args.kwargs == {"ns": [2, 8], "functions": ("constant",), "hinf_order": 1024}

    def test_failure(self):
        self.mock_run_command.return_value = None

        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["figure1", "--grid", "128"])
        assert result.exit_code == 1
        assert self.mock_run_command.call_args.kwargs == {"grid": 128}

    def test_bad_parameters(self):
        runner = CliRunner()
        result = runner.invoke(armanorm_cli.run, ["conjecture", "--budgets", "2,x"])
        assert result.exit_code == 2
        result = runner.invoke(armanorm_cli.run, ["figure1", "--grid", "8"])
        assert result.exit_code == 2
        self.mock_run_command.assert_not_called()

    def test_json_flag(self):
        self.mock_run_command.return_value = None

        runner = CliRunner()
        runner.invoke(armanorm_cli.run, ["optimize", "--json", "--m", "2", "--n", "0", "--target", "geometric"])
        command, config = self.mock_run_command.call_args.args
        assert config.output_format == "json"
        assert self.mock_run_command.call_args.kwargs == {"m": 2, "n": 0, "target": "geometric"}


def test_examples_to_file(tmp_path) -> None:
    runner = CliRunner()
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    for path in (first, second):
        result = runner.invoke(armanorm_cli.run, ["examples", "--out", str(path)])
        assert result.exit_code == 0

    text = first.read_text(encoding="utf-8")
    assert text == second.read_text(encoding="utf-8")
    assert "# check log_half_linf = " in text
    assert "FAIL" not in text
    assert "section,quantity,value,expected,status\n" in text


def test_figure1_json(tmp_path) -> None:
    path = tmp_path / "figure1.json"
    runner = CliRunner()
    result = runner.invoke(armanorm_cli.run, ["figure1", "--grid", "64", "--json", "--out", str(path)])
    assert result.exit_code == 0

    document = json.loads(path.read_text(encoding="utf-8"))
    assert document["command"] == "figure1"
    assert document["config"]["output_format"] == "json"
    assert len(document["results"]["table"]["rows"]) == 65
    assert {check["status"] for check in document["checks"]} == {"PASS"}


def test_simulate(tmp_path) -> None:
    path = tmp_path / "path.csv"
    runner = CliRunner()
    arguments = ["simulate", "--ar=-0.5", "--ma", "1,0.3", "--length", "5", "--out", str(path)]
    result = runner.invoke(armanorm_cli.run, arguments)
    assert result.exit_code == 0
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "y"
    assert len(lines) == 6


def test_simulate_nonstationary(tmp_path) -> None:
    runner = CliRunner()
    result = runner.invoke(armanorm_cli.run, ["simulate", "--ar=-2", "--out", str(tmp_path / "path.csv")])
    assert result.exit_code == 1
    assert not (tmp_path / "path.csv").exists()


def test_seeded_optimize_is_reproducible(tmp_path) -> None:
    runner = CliRunner()
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    for path in paths:
        arguments = ["optimize", "--order", "128", "--budget", "100", "--restarts", "2", "--seed", "7", "--json"]
        runner.invoke(armanorm_cli.run, arguments + ["--out", str(path)])

    assert paths[0].exists()
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert json.loads(paths[0].read_text(encoding="utf-8"))["config"]["seed"] == 7
