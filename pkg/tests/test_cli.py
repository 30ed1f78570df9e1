"""
Test Commands Module
====================

Tests for the check, reduce, safety and canon commands over the corpus,
and for the command-line entry point.
"""

import json
import os
import pytest
from pathlib import Path

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from core.config import Config
from core.exceptions import ConfigError, LinsessError
from core.logging import reset_logging
from main import main
from services.commands import (
    COMMANDS,
    EXIT_PARSE_ERROR,
    EXIT_STEP_LIMIT,
    OPEN_CONTEXT_WARNING,
    cmd_canon,
    cmd_check,
    cmd_reduce,
    cmd_safety,
    load_expectations,
)

CORPUS = Path(__file__).parent.parent / "corpus"
EXPECTATIONS = load_expectations()

CASES = [
    (name, command)
    for name, commands in sorted(EXPECTATIONS.items())
    for command in commands
]


@pytest.fixture
def config():
    return Config()


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    """No LINSESS_* variables, an empty config directory and fresh logging."""
    for name in list(os.environ):
        if name.startswith("LINSESS_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("LINSESS_CONFIG_DIR", str(tmp_path / "empty"))
    reset_logging()
    yield tmp_path
    reset_logging()


def run_case(name: str, command: str, config: Config):
    path = str(CORPUS / name)
    if command == "check_erased":
        return cmd_check(path, config, erase=True)
    return COMMANDS[command](path, config)


class TestCorpusExpectations:
    """Every expectation recorded for the corpus."""

    @pytest.mark.parametrize("name,command", CASES, ids=[f"{n}-{c}" for n, c in CASES])
    def test_expectation(self, name, command, config):
        expected = EXPECTATIONS[name][command]
        report = run_case(name, command, config)
        assert report.verdict == expected["verdict"]
        assert report.exit_code == expected["exit_code"]
        if "steps" in expected:
            assert report.result["steps"] == expected["steps"]
        if "code" in expected:
            assert report.diagnostics[0]["code"] == expected["code"]

    def test_expectations_file_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            load_expectations(str(tmp_path / "missing.yaml"))
        listed = tmp_path / "list.yaml"
        listed.write_text("- a\n- b\n")
        with pytest.raises(ConfigError):
            load_expectations(str(listed))


class TestCommands:
    """Report contents of the individual commands."""

    def test_check_accept(self, config):
        report = cmd_check(str(CORPUS / "system_ok.lsp"), config)
        assert report.verdict == "accept"
        assert report.warnings == []
        assert report.lines == ["residual: (empty)"]
        assert report.result["erased"] is False

    def test_check_warns_on_open_context(self, config):
        report = cmd_check(str(CORPUS / "assert_open.lsp"), config)
        assert report.verdict == "accept"
        assert report.warnings == [OPEN_CONTEXT_WARNING]

    def test_warning_can_be_disabled(self, config):
        config.checker.warn_non_unrestricted_context = False
        assert cmd_check(str(CORPUS / "assert_open.lsp"), config).warnings == []

    def test_no_warning_for_recursive_unrestricted_context(self, config, tmp_path):
        program = tmp_path / "server.lsp"
        program.write_text("context u : rec t. un?nat. t;\nmain = 0\n")
        report = cmd_check(str(program), config)
        assert report.verdict == "accept"
        assert report.warnings == []

    def test_check_with_context_file(self, config, tmp_path):
        program = tmp_path / "open.lsp"
        program.write_text("main = assert A. 0\n")
        context = tmp_path / "ctx.lsp"
        context.write_text("A\n")
        assert cmd_check(str(program), config).verdict == "reject"
        report = cmd_check(str(program), config, context_path=str(context))
        assert report.verdict == "accept"
        assert report.warnings == [OPEN_CONTEXT_WARNING]

    def test_oracle_uses_configured_fuel(self, config, tmp_path):
        program = tmp_path / "pair.lsp"
        program.write_text("main = new x y : lin!nat. end (x!1. 0 | y?z. 0)\n")
        report = cmd_check(str(program), config, oracle=True)
        assert report.result["oracle"] == "agree"
        assert report.lines[-1] == "oracle: agree"
        config.checker.reference_fuel = 1
        report = cmd_check(str(program), config, oracle=True)
        assert report.verdict == "accept"
        assert report.result["oracle"] == "inconclusive"

    def test_oracle_on_rejected_program(self, config, tmp_path):
        program = tmp_path / "leak.lsp"
        program.write_text("main = new x y : lin!nat. end x!1. 0\n")
        report = cmd_check(str(program), config, oracle=True)
        assert report.verdict == "reject"
        assert report.result["oracle"] == "agree"

    def test_check_reject_diagnostics(self, config):
        report = cmd_check(str(CORPUS / "system_doublecharge.lsp"), config)
        assert report.diagnostics[0]["code"] == "E-FORMULA"
        assert report.lines[0].startswith("E-FORMULA: ")
        assert any("E-FORMULA" in line for line in report.diagnostic_lines())

    def test_parse_error(self, config, tmp_path):
        broken = tmp_path / "broken.lsp"
        broken.write_text("main = x!\n")
        for command in COMMANDS.values():
            report = command(str(broken), config)
            assert report.verdict == "parse-error"
            assert report.exit_code == EXIT_PARSE_ERROR
            assert report.diagnostics[0]["code"] == "E-SYNTAX"

    def test_missing_file(self, config, tmp_path):
        with pytest.raises(LinsessError):
            cmd_check(str(tmp_path / "absent.lsp"), config)

    def test_reduce_trace(self, config):
        report = cmd_reduce(str(CORPUS / "system_ok.lsp"), config, trace=True)
        assert report.trace is not None
        assert report.lines[0].startswith("step 1: Com s1->s2")
        assert report.lines[-1].startswith("terminal: new ")

    def test_reduce_without_trace(self, config):
        report = cmd_reduce(str(CORPUS / "system_ok.lsp"), config)
        assert report.trace is None
        assert report.lines[0] == "steps: 7"

    def test_reduce_reports_unmatched(self, config):
        report = cmd_reduce(str(CORPUS / "system_overcharge_dynamic.lsp"), config)
        unmatched = [line for line in report.lines if line.startswith("unmatched: ")]
        assert unmatched == ["unmatched: assert charge(`c:ccard`,110)"]
        assert len(report.safety.witnesses) >= 1

    def test_reduce_step_limit(self, config, tmp_path):
        source = tmp_path / "loop.lsp"
        source.write_text("main = new s c : rec t. un?nat. t (*s?z. 0 | *c!1. 0)\n")
        config.reduction.max_steps = 3
        report = cmd_reduce(str(source), config)
        assert report.verdict == "step-limit"
        assert report.exit_code == EXIT_STEP_LIMIT
        assert report.result["steps"] == 3

    def test_safety_budget_override(self, config):
        path = str(CORPUS / "repl_assert.lsp")
        assert cmd_safety(path, config, unfold_budget=0).verdict == "safe"
        report = cmd_safety(path, config)
        assert report.verdict == "unsafe"
        assert any(line.startswith("witness: assert ") for line in report.lines)

    def test_safety_overcommitted(self, config):
        report = cmd_safety(str(CORPUS / "stuck_pair.lsp"), config)
        assert report.verdict == "safe"
        assert report.safety.overcommitted == []

    def test_canon(self, config):
        report = cmd_canon(str(CORPUS / "assume_scope.lsp"), config)
        assert report.result["restrictions"] == []
        assert report.result["assumptions"] == ["A"]
        assert report.result["threads"] == ["assert A. 0"]

    def test_report_to_dict(self, config):
        data = cmd_reduce(str(CORPUS / "assume_scope.lsp"), config, trace=True).to_dict()
        assert data["verdict"] == "terminated-clean"
        assert data["trace"]["steps"][0]["rule"] == "Assert"
        assert data["safety"]["safe"] is True


class TestMain:
    """The command-line entry point."""

    @pytest.mark.parametrize(
        "argv,code",
        [
            (["check", "corpus/system_ok.lsp"], 0),
            (["check", "corpus/system_overcharge.lsp"], 1),
            (["check", "corpus/system_overcharge_dynamic.lsp", "--erase"], 0),
            (["check", "corpus/inact.lsp", "--oracle"], 0),
            (["reduce", "corpus/system_doublecharge.lsp"], 3),
            (["reduce", "corpus/system_ok.lsp", "--policy", "random", "--seed", "3"], 0),
            (["safety", "corpus/repl_assert.lsp", "--unfold", "0"], 0),
            (["safety", "corpus/repl_assert.lsp"], 3),
            (["canon", "corpus/inact.lsp"], 0),
        ],
    )
    def test_exit_codes(self, clean_env, monkeypatch, argv, code):
        monkeypatch.chdir(CORPUS.parent)
        assert main(argv) == code

    def test_json_output(self, clean_env, monkeypatch, capsys):
        monkeypatch.chdir(CORPUS.parent)
        assert main(["reduce", "corpus/system_ok.lsp", "--json", "--trace"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["command"] == "reduce"
        assert data["result"]["steps"] == 7
        assert len(data["trace"]["steps"]) == 7

    def test_text_output(self, clean_env, monkeypatch, capsys):
        monkeypatch.chdir(CORPUS.parent)
        assert main(["check", "corpus/assert_open.lsp"]) == 0
        captured = capsys.readouterr()
        assert captured.out.startswith("check: accept")
        assert OPEN_CONTEXT_WARNING in captured.err

    def test_unmatched_printed_once(self, clean_env, monkeypatch, capsys):
        monkeypatch.chdir(CORPUS.parent)
        assert main(["reduce", "corpus/system_overcharge_dynamic.lsp"]) == 3
        captured = capsys.readouterr()
        assert (captured.out + captured.err).count("unmatched: assert charge") == 1

    def test_parse_error_exit(self, clean_env, capsys):
        broken = clean_env / "broken.lsp"
        broken.write_text("main = new x y 0\n")
        assert main(["check", str(broken)]) == EXIT_PARSE_ERROR
        assert "E-SYNTAX" in capsys.readouterr().err

    def test_missing_file_exit(self, clean_env, capsys):
        assert main(["safety", str(clean_env / "absent.lsp")]) == 1
        assert "Cannot read" in capsys.readouterr().err

    def test_invalid_override(self, clean_env):
        assert main(["reduce", "corpus/inact.lsp", "--max-steps", "-1"]) == 1

    def test_missing_command(self):
        with pytest.raises(SystemExit):
            main([])

    def test_log_files(self, clean_env, monkeypatch):
        monkeypatch.chdir(CORPUS.parent)
        log_dir = clean_env / "logs"
        assert main(["reduce", "corpus/assume_scope.lsp", "--debug", "--log-dir", str(log_dir)]) == 0
        text = (log_dir / "linsess.log").read_text()
        assert "step 1: Assert A" in text
        assert (log_dir / "errors.log").exists()
