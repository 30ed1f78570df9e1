"""
Commands - check, reduce, safety and canon over .lsp files
==========================================================

Each command reads one source file, runs the library operation behind it
and packs the outcome into a Report:
- check: type-check the main process (optionally against a --context file)
- reduce: run the reduction engine and classify the terminal process
- safety: decide assertion safety within an unfolding budget
- canon: show the canonical form of the main process

Library errors become verdicts and exit codes here; nothing below this
module prints.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import yaml

from checker import CheckResult, check_program_erased, reference_check, typecheck
from core.config import Config
from core.exceptions import ConfigError, FuelExhausted, LinsessError, ParseError
from core.logging import get_logger
from parsing import Program, expand_macros, parse_context, parse_program
from parsing.printer import pretty_context, pretty_formula, pretty_print, pretty_type
from semantics import SafetyReport, Trace, Verdict, canonicalize, check_safety, run
from syntax import Context, is_unrestricted_context, normalize_names

logger = get_logger("services.commands")

EXIT_OK = 0
EXIT_TYPE_ERROR = 1
EXIT_PARSE_ERROR = 2
EXIT_STUCK = 3
EXIT_STEP_LIMIT = 4

OPEN_CONTEXT_WARNING = "processes typable under arbitrary contexts may not be safe"

EXPECTATIONS_PATH = Path(__file__).resolve().parent.parent / "corpus" / "expectations.yaml"

_REDUCE_EXIT = {
    Verdict.TERMINATED_CLEAN: EXIT_OK,
    Verdict.STUCK_ASSERT: EXIT_STUCK,
    Verdict.STUCK_IO: EXIT_STUCK,
    Verdict.STEP_LIMIT: EXIT_STEP_LIMIT,
}


@dataclass
class Report:
    """
    Outcome of one command.

    Attributes:
        command: check, reduce, safety or canon
        file: Source path as given
        verdict: accept, reject, parse-error, safe, unsafe, canonical or a reduction verdict
        diagnostics: Parser diagnostics or type errors as dictionaries
        trace: Reduction trace when one was requested
        safety: Safety report (safety and reduce)
        exit_code: 0 iff the verdict is accept, safe, terminated-clean or canonical
        result: Command-specific structured content
        lines: Human-readable report body
        warnings: Non-fatal findings
    """
    command: str
    file: str
    verdict: str
    diagnostics: List[Dict[str, Any]] = field(default_factory=list)
    trace: Optional[Trace] = None
    safety: Optional[SafetyReport] = None
    exit_code: int = EXIT_OK
    result: Dict[str, Any] = field(default_factory=dict)
    lines: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "command": self.command,
            "file": self.file,
            "verdict": self.verdict,
            "exit_code": self.exit_code,
            "diagnostics": self.diagnostics,
            "warnings": self.warnings,
            "result": self.result,
            "trace": self.trace.to_dict() if self.trace is not None else None,
            "safety": self.safety.to_dict() if self.safety is not None else None,
        }

    def render(self, as_json: bool = False) -> str:
        """Report text for stdout: one JSON object, or the verdict followed by the body."""
        if as_json:
            return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)
        return "\n".join([f"{self.command}: {self.verdict}", *self.lines])

    def diagnostic_lines(self) -> List[str]:
        """Diagnostics and warnings for stderr."""
        out = [f"{self.file}: warning: {w}" for w in self.warnings]
        for d in self.diagnostics:
            span = d.get("span")
            where = f"{span[0]}-{span[1]}" if span else "-"
            out.append(f"{self.file}:{where}: {d['code']}: {d['message']}")
            out.extend(f"    {entry}" for entry in d.get("context") or [])
        return out


# =============================================================================
# Helpers
# =============================================================================

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise LinsessError(f"Cannot read {path}: {e.strerror or e}", {"path": path}) from e


def _parse_failure(command: str, path: str, error: ParseError) -> Report:
    logger.info(f"Parse error in {path}: {', '.join(error.codes) or error.message}")
    return Report(
        command=command,
        file=path,
        verdict="parse-error",
        diagnostics=[d.to_dict() for d in error.diagnostics],
        exit_code=EXIT_PARSE_ERROR,
    )


def _show(term, config: Config) -> str:
    return pretty_print(normalize_names(term) if config.output.normalize_names else term)


def _load(command: str, path: str):
    """(program, main) or a parse-error Report."""
    try:
        program = parse_program(_read(path))
        return program, expand_macros(program), None
    except ParseError as e:
        return None, None, _parse_failure(command, path, e)


# =============================================================================
# Commands
# =============================================================================

def cmd_check(
    path: str,
    config: Config,
    context_path: Optional[str] = None,
    erase: bool = False,
    oracle: bool = False,
) -> Report:
    """
    Type-check a program's main process.

    Args:
        path: .lsp source file
        config: Loaded configuration
        context_path: File declaring the typing context (overrides the program's own)
        erase: Check with every assume, assert and refinement removed
        oracle: Also run the exhaustive reference checker (fuel from
            config.checker.reference_fuel) and report whether it agrees

    Returns:
        Report with verdict accept or reject (exit 0 or 1), parse-error (exit 2)
    """
    try:
        program: Program = parse_program(_read(path))
        context: Context = program.context
        if context_path:
            context = parse_context(_read(context_path), program)
    except ParseError as e:
        return _parse_failure("check", path, e)

    report = Report(command="check", file=path, verdict="accept")
    if config.checker.warn_non_unrestricted_context and not is_unrestricted_context(context):
        report.warnings.append(OPEN_CONTEXT_WARNING)
        logger.warning(f"Context {pretty_context(context)} is not unrestricted: {OPEN_CONTEXT_WARNING}")

    try:
        result: CheckResult = check_program_erased(program, context) if erase else typecheck(program, context)
    except ParseError as e:
        return _parse_failure("check", path, e)

    report.result = result.to_dict()
    report.result["erased"] = erase
    if result.accepted:
        residual = pretty_context(result.residual) if result.residual else ""
        report.lines = [f"residual: {residual or '(empty)'}"]
    else:
        report.verdict = "reject"
        report.exit_code = EXIT_TYPE_ERROR
        report.diagnostics = [e.to_dict() for e in result.errors]
        report.lines = [f"{e.code}: {e.explanation}" for e in result.errors]

    if oracle and not erase:
        agreement = _cross_check(program, context, result.accepted, config.checker.reference_fuel)
        report.result["oracle"] = agreement
        report.lines.append(f"oracle: {agreement}")
    return report


def _cross_check(program: Program, context: Context, accepted: bool, fuel: int) -> str:
    """agree, disagree, or inconclusive when the reference search runs out of fuel."""
    try:
        expected = reference_check(context, expand_macros(program), fuel=fuel)
    except FuelExhausted:
        logger.info(f"Reference checker ran out of fuel ({fuel} judgements)")
        return "inconclusive"
    if expected != accepted:
        logger.error(f"Checkers disagree: algorithmic {accepted}, reference {expected}")
        return "disagree"
    return "agree"


def cmd_reduce(path: str, config: Config, trace: Optional[bool] = None) -> Report:
    """
    Reduce a program's main process.

    Args:
        path: .lsp source file
        config: Supplies max_steps, policy, seed and the unfolding budget
        trace: Include the step log (defaults to config.output.trace)

    Returns:
        Report whose verdict is the run's verdict; exit 0 terminated-clean,
        3 stuck, 4 step-limit, 2 parse error
    """
    _, main, failure = _load("reduce", path)
    if failure:
        return failure
    with_trace = config.output.trace if trace is None else trace

    outcome = run(
        main,
        max_steps=config.reduction.max_steps,
        policy=config.reduction.policy,
        seed=config.reduction.seed,
        unfold_budget=config.safety.unfold_budget,
    )
    terminal = _show(outcome.terminal, config)
    report = Report(
        command="reduce",
        file=path,
        verdict=outcome.verdict.value,
        trace=outcome if with_trace else None,
        safety=outcome.safety,
        exit_code=_REDUCE_EXIT[outcome.verdict],
        result={"steps": len(outcome.steps), "terminal": terminal},
    )
    report.lines = (outcome.to_lines() if with_trace else []) + [
        f"steps: {len(outcome.steps)}",
        f"terminal: {terminal}",
    ]
    unmatched = dict.fromkeys(pretty_formula(normalize_names(w.atom)) for w in outcome.safety.witnesses)
    report.lines.extend(f"unmatched: assert {atom}" for atom in unmatched)
    return report


def cmd_safety(path: str, config: Config, unfold_budget: Optional[int] = None) -> Report:
    """
    Decide assertion safety of a program's main process.

    Args:
        path: .lsp source file
        config: Supplies the unfolding budget and worker count
        unfold_budget: Overrides config.safety.unfold_budget

    Returns:
        Report with verdict safe (exit 0) or unsafe (exit 3)
    """
    _, main, failure = _load("safety", path)
    if failure:
        return failure
    budget = config.safety.unfold_budget if unfold_budget is None else unfold_budget

    safety = check_safety(main, unfold_budget=budget, workers=config.safety.workers)
    report = Report(
        command="safety",
        file=path,
        verdict="safe" if safety.safe else "unsafe",
        safety=safety,
        exit_code=EXIT_OK if safety.safe else EXIT_STUCK,
        result={"unfold_budget": budget},
    )
    report.lines = [f"forms explored: {safety.explored_forms}"]
    for witness in safety.witnesses:
        report.lines.append(
            f"witness: assert {pretty_formula(normalize_names(witness.atom))} "
            f"(thread {witness.thread}) in {_show(witness.form, config)}"
        )
    for atom in safety.overcommitted:
        report.lines.append(f"overcommitted: {pretty_formula(normalize_names(atom))}")
    return report


def cmd_canon(path: str, config: Config) -> Report:
    """
    Print the canonical form of a program's main process.

    Returns:
        Report with verdict canonical (exit 0) or parse-error (exit 2)
    """
    _, main, failure = _load("canon", path)
    if failure:
        return failure

    form = canonicalize(main)
    if config.output.normalize_names:
        form = canonicalize(normalize_names(form.to_process()))

    restrictions = [f"new {x} {y} : {pretty_type(t)}" for x, y, t in form.restrictions]
    assumptions = [pretty_formula(atom) for atom in form.assumptions]
    threads = [pretty_print(thread) for thread in form.threads]
    report = Report(
        command="canon",
        file=path,
        verdict="canonical",
        result={
            "restrictions": restrictions,
            "assumptions": assumptions,
            "threads": threads,
            "process": pretty_print(form.to_process()),
        },
    )
    report.lines = [
        f"restrictions: {', '.join(restrictions) or '(none)'}",
        f"assumptions: {', '.join(assumptions) or '(none)'}",
        "threads:",
        *(f"  {thread}" for thread in threads),
    ]
    return report


COMMANDS: Dict[str, Callable[..., Report]] = {
    "check": cmd_check,
    "reduce": cmd_reduce,
    "safety": cmd_safety,
    "canon": cmd_canon,
}


def load_expectations(path: Optional[str] = None) -> Dict[str, Dict[str, Dict[str, Any]]]:
    """
    Expected verdicts and exit codes for the corpus.

    Returns:
        {file name: {command: {"verdict": ..., "exit_code": ...}}}

    Raises:
        ConfigError: If the file is missing or malformed
    """
    target = Path(path) if path else EXPECTATIONS_PATH
    try:
        with open(target, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"Cannot load expectations: {e}", {"path": str(target)}) from e
    if not isinstance(data, dict):
        raise ConfigError("Expectations must map file names to commands", {"path": str(target)})
    return data
