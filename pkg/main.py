#!/usr/bin/env python3
"""
linsess - Main Entry Point
==========================

Command-line front end for checking and running processes with linearly
refined session types.

Usage:
    python main.py check corpus/system_ok.lsp           # Type-check
    python main.py reduce corpus/system_ok.lsp --trace  # Reduce, with step log
    python main.py safety corpus/stuck_pair.lsp         # Assertion safety
    python main.py canon corpus/system_doublecharge_ok.lsp
    python main.py --help                               # Show help
"""

import sys
import argparse
from pathlib import Path
from typing import List, Optional

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from core.config import POLICIES, Config, load_config
from core.exceptions import LinsessError
from core.logging import clear_log_context, get_logger, set_log_context, setup_logging

logger = get_logger("main")


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json",
        action="store_true",
        help="Print one structured JSON object instead of text"
    )
    common.add_argument(
        "--config",
        type=str,
        metavar="PATH",
        help="Path to configuration file"
    )
    common.add_argument(
        "--debug",
        action="store_true",
        help="Enable debug logging on stderr"
    )
    common.add_argument(
        "--log-dir",
        type=str,
        metavar="DIR",
        help="Also write linsess.log and errors.log to DIR"
    )

    parser = argparse.ArgumentParser(
        description="linsess - Linearly refined session processes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py check corpus/system_ok.lsp                  Type-check the main process
  python main.py check open.lsp --context ctx.lsp            Check against a declared context
  python main.py check corpus/system_overcharge_dynamic.lsp --erase
  python main.py check corpus/system_ok.lsp --oracle         Cross-check with the reference checker
  python main.py reduce corpus/system_ok.lsp --trace         Reduce and print every step
  python main.py reduce p.lsp --policy random --seed 7       Random redex scheduling
  python main.py safety corpus/repl_assert.lsp --unfold 2    Safety with a larger budget
  python main.py canon corpus/system_doublecharge_ok.lsp     Canonical form

Exit codes:
  0  accept / safe / terminated-clean
  1  type error
  2  parse error
  3  stuck or unsafe
  4  step limit reached
        """
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    check = commands.add_parser("check", parents=[common], help="Type-check a program")
    check.add_argument("file", help="Program source (.lsp)")
    check.add_argument(
        "--context",
        type=str,
        metavar="FILE",
        help="Typing context to check the main process against"
    )
    check.add_argument(
        "--erase",
        action="store_true",
        help="Erase assumes, asserts and refinements before checking"
    )

    check.add_argument(
        "--oracle",
        action="store_true",
        help="Cross-check with the exhaustive reference checker (fuel: checker.reference_fuel)"
    )

    reduce = commands.add_parser("reduce", parents=[common], help="Reduce a program")
    reduce.add_argument("file", help="Program source (.lsp)")
    reduce.add_argument(
        "--max-steps",
        type=int,
        metavar="N",
        help="Step limit (default: 1000)"
    )
    reduce.add_argument(
        "--policy",
        choices=POLICIES,
        help="Redex scheduling (default: leftmost)"
    )
    reduce.add_argument(
        "--seed",
        type=int,
        metavar="S",
        help="Seed for the random policy"
    )
    reduce.add_argument(
        "--trace",
        action="store_true",
        help="Print every reduction step"
    )
    reduce.add_argument(
        "--unfold",
        type=int,
        metavar="K",
        help="Unfolding budget for the terminal safety check (default: 1)"
    )

    safety = commands.add_parser("safety", parents=[common], help="Check assertion safety")
    safety.add_argument("file", help="Program source (.lsp)")
    safety.add_argument(
        "--unfold",
        type=int,
        metavar="K",
        help="Unfoldings per replicated process (default: 1)"
    )

    canon = commands.add_parser("canon", parents=[common], help="Print the canonical form")
    canon.add_argument("file", help="Program source (.lsp)")

    return parser.parse_args(argv)


def check_dependencies() -> bool:
    """
    Check if all required dependencies are installed.

    Returns:
        True if all dependencies are available
    """
    missing = []

    try:
        import yaml  # noqa: F401
    except ImportError:
        missing.append("pyyaml")

    try:
        import lark  # noqa: F401
    except ImportError:
        missing.append("lark")

    if missing:
        print(f"Missing dependencies: {', '.join(missing)}", file=sys.stderr)
        print("Install with: pip install " + " ".join(missing), file=sys.stderr)
        return False

    return True


def apply_overrides(config: Config, args: argparse.Namespace) -> Config:
    """Command-line flags win over configuration values."""
    if args.debug:
        config.debug = True
        config.log_level = "DEBUG"
    if args.log_dir:
        config.log_dir = args.log_dir
    if args.json:
        config.output.json = True
    if getattr(args, "max_steps", None) is not None:
        config.reduction.max_steps = args.max_steps
    if getattr(args, "policy", None):
        config.reduction.policy = args.policy
    if getattr(args, "seed", None) is not None:
        config.reduction.seed = args.seed
    if getattr(args, "trace", False):
        config.output.trace = True
    if getattr(args, "unfold", None) is not None:
        config.safety.unfold_budget = args.unfold
    config.validate()
    return config


def run_command(config: Config, args: argparse.Namespace):
    """Dispatch to the command and return its Report."""
    from services.commands import cmd_canon, cmd_check, cmd_reduce, cmd_safety

    if args.command == "check":
        return cmd_check(args.file, config, context_path=args.context, erase=args.erase, oracle=args.oracle)
    if args.command == "reduce":
        return cmd_reduce(args.file, config)
    if args.command == "safety":
        return cmd_safety(args.file, config)
    return cmd_canon(args.file, config)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    args = parse_args(argv)

    if not check_dependencies():
        return 1

    try:
        config = apply_overrides(load_config(args.config), args)

        setup_logging(
            log_dir=config.log_dir or None,
            log_level=config.log_level,
            console_output=True
        )
        set_log_context(command=args.command, file=args.file)

        report = run_command(config, args)

        if not config.output.json:
            for line in report.diagnostic_lines():
                print(line, file=sys.stderr)
        print(report.render(as_json=config.output.json))
        return report.exit_code

    except LinsessError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"Unexpected error: {e}", file=sys.stderr)
        if args.debug:
            import traceback
            traceback.print_exc()
        return 1
    finally:
        clear_log_context()


if __name__ == "__main__":
    sys.exit(main())
