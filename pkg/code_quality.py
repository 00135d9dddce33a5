#!/usr/bin/env python3
"""
Run the linters and the test suite over the approximation packages and
collect their output in a timestamped report under ``reports/``.

    python code_quality.py          full report, slow constructions included
    python code_quality.py --fast   skip tests marked slow
    python code_quality.py --fix    apply black and isort in place
"""
import os
import subprocess
import sys
from datetime import datetime

GREEN = "\033[92m"
YELLOW = "\033[93m"
RED = "\033[91m"
RESET = "\033[0m"
BOLD = "\033[1m"

PACKAGES = ["app.py", "models.py", "commands", "extentions", "schemas", "services", "utils", "validators"]
REPORTS_DIR = "reports"


def print_header(text):
    print(f"\n{BOLD}{YELLOW}{'=' * 80}{RESET}")
    print(f"{BOLD}{YELLOW}= {text}{RESET}")
    print(f"{BOLD}{YELLOW}{'=' * 80}{RESET}\n")


def run_command(args, title):
    """Run one tool and echo its output; returns the tool's exit status."""
    print_header(title)
    result = subprocess.run(args, capture_output=True, text=True, check=False)
    print(result.stdout)
    if result.stderr:
        print(f"{RED}{result.stderr}{RESET}")
    return result.returncode


def quality_checks(fast=False):
    """(args, title, fatal) for every tool of the report, in order."""
    pytest_args = ["pytest", "--cov=services", "--cov=utils", "--cov=commands", "tests/"]
    if fast:
        pytest_args[1:1] = ["-m", "not slow"]
    return [
        (["black", "--check", *PACKAGES, "tests"], "BLACK - Code formatting check", False),
        (["isort", "--check-only", "--profile", "black", *PACKAGES, "tests"], "ISORT - Import order check", False),
        (
            ["flake8", *PACKAGES, "--count", "--select=E9,F63,F7,F82", "--show-source", "--statistics"],
            "FLAKE8 (Fatal Errors)",
            True,
        ),
        (
            ["flake8", *PACKAGES, "--count", "--exit-zero", "--max-complexity=12", "--max-line-length=127"],
            "FLAKE8 (Style Warnings)",
            False,
        ),
        (["mypy", "--ignore-missing-imports", *PACKAGES], "MYPY - Type checks", False),
        (["bandit", "-q", "-r", *PACKAGES, "-c", "pyproject.toml"], "BANDIT - Security issues", False),
        (pytest_args, "PYTEST - Tests with coverage", True),
    ]


def handle_fix_mode():
    print_header("AUTOMATIC CODE CORRECTION")
    run_command(["black", *PACKAGES, "tests"], "BLACK - Code formatting")
    run_command(["isort", "--profile", "black", *PACKAGES, "tests"], "ISORT - Import sorting")
    print(f"{GREEN}Automatic corrections applied.{RESET}")


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if "--fix" in argv:
        handle_fix_mode()
        return 0

    os.makedirs(REPORTS_DIR, exist_ok=True)
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    report_file = os.path.join(REPORTS_DIR, f"code_quality_report_{timestamp}.txt")

    failures = []
    original_stdout = sys.stdout
    with open(report_file, "w", encoding="utf-8") as f:
        sys.stdout = f
        try:
            print(f"Code Quality Report - {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
            print("=" * 80)
            for args, title, fatal in quality_checks(fast="--fast" in argv):
                if run_command(args, title) != 0 and fatal:
                    failures.append(title)
        finally:
            sys.stdout = original_stdout

    print(f"{GREEN}Code quality analysis report generated: {report_file}{RESET}")
    if failures:
        print(f"{RED}Failed: {', '.join(failures)}{RESET}")
        return 1
    print(f"{YELLOW}To apply formatting corrections, run:{RESET} {BOLD}python code_quality.py --fix{RESET}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
