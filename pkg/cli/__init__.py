"""
skybench command-line interface.
"""

from .main import CliInvocation, ExitCode, entry, main, parse_args, run_cli

__all__ = ["CliInvocation", "ExitCode", "entry", "main", "parse_args", "run_cli"]
