"""
The `mono3d` command line: recovery, evaluation, simulation, gradient checks
and label parsing.
"""

from .config import Command, RunConfig
from .commands import CommandResult, run_check_grad, run_eval, run_parse, run_recover, run_simulate
from .main import main
