"""
QPCli: command-line front end

Layer 9 of the quasipath stack. `python -m src.qpcli <command>` with
commands eval, minimize, criteria and verify, all driven by a scenario
file.
"""

from .cli import COMMANDS, EXIT_OK, EXIT_FAILED, EXIT_CONFIG, build_parser, run, main

__all__ = [
    'COMMANDS',
    'EXIT_OK',
    'EXIT_FAILED',
    'EXIT_CONFIG',
    'build_parser',
    'run',
    'main',
]

__version__ = '0.1.0'
__layer__ = 9
