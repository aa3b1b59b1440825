"""Shared pytest hooks.

Surfaces the numbered acceptance-check lines in the terminal summary so they
are visible even without ``-s``.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    for name, mod in sys.modules.items():
        if name.rpartition(".")[2] == "test_acceptance":
            lines = getattr(mod, "CRITERION_LINES", None)
            if lines:
                terminalreporter.section("acceptance criteria")
                for line in lines:
                    terminalreporter.write_line(line)
            break
