"""Shared pytest hooks.

The acceptance tests record one PASS/FAIL line per criterion; echo them
through the terminal reporter at the end of the run so they are visible
regardless of output capturing.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    for name, mod in list(sys.modules.items()):
        if name.rpartition(".")[2] == "test_acceptance":
            lines = getattr(mod, "_LINES", None)
            if lines:
                terminalreporter.section("acceptance criteria")
                for line in lines:
                    terminalreporter.write_line(line)
            break
