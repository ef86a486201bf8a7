import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import _support


def pytest_terminal_summary(terminalreporter):
    if _support.ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in _support.ACCEPTANCE:
            terminalreporter.write_line(line)
