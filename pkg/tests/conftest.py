import sys
from pathlib import Path

# make tests/oracles.py importable regardless of the invocation directory
sys.path.insert(0, str(Path(__file__).resolve().parent))

ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status} - {title}")
