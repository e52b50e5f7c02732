import sys


def pytest_terminal_summary(terminalreporter):
    """Print the one-line outcome of each end-to-end acceptance check."""
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.write_sep("-", "acceptance checks")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
