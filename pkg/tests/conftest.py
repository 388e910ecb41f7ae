import os
import re
import sys
from contextlib import contextmanager

sys.path.insert(0, os.path.dirname(__file__))

# criterion number -> (status, detail)
ACCEPTANCE = {}


class Inconclusive(Exception):
    pass


@contextmanager
def criterion(n):
    """Record PASS, FAIL or INCONCLUSIVE for acceptance criterion n."""
    try:
        yield
    except Inconclusive as exc:
        ACCEPTANCE[n] = ("INCONCLUSIVE", str(exc))
        return
    except BaseException as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        ACCEPTANCE[n] = ("FAIL", msg)
        raise
    ACCEPTANCE.setdefault(n, ("PASS", ""))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE, key=lambda k: (int(re.match(r"\d+", str(k)).group()), str(k))):
        status, detail = ACCEPTANCE[n]
        line = f"criterion {n}: {status}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
