import pytest

from partmax import _backend
from partmax.matroid import PartitionMatroid
from partmax.oracle import make_coverage, make_modular

BACKENDS = ["python"] + (["cython"] if _backend.BACKEND == "cython" else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def two_groups():
    return PartitionMatroid([[0, 1], [2, 3]], [1, 1])


@pytest.fixture
def modular4():
    return make_modular([3, 1, 2, 5])


@pytest.fixture
def coverage4():
    # e0={a,b}, e1={b,c}, e2={c,d}, e3={d}
    return make_coverage({0: "ab", 1: "bc", 2: "cd", 3: "d"})


# one PASS/FAIL line per acceptance criterion, echoed in the terminal summary
_ACCEPTANCE_LINES = {}


@pytest.fixture
def record():
    def _record(cid, ok, detail):
        line = f"[criterion {cid:>4}] {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES[cid] = line
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE_LINES, key=lambda c: (int(c.rstrip("abc")), c)):
        terminalreporter.write_line(_ACCEPTANCE_LINES[cid])
