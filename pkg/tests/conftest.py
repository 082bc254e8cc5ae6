import itertools
import random

import pytest
from hypothesis import strategies as st

from sftacoe.sft import BiPoint, SftError, check_point, validate

FULL2 = [[1, 1], [1, 1]]
FULL3 = [[1, 1, 1], [1, 1, 1], [1, 1, 1]]
GOLDEN = [[1, 1], [1, 0]]
BIG = [[19, 5], [4, 1]]


def accepted_matrices(n):
    """Every accepted n x n 0-1 matrix, in lexicographic order."""
    out = []
    for bits in itertools.product((0, 1), repeat=n * n):
        try:
            out.append(validate([list(bits[i * n:(i + 1) * n]) for i in range(n)]))
        except SftError:
            pass
    return out


def random_accepted(n, count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        try:
            out.append(validate([[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]))
        except SftError:
            continue
    return out


@st.composite
def accepted_matrix(draw, max_n=4):
    n = draw(st.integers(2, max_n))
    rows = draw(st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n),
                         min_size=n, max_size=n))
    try:
        return validate(rows)
    except SftError:
        # the full shift keeps the strategy total
        return validate([[1] * n for _ in range(n)])


def _walk(matrix, start, length, rnd):
    w = [start]
    for _ in range(length - 1):
        w.append(rnd.choice(matrix.successors(w[-1])))
    return w


def _cycle_through(matrix, s, rnd):
    """A cycle word starting at s (random walk closed by a shortest return)."""
    from sftacoe.groupoid import _shortest_path

    w = _walk(matrix, s, rnd.randint(1, 3), rnd)
    back = _shortest_path(matrix, w[-1], s)
    return tuple(w) + back[1:-1]


@st.composite
def bipoint_on(draw, matrix):
    """A random admissible eventually periodic point of the given shift."""
    rnd = random.Random(draw(st.integers(0, 10 ** 9)))
    core = _walk(matrix, rnd.randint(1, matrix.n), rnd.randint(1, 5), rnd)
    right = _cycle_through(matrix, rnd.choice(matrix.successors(core[-1])), rnd)
    from sftacoe.groupoid import _shortest_path

    to_right = _shortest_path(matrix, core[-1], right[0])
    pred = rnd.choice(matrix.predecessors(core[0]))
    left_cyc = _cycle_through(matrix, pred, rnd)
    from_left = _shortest_path(matrix, left_cyc[0], core[0])
    left = left_cyc[1:] + left_cyc[:1]
    prefix = from_left[1:-1]
    full_core = prefix + tuple(core) + to_right[1:-1]
    offset = draw(st.integers(-4, 4))
    return check_point(matrix, BiPoint(left, full_core, right, offset - len(prefix)))


@pytest.fixture
def full2():
    return validate(FULL2)


@pytest.fixture
def golden():
    return validate(GOLDEN)


# acceptance summary ----------------------------------------------------------

ACCEPTANCE = {}


def record(criterion, ok, detail=""):
    """Criteria checked in several parts pass only if every part passes."""
    prev_ok, prev_detail = ACCEPTANCE.get(criterion, (True, ""))
    joined = " | ".join(d for d in (prev_detail, detail) if d)
    ACCEPTANCE[criterion] = (ok and prev_ok, joined)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
