import random
from fractions import Fraction

import pytest

from ricci_lab.bounds import M1_VERTICES, M2_VERTICES, P1XP1_VERTICES
from ricci_lab.polytope import from_vertices


@pytest.fixture
def m1():
    return from_vertices(M1_VERTICES)


@pytest.fixture
def m2():
    return from_vertices(M2_VERTICES)


@pytest.fixture
def square():
    return from_vertices(P1XP1_VERTICES)


def _chop(verts, rng):
    """Cut one Delzant corner: a toric blowup of the surface."""
    n = len(verts)
    P = from_vertices(verts)
    verts = list(P.vertices)
    i = rng.randrange(n)
    w_next, w_prev = P.edge_directions(i)
    len_next = P.facets[i].lattice_length
    len_prev = P.facets[i - 1].lattice_length
    room = int(min(len_next, len_prev))
    if room < 2:
        return verts
    c = rng.randint(1, room - 1)
    v = verts[i]
    a = (v[0] + c * w_prev[0], v[1] + c * w_prev[1])
    b = (v[0] + c * w_next[0], v[1] + c * w_next[1])
    return verts[:i] + [a, b] + verts[i + 1:]


def random_delzant(rng: random.Random):
    kind = rng.choice(["triangle", "rectangle", "hirzebruch"])
    s = rng.randint(2, 6)
    if kind == "triangle":
        verts = [(0, 0), (s, 0), (0, s)]
    elif kind == "rectangle":
        verts = [(0, 0), (s, 0), (s, rng.randint(2, 6)), (0, rng.randint(2, 6))]
        verts[3] = (0, verts[2][1])
    else:
        k, b = rng.randint(0, 2), rng.randint(1, 4)
        verts = [(0, 0), (s, 0), (s, b), (0, b + k * s)]
    for _ in range(rng.randint(0, 3)):
        verts = _chop(verts, rng)
    P = from_vertices(verts)
    assert P.is_delzant
    return P


def random_delzant_polygons(count, seed):
    rng = random.Random(seed)
    return [random_delzant(rng) for _ in range(count)]


def random_rational(rng, bound=10, den=12):
    return Fraction(rng.randint(-bound * den, bound * den), rng.randint(1, den))


# Acceptance summary: one line per criterion, printed at the end of the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
