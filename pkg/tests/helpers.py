"""Small graph builders shared by the tests."""
from sfattack.graph import Graph


def star(n):
    return Graph(n, [(0, i) for i in range(1, n)])


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_graph(n, p, rng):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


# one "PASS/FAIL criterion N: ..." line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def report(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok
