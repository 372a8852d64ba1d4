import random
from pathlib import Path

import pytest

from logdecomp.quantities import InfoSystem
from logdecomp.space import new_space, partition_from_blocks, partition_from_labels

DATA = Path(__file__).parent / "data"

# Filled by test_acceptance; printed at the end of the run.
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def worked_space():
    return new_space(["1", "2", "3", "4"], [0.1, 0.2, 0.3, 0.4])


def worked_system():
    sp = worked_space()
    return InfoSystem(sp, {
        "X": partition_from_blocks(sp, [["1", "3"], ["2", "4"]]),
        "Y": partition_from_blocks(sp, [["1", "2"], ["3", "4"]]),
    })


def random_weights(rng: random.Random, n: int, *, normalize=True, zeros=False):
    w = [rng.random() + 1e-3 for _ in range(n)]
    if zeros:
        w = [0.0 if rng.random() < 0.2 else x for x in w]
        if not any(w):
            w[0] = 1.0
    if normalize:
        t = sum(w)
        w = [x / t for x in w]
    return w


def random_system(rng: random.Random, n: int, k: int, **kw) -> InfoSystem:
    sp = new_space([f"o{i}" for i in range(n)], random_weights(rng, n, **kw))
    names = ["X", "Y", "Z", "W"][:k]
    variables = {}
    for nm in names:
        arity = rng.randint(1, n)
        variables[nm] = partition_from_labels(sp, [rng.randrange(arity) for _ in range(n)])
    return InfoSystem(sp, variables)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def worked():
    return worked_system()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, line = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  [{k:2d}] {line}")
