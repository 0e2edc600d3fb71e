from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from catfield.category import (  # noqa: E402
    cyclic_group,
    discrete,
    free_acyclic,
    indiscrete,
    opposite,
    preorder,
    symmetric_group,
)
from catfield.causal import make_causal, minkowski_lattice  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "data"


def chain(k: int = 3):
    vs = [f"v{i}" for i in range(k)]
    return free_acyclic(vs, [(f"e{i}", vs[i], vs[i + 1]) for i in range(k - 1)], name=f"chain{k}")


def diamond():
    return free_acyclic(["a", "b", "c", "d"], [("f", "a", "b"), ("g", "a", "c"), ("h", "b", "d"), ("k", "c", "d")], name="diamond")


def corpus_categories():
    """The generator corpus: small instances of every standard family."""
    cats = []
    for n in range(1, 7):
        cats.append(discrete(n))
        cats.append(indiscrete(n))
    cats += [cyclic_group(2), cyclic_group(3), symmetric_group(3), chain(3), chain(4), diamond(), opposite(diamond())]
    cats.append(preorder(["p", "q", "r"], [(o, o) for o in "pqr"] + [("p", "q"), ("q", "p"), ("p", "r"), ("q", "r")], name="preorder3"))
    for T, X in ((2, 2), (3, 3), (4, 4)):
        cats.append(minkowski_lattice(T, X, "indiscrete").ambient)
        cats.append(minkowski_lattice(T, X, "thin").ambient)
    return cats


def causal_corpus():
    out = []
    for T, X in ((1, 2), (2, 1), (2, 2), (3, 1), (3, 3), (4, 4)):
        out.append(minkowski_lattice(T, X, "indiscrete"))
        out.append(minkowski_lattice(T, X, "thin"))
    out.append(make_causal(chain(3)))
    out.append(make_causal(diamond()))
    out.append(make_causal(cyclic_group(3)))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(acceptance_log.LINES):
            terminalreporter.write_line(line)
