import sys

import numpy as np
import pytest

from noisetol.data import example2_dataset, example3_dataset, load_iris


@pytest.fixture(scope="session")
def iris():
    return load_iris()


@pytest.fixture(scope="session")
def iris_setosa():
    return load_iris("Iris-setosa")


@pytest.fixture
def ex2():
    return example2_dataset()


@pytest.fixture
def ex3():
    return example3_dataset()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def write_csv(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
