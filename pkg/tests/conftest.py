import numpy as np
import pytest

from dtpartition import data_io


def set_partitions(items):
    """Brute-force set partitions of a list, as lists of blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@pytest.fixture(scope="session")
def iris():
    return data_io.load(data_io.bundled("iris"))


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(1234))
