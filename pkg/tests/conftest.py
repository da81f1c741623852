import numpy as np
import pytest

from consilience import parse_dataset

from helpers import make_patchy25_csv


@pytest.fixture(scope="session")
def patchy25_csv() -> str:
    return make_patchy25_csv()


@pytest.fixture(scope="session")
def patchy25(patchy25_csv):
    return parse_dataset(patchy25_csv)


@pytest.fixture()
def rng():
    return np.random.default_rng(20250810)
