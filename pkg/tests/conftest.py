import pytest

from behaviortrace import ingest
from behaviortrace.sampledata import loans_csv, loans_dataset, movies_csv, movies_dataset


@pytest.fixture(scope="session")
def movies():
    return movies_dataset()


@pytest.fixture(scope="session")
def movies_text():
    return movies_csv()


@pytest.fixture(scope="session")
def loans():
    return loans_dataset()


@pytest.fixture(scope="session")
def loans_text():
    return loans_csv()


@pytest.fixture()
def ratings3():
    """Three rows of content ratings {G, R, R} plus a year column."""
    return ingest("Content Rating,Release Year\nG,2008\nR,2008\nR,2010\n")
