import pytest

from iotraq.documents import load_default_taxonomy, load_example_assessment


@pytest.fixture(scope="session")
def taxonomy():
    return load_default_taxonomy()


@pytest.fixture(scope="session")
def example_assessment(taxonomy):
    return load_example_assessment(taxonomy)
