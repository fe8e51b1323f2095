import pytest

from connlab.bench import small_suite


@pytest.fixture(scope="session")
def suite():
    """The fast correctness suite: 12 named graphs covering every family."""
    return small_suite()


@pytest.fixture(scope="session")
def suite_oracles(suite):
    from helpers import oracle

    return {name: oracle(g) for name, g in suite}
