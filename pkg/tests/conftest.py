import random

import pytest
from hypothesis import settings

from waring.scalar import TolerancePolicy, working_precision

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def policy():
    """Default policy; the test body runs at its precision."""
    pol = TolerancePolicy(256)
    with working_precision(pol):
        yield pol


@pytest.fixture
def prec(policy):
    return policy


@pytest.fixture
def rng():
    return random.Random(1234)
