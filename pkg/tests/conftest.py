import os
import random

import pytest


def make_rng(salt: int = 0) -> random.Random:
    seed = int(os.environ.get("MCG_SPINLAB_SEED", "0"))
    return random.Random(seed + salt)


@pytest.fixture
def rng():
    return make_rng()
