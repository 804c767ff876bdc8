import os

# Loggers attach their handler on first use; keep test output quiet.
os.environ.setdefault("LSM_LOGGING_ENABLED", "false")

import pytest

from engine.latin import non_group_square, swapped_z3_square


THUE_MORSE_32 = "01101001100101101001011001101001"
SWAPPED3_PREFIX_18 = "132321213321213132"


@pytest.fixture
def swapped3():
    return swapped_z3_square()


@pytest.fixture
def nongroup6():
    return non_group_square()
