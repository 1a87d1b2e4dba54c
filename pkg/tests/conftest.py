import pytest

from frobtor import linalg


@pytest.fixture(scope="session", autouse=True)
def _jit_warmup():
    # compile the elimination kernels once so individual tests (and the
    # timed acceptance suite) do not pay numba's first-call cost
    linalg.warmup()
