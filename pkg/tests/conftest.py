import pytest

from nonclass import verify


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile the numba kernels once so timed tests measure math, not jit
    verify.warm_up()
