import mpmath
import pytest

from towerinv.numeric import DEFAULT_PREC


@pytest.fixture(autouse=True)
def working_precision():
    # comparisons in tests run at the library default width
    with mpmath.workprec(DEFAULT_PREC):
        yield


EXACT = mpmath.mpf(2) ** -100
