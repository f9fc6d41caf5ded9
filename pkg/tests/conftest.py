from __future__ import annotations

import pytest

from realwdvv import p2, solve_complex_p2, solve_real_p2


@pytest.fixture(scope="session")
def complex_p2():
    table, report = solve_complex_p2(6)
    return table, report


@pytest.fixture(scope="session")
def real_p2(complex_p2):
    table, report = solve_real_p2(4, complex_table=complex_p2[0])
    return table, report


@pytest.fixture(scope="session")
def model():
    return p2()
