import pytest

from beurling.gallery import (
    system_continuous_alpha,
    system_ordinary,
    system_powers_of_two,
    system_sparse_rational_primes,
)

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def ordinary():
    return system_ordinary(1e6)


@pytest.fixture(scope="session")
def powers2():
    return system_powers_of_two()


@pytest.fixture(scope="session")
def sparse2k():
    return system_sparse_rational_primes(1e8)


@pytest.fixture(scope="session")
def alpha2():
    return system_continuous_alpha(2.0, 1e6)


@pytest.fixture
def report():
    """Record one acceptance line; it is echoed now and again in the terminal summary."""

    def emit(tag, ok, detail):
        line = f"{tag} {'PASS' if ok else 'FAIL'}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
