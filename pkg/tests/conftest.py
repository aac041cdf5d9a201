import math

import pytest

from latticeprime.sieve import build_table


def is_prime_td(n: int) -> bool:
    """Trial division; the primality oracle used throughout the tests."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def bytearray_sieve(n: int) -> bytearray:
    """Plain Eratosthenes on a bytearray, independent of the package code."""
    s = bytearray([1]) * (n + 1)
    s[0] = s[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if s[p]:
            s[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return s


@pytest.fixture(scope="session")
def table_1e6():
    return build_table(10**6 + 64)


@pytest.fixture(scope="session")
def table_1e7():
    return build_table(10**7 + 64)


_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion id and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _ACCEPTANCE.append((mark.args[0], status, item.name))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, name in sorted(_ACCEPTANCE, key=lambda r: int(r[0].split()[0])):
        terminalreporter.write_line(f"[{status}] criterion {label}  ({name})")
