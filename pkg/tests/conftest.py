import pytest
from hypothesis import settings

from votecrack.elgamal import MultiParams
from votecrack.modmath import GroupOrder, GroupParams, gen_safe_prime, make_rng, params_for_prime

# first calls may compile numba kernels or touch 1024-bit groups
settings.register_profile("votecrack", deadline=None)
settings.load_profile("votecrack")

# small safe primes, all 3 mod 4
SMALL_SAFE_PRIMES = (23, 47, 59, 83, 107, 167, 179, 227, 263, 347, 359, 383, 467, 479, 503)


def squares_mod(p):
    return {x * x % p for x in range(1, p)}


@pytest.fixture
def rng():
    return make_rng(1234)


@pytest.fixture(scope="session")
def g23():
    return GroupParams.from_p_g(23, 4)


@pytest.fixture(scope="session")
def g23_full():
    return GroupParams.from_p_g(23, 5)


@pytest.fixture(scope="session")
def chain23():
    return MultiParams(tuple(params_for_prime(p, GroupOrder.FULL_GROUP) for p in (23, 47, 59)))


@pytest.fixture(scope="session")
def group1024():
    return gen_safe_prime(1024, make_rng(77), GroupOrder.QR_SUBGROUP)


@pytest.fixture(scope="session")
def group2048():
    return gen_safe_prime(2048, make_rng(2048), GroupOrder.QR_SUBGROUP)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
