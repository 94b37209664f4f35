import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SMALL_SAFE_PRIMES, squares_mod
from votecrack.harness.fixtures import load_fixture
from votecrack.errors import NonResidueError, NotInvertibleError, ParameterError
from votecrack.modmath import (
    GroupOrder,
    GroupParams,
    gen_safe_prime,
    generator_order_class,
    is_probable_prime,
    jacobi,
    make_rng,
    mod_inv,
    mod_pow,
    smallest_non_residue,
    sqrt_mod,
)

PUBLISHED_P = int(load_fixture("appendix_c")["p"])

NOT_3_MOD_4 = (5, 13, 17, 29, 37, 41)


def slow_pow(b, e, m):
    out = 1
    for _ in range(e):
        out = out * b % m
    return out


def trial_division(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def test_mod_pow_examples():
    assert mod_pow(4, 3, 23) == 18
    assert mod_pow(2, 11, 23) == 1
    assert mod_pow(7, 0, 23) == 1


@pytest.mark.parametrize("bad", [0, 1, -5])
def test_mod_pow_small_modulus(bad):
    with pytest.raises(ParameterError):
        mod_pow(3, 2, bad)


@given(st.integers(0, 10**6), st.integers(0, 60), st.integers(2, 10**4))
def test_mod_pow_matches_repeated_multiplication(b, e, m):
    assert mod_pow(b, e, m) == slow_pow(b, e, m)


def test_mod_inv_examples():
    assert mod_inv(1, 17) == 1
    assert mod_inv(2, 23) == 12
    with pytest.raises(NotInvertibleError):
        mod_inv(5, 10)


@given(st.integers(1, 10**12), st.integers(2, 10**12))
def test_mod_inv_property(a, m):
    try:
        x = mod_inv(a, m)
    except NotInvertibleError:
        from math import gcd

        assert gcd(a, m) != 1
        return
    assert a * x % m == 1 % m


def test_jacobi_examples():
    assert jacobi(1, 23) == 1
    assert jacobi(2, 23) == 1
    assert jacobi(5, 23) == -1
    assert jacobi(0, 23) == 0
    assert jacobi(46, 23) == 0


@pytest.mark.parametrize("n", [2, 1, 0, 10, 100])
def test_jacobi_rejects_even_or_tiny(n):
    with pytest.raises(ParameterError):
        jacobi(3, n)


@pytest.mark.parametrize("p", SMALL_SAFE_PRIMES)
def test_jacobi_against_square_table(p):
    sq = squares_mod(p)
    for a in range(1, p):
        assert jacobi(a, p) == (1 if a in sq else -1)


def test_jacobi_composite_modulus():
    # (2/15) = (2/3)(2/5) = (-1)(-1)
    assert jacobi(2, 15) == 1
    assert jacobi(7, 15) == jacobi(7, 3) * jacobi(7, 5)


@settings(max_examples=200)
@given(st.sampled_from(SMALL_SAFE_PRIMES + (1019, 65537, PUBLISHED_P)), st.integers(1, 2**1100))
def test_jacobi_equals_euler(p, a):
    a = a % (p - 1) + 1
    euler = pow(a, (p - 1) // 2, p)
    assert (jacobi(a, p) == 1) == (euler == 1)


@given(st.sampled_from(SMALL_SAFE_PRIMES + (PUBLISHED_P,)), st.integers(1, 2**1100), st.integers(1, 2**1100))
def test_jacobi_multiplicative(p, a, b):
    a, b = a % (p - 1) + 1, b % (p - 1) + 1
    assert jacobi(a * b % p, p) == jacobi(a, p) * jacobi(b, p)


def test_sqrt_mod_examples():
    assert sqrt_mod(2, 23) == 18
    assert sqrt_mod(1, 23) in (1, 22)
    with pytest.raises(NonResidueError):
        sqrt_mod(5, 23)
    with pytest.raises(ParameterError):
        sqrt_mod(4, 13)


@given(st.sampled_from(SMALL_SAFE_PRIMES + (PUBLISHED_P,)), st.integers(1, 2**1100))
def test_sqrt_mod_squares_back(p, x):
    a = x * x % p or 1
    assert pow(sqrt_mod(a, p), 2, p) == a


@pytest.mark.parametrize("n,expected", [(23, True), (25, False), (1, False), (2, True), (65537, True)])
def test_is_probable_prime_examples(n, expected):
    assert is_probable_prime(n) is expected


def test_is_probable_prime_exact_below_2_16():
    for n in range(1 << 16):
        assert is_probable_prime(n) == trial_division(n)


def test_is_probable_prime_large():
    assert is_probable_prime(PUBLISHED_P)
    assert is_probable_prime((PUBLISHED_P - 1) // 2)
    assert not is_probable_prime(PUBLISHED_P + 2)
    # Carmichael numbers and a strong pseudoprime to base 2
    for n in (561, 41041, 825265, 2047, 3215031751):
        assert not is_probable_prime(n)
    assert is_probable_prime(2**127 - 1)
    assert not is_probable_prime((2**61 - 1) * (2**31 - 1))


def test_is_probable_prime_rounds():
    with pytest.raises(ParameterError):
        is_probable_prime(101, rounds=0)


def test_generator_order_class_small():
    assert generator_order_class(23, 4) == "q"
    assert generator_order_class(23, 5) == "2q"
    assert generator_order_class(23, 22) == "other"
    assert generator_order_class(23, 1) == "other"


def test_group_params_validation():
    GroupParams(23, 11, 4, GroupOrder.QR_SUBGROUP)
    with pytest.raises(ParameterError):
        GroupParams(23, 11, 5, GroupOrder.QR_SUBGROUP)
    with pytest.raises(ParameterError):
        GroupParams(29, 14, 4, GroupOrder.QR_SUBGROUP)
    with pytest.raises(ParameterError):
        GroupParams(23, 11, 23, GroupOrder.FULL_GROUP)
    with pytest.raises(ParameterError):
        GroupParams.from_p_g(23, 22)
    assert GroupParams.from_p_g(23, 5).order == 22
    assert GroupParams.from_p_g(23, 4).order == 11


def test_gen_safe_prime_5_bits_is_23():
    for seed in range(5):
        params = gen_safe_prime(5, make_rng(seed))
        assert (params.p, params.q) == (23, 11)


@pytest.mark.parametrize("bits", [16, 20, 21, 32, 64, 128, 256])
@pytest.mark.parametrize("order", list(GroupOrder))
def test_gen_safe_prime_postconditions(bits, order):
    params = gen_safe_prime(bits, make_rng(bits), order)
    p, q, g = params.p, params.q, params.g
    assert p.bit_length() == bits
    assert p == 2 * q + 1
    assert is_probable_prime(p) and is_probable_prime(q)
    if order is GroupOrder.QR_SUBGROUP:
        assert pow(g, q, p) == 1 and g != 1
        assert g == smallest_non_residue(p) ** 2 % p
    else:
        assert pow(g, q, p) == p - 1
        assert g == smallest_non_residue(p)


def test_gen_safe_prime_deterministic_under_seed():
    assert gen_safe_prime(64, make_rng(9)) == gen_safe_prime(64, make_rng(9))


@pytest.mark.parametrize("bits", [4, 0, 4097])
def test_gen_safe_prime_bits_range(bits):
    with pytest.raises(ParameterError):
        gen_safe_prime(bits, make_rng(0))


def test_smallest_non_residue_is_non_residue():
    for p in SMALL_SAFE_PRIMES:
        g = smallest_non_residue(p)
        assert g not in squares_mod(p)
        assert all(x in squares_mod(p) for x in range(1, g))


def test_sqrt_unsupported_primes():
    for p in NOT_3_MOD_4:
        with pytest.raises(ParameterError):
            sqrt_mod(1, p)
