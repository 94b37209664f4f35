import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from votecrack import _kernels
from votecrack.modmath import GroupOrder, gen_safe_prime, make_rng

needs_jit = pytest.mark.skipif(not _kernels._HAVE_NUMBA, reason="numba not installed")

MODULI = (23, (1 << 40) - 87, (1 << 61) - 1, (1 << 62) - 57)


@needs_jit
@settings(max_examples=300)
@given(st.sampled_from(MODULI), st.integers(0, 2**62), st.integers(0, 2**62))
def test_mulmod_matches_python(m, a, b):
    a, b = a % m, b % m
    assert int(_kernels.mulmod_jit(np.uint64(a), np.uint64(b), np.uint64(m))) == a * b % m


def test_env_flag(monkeypatch):
    monkeypatch.setenv("VOTECRACK_DISABLE_JIT", "1")
    assert not _kernels.jit_enabled()
    monkeypatch.setenv("VOTECRACK_DISABLE_JIT", "0")
    assert _kernels.jit_enabled() == _kernels._HAVE_NUMBA


def _walk_inputs(params, seed):
    rng = make_rng(seed)
    p, q, g = params.p, params.q, params.g
    x = rng.randrange(q)
    h = pow(g, x, p)
    sa = [rng.randrange(q) for _ in range(_kernels.RHO_PARTITIONS)]
    sb = [rng.randrange(q) for _ in range(_kernels.RHO_PARTITIONS)]
    mult = [pow(g, u, p) * pow(h, v, p) % p for u, v in zip(sa, sb)]
    a0, b0 = rng.randrange(q), rng.randrange(q)
    x0 = pow(g, a0, p) * pow(h, b0, p) % p
    return (x0, a0, b0, mult, sa, sb, q, p), g, h


@needs_jit
@pytest.mark.parametrize("bits", [16, 24, 32, 40])
def test_rho_walk_paths_agree(bits, monkeypatch):
    params = gen_safe_prime(bits, make_rng(bits), GroupOrder.QR_SUBGROUP)
    for seed in range(5):
        args, g, h = _walk_inputs(params, seed)
        fast = _kernels.rho_walk(*args, 1 << 22)
        monkeypatch.setenv("VOTECRACK_DISABLE_JIT", "1")
        slow = _kernels.rho_walk(*args, 1 << 22)
        monkeypatch.delenv("VOTECRACK_DISABLE_JIT")
        assert fast == slow
        found, a1, b1, a2, b2, _ = fast
        assert found == 1
        p = params.p
        assert pow(g, a1, p) * pow(h, b1, p) % p == pow(g, a2, p) * pow(h, b2, p) % p


def test_rho_walk_respects_budget():
    params = gen_safe_prime(40, make_rng(1), GroupOrder.QR_SUBGROUP)
    args, _, _ = _walk_inputs(params, 0)
    found, *_, steps = _kernels.rho_walk(*args, 10)
    assert found == 0 and steps == 10
    found, *_, steps = _kernels.rho_walk_py(*args, 10)
    assert found == 0 and steps == 10


@needs_jit
@pytest.mark.parametrize("bits", [16, 24, 32])
def test_bsgs_paths_agree(bits, monkeypatch):
    params = gen_safe_prime(bits, make_rng(bits), GroupOrder.FULL_GROUP)
    rng = make_rng(bits)
    for _ in range(10):
        x = rng.randrange(params.order)
        h = pow(params.g, x, params.p)
        fast = _kernels.bsgs_search(params.g, h, params.order, params.p)
        slow = _kernels.bsgs_py(params.g, h, params.order, params.p)
        assert fast == slow == x


def test_bsgs_not_found_both_paths():
    # 5 is outside the order-11 subgroup generated by 4 mod 23
    assert _kernels.bsgs_py(4, 5, 11, 23) == -1
    if _kernels._HAVE_NUMBA:
        assert _kernels.bsgs_search(4, 5, 11, 23) == -1


def test_large_modulus_falls_back_to_python():
    p = (1 << 64) + 13
    # not a group-theoretic check, just that the dispatcher takes the big-int path
    assert _kernels.bsgs_search(3, pow(3, 5, p), 1 << 20, p) == 5
