"""Private-key recovery by discrete logarithms in safe-prime groups.

Generic-group solvers (baby-step giant-step, Pollard rho) stand in for the
Number Field Sieve, so this is practical up to roughly 56-bit moduli.  The
front end for full-group generators (order 2q) splits the log into a log
modulo q, found in the squares subgroup, and a parity bit read off the
Legendre symbols; the two are glued back together by CRT.

Every value returned from this module has been re-exponentiated.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt

from . import _kernels
from .elgamal import MultiParams
from .errors import (
    BudgetExceededError,
    InconsistencyError,
    NotFoundError,
    ParameterError,
    VotecrackError,
)
from .modmath import GroupOrder, GroupParams, RandomSource, is_probable_prime, jacobi, make_rng

BSGS_MAX_ORDER = 1 << 50
SOLVERS = ("auto", "bsgs", "rho")


def _check(g: int, x: int, h: int, p: int) -> int:
    if pow(g, x, p) != h % p:
        raise InconsistencyError(f"g^{x} != h (mod p)")
    return x


def exhaustive_log(g: int, h: int, order: int, p: int) -> int:
    """Walk g^0, g^1, ... until h; the oracle for small orders."""
    e = 1
    h %= p
    for x in range(order):
        if e == h:
            return x
        e = e * g % p
    raise NotFoundError("h is not a power of g")


def bsgs(g: int, h: int, order: int, p: int) -> int:
    """Log of h to base g, where g has exactly ``order`` elements; O(sqrt(order))."""
    if order < 1:
        raise ParameterError("order must be positive")
    if order > BSGS_MAX_ORDER:
        raise ParameterError("order exceeds the baby-step table bound 2^50")
    x = _kernels.bsgs_search(g % p, h % p, order, p)
    if x < 0:
        raise NotFoundError("h is not in the subgroup generated by g")
    return _check(g, x, h, p)


def default_rho_budget(order: int) -> int:
    # expected walk length is about 1.25 sqrt(order); allow generous restarts
    return 64 * (isqrt(order) + 32)


def pollard_rho(
    g: int,
    h: int,
    order: int,
    p: int,
    rng: RandomSource,
    max_iterations: int | None = None,
) -> int:
    """Pollard rho in a subgroup of prime ``order``.

    Uses a 32-way additive walk and Brent cycle detection.  A collision with
    no information (equal h-coefficients) triggers a restart from fresh random
    multipliers; the iteration budget spans all restarts.
    """
    if order < 2 or not is_probable_prime(order):
        raise ParameterError("pollard_rho needs a prime subgroup order")
    h %= p
    if pow(h, order, p) != 1:
        raise NotFoundError("h is not in the subgroup of order `order`")
    if h == 1:
        return 0
    budget = max_iterations if max_iterations is not None else default_rho_budget(order)
    used = 0
    while used < budget:
        step_a = [rng.randrange(order) for _ in range(_kernels.RHO_PARTITIONS)]
        step_b = [rng.randrange(order) for _ in range(_kernels.RHO_PARTITIONS)]
        mult = [pow(g, u, p) * pow(h, v, p) % p for u, v in zip(step_a, step_b)]
        a0, b0 = rng.randrange(order), rng.randrange(order)
        x0 = pow(g, a0, p) * pow(h, b0, p) % p
        found, a1, b1, a2, b2, steps = _kernels.rho_walk(
            x0, a0, b0, mult, step_a, step_b, order, p, budget - used
        )
        used += steps
        if not found:
            break
        # g^a1 h^b1 = g^a2 h^b2  =>  x (b1 - b2) = a2 - a1  (mod order)
        db = (b1 - b2) % order
        if db == 0:
            continue
        x = (a2 - a1) * pow(db, -1, order) % order
        return _check(g, x, h, p)
    raise BudgetExceededError("pollard rho budget exhausted", used)


def solve_prime_order(
    g: int, h: int, order: int, p: int, solver: str = "auto", rng: RandomSource | None = None
) -> int:
    if solver not in SOLVERS:
        raise ParameterError(f"unknown solver {solver!r}")
    if solver == "auto":
        # rho needs no table and beats the sorted-table bsgs under numba
        solver = "rho" if is_probable_prime(order) else "bsgs"
    if solver == "bsgs":
        return bsgs(g, h, order, p)
    return pollard_rho(g, h, order, p, rng if rng is not None else make_rng(order))


def solve_safe_prime_dlog(
    params: GroupParams, h: int, solver: str = "auto", rng: RandomSource | None = None
) -> int:
    """Log of h for a generator of order 2q, via the order-q subgroup plus parity."""
    if params.g_order is not GroupOrder.FULL_GROUP:
        raise ParameterError("solve_safe_prime_dlog expects a generator of order 2q")
    p, q, g = params.p, params.q, params.g
    if not 1 <= h <= p - 1:
        raise ParameterError("h must lie in [1, p-1]")
    # squaring projects both into Q_p, where g^2 has prime order q
    x_q = solve_prime_order(g * g % p, h * h % p, q, p, solver, rng)
    # g is a non-residue, so (h/p) = (-1)^x
    parity = (1 - jacobi(h, p)) // 2
    x = x_q if x_q % 2 == parity else x_q + q
    return _check(g, x, h, p)


def recover_private_key(
    params: GroupParams, pk: int, solver: str = "auto", rng: RandomSource | None = None
) -> int:
    """Secret exponent behind ``pk``, reduced modulo the order of g."""
    if not 1 <= pk <= params.p - 1:
        raise ParameterError("public key must lie in [1, p-1]")
    if params.g_order is GroupOrder.FULL_GROUP:
        return solve_safe_prime_dlog(params, pk, solver, rng)
    if pow(pk, params.q, params.p) != 1:
        raise NotFoundError("public key is outside the subgroup generated by g")
    return solve_prime_order(params.g, pk, params.q, params.p, solver, rng)


@dataclass(frozen=True)
class LevelRecovery:
    level: int
    sk: int | None
    seconds: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class MultiKeyRecovery:
    levels: tuple[LevelRecovery, ...]

    @property
    def ok(self) -> bool:
        return all(lv.ok for lv in self.levels)

    @property
    def keys(self) -> tuple[int, int, int]:
        if not self.ok:
            failed = [lv.level for lv in self.levels if not lv.ok]
            raise VotecrackError(f"key recovery failed for level(s) {failed}")
        return tuple(lv.sk for lv in self.levels)


def _recover_level(level: int, params: GroupParams, pk: int, solver: str, seed: int) -> LevelRecovery:
    start = time.perf_counter()
    try:
        sk = recover_private_key(params, pk, solver, make_rng(seed + level))
        if pow(params.g, sk, params.p) != pk:
            raise InconsistencyError("recovered key does not reproduce pk")
    except VotecrackError as exc:
        return LevelRecovery(level, None, time.perf_counter() - start, f"{type(exc).__name__}: {exc}")
    return LevelRecovery(level, sk, time.perf_counter() - start)


def recover_multi_keys(
    mp: MultiParams,
    pks: tuple[int, int, int],
    workers: int = 3,
    solver: str = "auto",
    seed: int = 0,
) -> MultiKeyRecovery:
    """Recover the three level keys independently, ``workers`` at a time.

    The chaining between levels plays no role here.  A failing level is
    reported in its ``LevelRecovery`` and does not stop the others.
    """
    if workers < 1:
        raise ParameterError("workers must be >= 1")
    jobs = [(i, lv, pk) for i, (lv, pk) in enumerate(zip(mp.levels, pks), start=1)]
    if workers == 1:
        results = [_recover_level(i, lv, pk, solver, seed) for i, lv, pk in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_recover_level, i, lv, pk, solver, seed) for i, lv, pk in jobs]
            results = [f.result() for f in futures]
    return MultiKeyRecovery(tuple(results))
