"""Word-size discrete-log inner loops.

Every kernel exists twice: a numba ``@njit`` version working on ``uint64``
and a plain Python version with identical control flow.  Both return the
same values for the same inputs, so the JIT is purely a speed switch.

Set ``VOTECRACK_DISABLE_JIT=1`` to force the Python path (numba is also
skipped when it cannot be imported).  Moduli must stay below 2**62.
"""

from __future__ import annotations

import os

import numpy as np

WORD_LIMIT = 1 << 62
RHO_PARTITIONS = 32
_HASH_MUL = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def jit_enabled() -> bool:
    return _HAVE_NUMBA and os.environ.get("VOTECRACK_DISABLE_JIT", "") not in ("1", "true", "yes")


# --------------------------------------------------------------------------
# Python reference path
# --------------------------------------------------------------------------


def rho_walk_py(start_x, start_a, start_b, mult, step_a, step_b, order, p, budget):
    """Additive walk with Brent cycle detection.

    Returns ``(found, a1, b1, a2, b2, steps)`` where, when ``found`` is 1,
    g^a1 h^b1 == g^a2 h^b2.
    """
    mult = [int(v) for v in mult]
    step_a = [int(v) for v in step_a]
    step_b = [int(v) for v in step_b]
    x, a, b = start_x, start_a, start_b
    tx, ta, tb = x, a, b
    power = lam = 1
    steps = 0
    while steps < budget:
        j = ((x * _HASH_MUL) & _MASK64) >> 59
        x = x * mult[j] % p
        a += step_a[j]
        if a >= order:
            a -= order
        b += step_b[j]
        if b >= order:
            b -= order
        steps += 1
        if x == tx:
            return 1, ta, tb, a, b, steps
        if power == lam:
            tx, ta, tb = x, a, b
            power *= 2
            lam = 0
        lam += 1
    return 0, 0, 0, 0, 0, steps


def bsgs_py(g, h, order, p):
    """Baby-step giant-step; returns -1 when h is not in <g>."""
    m = 1
    while m * m < order:
        m += 1
    table = {}
    e = 1
    for j in range(m):
        table.setdefault(e, j)
        e = e * g % p
    giant = pow(pow(g, m, p), -1, p)
    gamma = h % p
    for i in range(m):
        j = table.get(gamma)
        if j is not None:
            return (i * m + j) % order
        gamma = gamma * giant % p
    return -1


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------

if _HAVE_NUMBA:

    @njit(cache=True, inline="always")
    def _mulmod(a, b, m, shift, chunks):
        # a, b < m < 2**62; multiply b in ``shift``-bit chunks so that every
        # intermediate stays below m * 2**shift <= 2**64
        mask = (np.uint64(1) << shift) - np.uint64(1)
        r = np.uint64(0)
        i = chunks
        while i > 0:
            i -= 1
            r = (r << shift) % m
            chunk = (b >> (shift * np.uint64(i))) & mask
            r = (r + (a * chunk) % m) % m
        return r

    @njit(cache=True)
    def _mul_plan(m):
        bits = np.uint64(0)
        t = m
        while t > np.uint64(0):
            bits += np.uint64(1)
            t >>= np.uint64(1)
        shift = np.uint64(64) - bits
        if shift > bits:
            shift = bits
        chunks = (bits + shift - np.uint64(1)) // shift
        return shift, chunks

    @njit(cache=True)
    def _powmod(base, e, m, shift, chunks):
        r = np.uint64(1) % m
        base = base % m
        while e > np.uint64(0):
            if e & np.uint64(1):
                r = _mulmod(r, base, m, shift, chunks)
            base = _mulmod(base, base, m, shift, chunks)
            e >>= np.uint64(1)
        return r

    @njit(cache=True, nogil=True)
    def _rho_walk_jit(start_x, start_a, start_b, mult, step_a, step_b, order, p, budget):
        shift, chunks = _mul_plan(p)
        hmul = np.uint64(_HASH_MUL)
        s59 = np.uint64(59)
        x = start_x
        a = start_a
        b = start_b
        tx = x
        ta = a
        tb = b
        power = 1
        lam = 1
        steps = 0
        while steps < budget:
            j = (x * hmul) >> s59
            x = _mulmod(x, mult[j], p, shift, chunks)
            a += step_a[j]
            if a >= order:
                a -= order
            b += step_b[j]
            if b >= order:
                b -= order
            steps += 1
            if x == tx:
                return 1, ta, tb, a, b, steps
            if power == lam:
                tx = x
                ta = a
                tb = b
                power *= 2
                lam = 0
            lam += 1
        z = np.uint64(0)
        return 0, z, z, z, z, steps

    @njit(cache=True, nogil=True)
    def _bsgs_jit(g, h, order, p):
        shift, chunks = _mul_plan(p)
        m = np.uint64(1)
        while m * m < order:
            m += np.uint64(1)
        n = np.int64(m)
        baby = np.empty(n, dtype=np.uint64)
        e = np.uint64(1)
        for j in range(n):
            baby[j] = e
            e = _mulmod(e, g, p, shift, chunks)
        idx = np.argsort(baby)
        sorted_vals = baby[idx]
        # g^-m = g^(order - m) since g has order ``order``
        giant = _powmod(g, (order - m % order) % order, p, shift, chunks)
        gamma = h % p
        for i in range(n):
            pos = np.searchsorted(sorted_vals, gamma)
            if pos < n and sorted_vals[pos] == gamma:
                return np.int64((np.uint64(i) * m + np.uint64(idx[pos])) % order)
            gamma = _mulmod(gamma, giant, p, shift, chunks)
        return np.int64(-1)

    @njit(cache=True)
    def mulmod_jit(a, b, m):
        shift, chunks = _mul_plan(m)
        return _mulmod(a, b, m, shift, chunks)


def _u64(v: int) -> np.uint64:
    return np.uint64(v)


def rho_walk(start_x, start_a, start_b, mult, step_a, step_b, order, p, budget):
    """Dispatch the rho walk to numba or Python; returns Python ints."""
    if jit_enabled() and p < WORD_LIMIT:
        found, a1, b1, a2, b2, steps = _rho_walk_jit(
            _u64(start_x),
            _u64(start_a),
            _u64(start_b),
            np.asarray(mult, dtype=np.uint64),
            np.asarray(step_a, dtype=np.uint64),
            np.asarray(step_b, dtype=np.uint64),
            _u64(order),
            _u64(p),
            int(budget),
        )
        return int(found), int(a1), int(b1), int(a2), int(b2), int(steps)
    return rho_walk_py(start_x, start_a, start_b, mult, step_a, step_b, order, p, budget)


def bsgs_search(g: int, h: int, order: int, p: int) -> int:
    if jit_enabled() and p < WORD_LIMIT:
        # the g^-m exponent trick needs g of exact order ``order``
        return int(_bsgs_jit(_u64(g), _u64(h), _u64(order), _u64(p)))
    return bsgs_py(g, h, order, p)
