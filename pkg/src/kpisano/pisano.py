"""Pisano periods: a brute-force oracle and the structured prime-power engine.

The oracle walks the state map until the initial state recurs (or, when the
map is not invertible, finds the eventual cycle with Brent's method).  The
structured path factors m, computes each prime-power period from closed forms
and a divisor search, and combines them with lcm.  The two routes share
nothing beyond ``RecurrenceParams``; sweeps compare them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DomainError
from .numtheory import (
    check_u64,
    divisors,
    factorize,
    gcd,
    is_prime,
    lcm,
    legendre,
    p_adic_valuation,
)
from .recurrence import RecurrenceParams, matrix_power_state

log = logging.getLogger(__name__)

# a*v + b*u must stay inside int64 for the vectorised oracle.
_BATCH_MODULUS_LIMIT = 1 << 31


@dataclass(frozen=True)
class PeriodResult:
    preperiod: int
    period: int

    @property
    def pure(self) -> bool:
        return self.preperiod == 0


def _brent(params: RecurrenceParams, m: int) -> PeriodResult:
    a, b = params.a % m, params.b % m

    def f(state):
        u, v = state
        return (v, (a * v + b * u) % m)

    x0 = (params.c % m, params.d % m)
    power = lam = 1
    tortoise, hare = x0, f(x0)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1
    tortoise = hare = x0
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    return PeriodResult(mu, lam)


def period_oracle(params: RecurrenceParams, m: int) -> PeriodResult:
    """Cycle structure of the sequence modulo ``m`` by direct iteration."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    a, b = params.a % m, params.b % m
    if gcd(b, m) != 1:
        return _brent(params, m)
    u0, v0 = params.c % m, params.d % m
    u, v = v0, (a * v0 + b * u0) % m
    n = 1
    while u != u0 or v != v0:
        u, v = v, (a * v + b * u) % m
        n += 1
    return PeriodResult(0, n)


def oracle_periods(params: RecurrenceParams, moduli: Iterable[int]) -> list[int]:
    """Cycle lengths for many moduli at once.

    Invertible moduli are stepped together as numpy arrays, which is the same
    definitional walk as ``period_oracle``; the rest go through it directly.
    """
    moduli = [int(m) for m in moduli]
    if not moduli:
        return []
    if min(moduli) < 2:
        raise DomainError("every modulus must be >= 2")
    out = [0] * len(moduli)
    batch = []
    for i, m in enumerate(moduli):
        if m < _BATCH_MODULUS_LIMIT and gcd(params.b % m, m) == 1:
            batch.append(i)
        else:
            out[i] = period_oracle(params, m).period
    if batch:
        idx = np.array(batch, dtype=np.int64)
        ms = np.array([moduli[i] for i in batch], dtype=np.int64)
        u0 = params.c % ms
        v0 = params.d % ms
        A = params.a % ms
        B = params.b % ms
        u, v = u0.copy(), v0.copy()
        n = 0
        while idx.size:
            u, v = v, (A * v + B * u) % ms
            n += 1
            done = (u == u0) & (v == v0)
            if done.any():
                for i in idx[done]:
                    out[int(i)] = n
                keep = ~done
                idx, ms, u0, v0, A, B, u, v = (
                    arr[keep] for arr in (idx, ms, u0, v0, A, B, u, v)
                )
    return out


def oracle_fixed_points(params: RecurrenceParams, lo: int, hi: int) -> list[int]:
    """All m in [lo, hi] whose cycle length equals m, by direct iteration.

    Only the first ``hi`` steps are ever needed: a modulus is fixed exactly
    when its first return happens at step m.
    """
    lo = max(lo, 2)
    if hi < lo:
        return []
    fixed = []
    batch = []
    for m in range(lo, hi + 1):
        if m < _BATCH_MODULUS_LIMIT and gcd(params.b % m, m) == 1:
            batch.append(m)
        elif period_oracle(params, m).period == m:
            fixed.append(m)
    if batch:
        ms = np.array(batch, dtype=np.int64)
        u0 = params.c % ms
        v0 = params.d % ms
        A = params.a % ms
        B = params.b % ms
        u, v = u0.copy(), v0.copy()
        n = 0
        while ms.size:
            u, v = v, (A * v + B * u) % ms
            n += 1
            back = (u == u0) & (v == v0)
            fixed.extend(int(m) for m in ms[back & (ms == n)])
            keep = ~back & (ms > n)
            if not keep.all():
                ms, u0, v0, A, B, u, v = (arr[keep] for arr in (ms, u0, v0, A, B, u, v))
    return sorted(fixed)


# --- structured engine -------------------------------------------------------


def _k_params(k: int) -> RecurrenceParams:
    return RecurrenceParams.k_fibonacci(k)


def _returns_to_start(k: int, n: int, m: int) -> bool:
    s = matrix_power_state(_k_params(k), n, m)
    return s.u == 0 and s.v == 1 % m


def _check_k(k: int) -> None:
    if k < 1:
        raise DomainError(f"K must be a positive integer, got {k}")
    check_u64(k * k + 4, "K^2+4")


@lru_cache(maxsize=None)
def pisano_prime_detail(k: int, p: int) -> tuple[int, bool]:
    """``(pi_K(p), fell_back)``; ``fell_back`` is True only if the divisor
    search found nothing and the oracle had to answer."""
    _check_k(k)
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2:
        return (3 if k % 2 else 2), False
    if p == 3:
        return (2 if k % 3 == 0 else 8), False
    disc = k * k + 4
    if disc % p == 0:
        return 4 * p, False
    bound = p - 1 if legendre(disc, p) == 1 else 2 * (p + 1)
    for d in divisors(bound):
        if _returns_to_start(k, d, p):
            return d, False
    log.warning("divisor search failed for K=%d p=%d; using the oracle", k, p)
    return period_oracle(_k_params(k), p).period, True


def pisano_prime(k: int, p: int) -> int:
    return pisano_prime_detail(k, p)[0]


def _wss_depth(k: int, p: int, limit: int) -> int:
    """Largest e <= limit with pi_K(p^e) = pi_K(p), for odd p not dividing K^2+4.

    pi_K(p^e) = pi_K(p) exactly when the state after pi_K(p) steps is back at
    (0, 1) modulo p^e.  Once the period changes it never stabilises again, so
    the scan stops at the first failure.
    """
    base = pisano_prime(k, p)
    e = 1
    while e < limit:
        modulus = p ** (e + 1)
        check_u64(modulus, f"{p}^{e + 1}")
        if not _returns_to_start(k, base, modulus):
            break
        e += 1
    return e


@lru_cache(maxsize=None)
def pisano_prime_power(k: int, p: int, e: int) -> int:
    _check_k(k)
    if e < 1:
        raise DomainError(f"exponent must be >= 1, got {e}")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    check_u64(p**e, f"{p}^{e}")
    if p == 2:
        if k % 2:
            result = 3 * 2 ** (e - 1)
        else:
            result = 2 ** (e + 1 - p_adic_valuation(gcd(k, 2**e), 2))
        return check_u64(result, "period")
    base = pisano_prime(k, p)
    if e == 1:
        return base
    if (k * k + 4) % p == 0:
        depth = 1
    else:
        depth = _wss_depth(k, p, e)
    return check_u64(p ** max(0, e - depth) * base, "period")


def pisano_structured(k: int, m: int) -> int:
    """pi_K(m) as the lcm of its prime-power periods."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    _check_k(k)
    return reduce(lcm, (pisano_prime_power(k, p, e) for p, e in factorize(m)), 1)


def is_k_wall_sun_sun(k: int, p: int) -> bool:
    """Whether pi_K(p) = pi_K(p^2), both measured by the oracle."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    check_u64(p * p, f"{p}^2")
    params = _k_params(k)
    return period_oracle(params, p).period == period_oracle(params, p * p).period


class WssExponent(NamedTuple):
    exponent: int
    saturated: bool


def max_wss_exponent(k: int, p: int, cap: int) -> WssExponent:
    """Largest e <= cap with pi_K(p^e) = pi_K(p).

    ``saturated`` is set when the period had not changed by ``cap``; the true
    exponent may then be larger.
    """
    if cap < 1:
        raise DomainError(f"cap must be >= 1, got {cap}")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    check_u64(p**cap, f"{p}^{cap}")
    base = pisano_prime(k, p)
    e = 1
    while e < cap and pisano_prime_power(k, p, e + 1) == base:
        e += 1
    return WssExponent(e, e == cap)


def period(params: RecurrenceParams, m: int, method: str = "auto") -> PeriodResult:
    """Period by the requested route; ``auto`` prefers the structured engine
    whenever the sequence is a K-Fibonacci sequence."""
    if method not in ("auto", "oracle", "structured"):
        raise DomainError(f"unknown method {method!r}")
    if method == "oracle" or (method == "auto" and not params.is_k_fibonacci):
        return period_oracle(params, m)
    if not params.is_k_fibonacci:
        raise DomainError("the structured engine only handles (K,1,0,1) sequences")
    return PeriodResult(0, pisano_structured(params.a, m))
