"""Exact integer arithmetic on the unsigned 64-bit range.

Python integers never wrap, so the 64-bit contract is enforced explicitly:
anything that would leave ``[0, 2**64)`` raises ``ArithmeticOverflowError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .errors import ArithmeticOverflowError, DomainError, NotInvertibleError

U64_MAX = (1 << 64) - 1

TRIAL_DIVISION_LIMIT = 10_000

# Deterministic for every n < 3.3e24, which covers the full 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _sieve(limit: int) -> tuple[int, ...]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return tuple(i for i, f in enumerate(flags) if f)


_SMALL_PRIMES = _sieve(TRIAL_DIVISION_LIMIT)


def check_u64(value: int, what: str = "value") -> int:
    if value < 0 or value > U64_MAX:
        raise ArithmeticOverflowError(f"{what} {value} is outside the unsigned 64-bit range")
    return value


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def lcm(a: int, b: int) -> int:
    if a < 1 or b < 1:
        raise DomainError(f"lcm is defined for positive integers, got ({a}, {b})")
    return check_u64(a // math.gcd(a, b) * b, "lcm")


def mod_pow(base: int, exp: int, m: int) -> int:
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    if exp < 0:
        raise DomainError(f"exponent must be non-negative, got {exp}")
    return pow(base % m, exp, m)


def mod_inv(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m``; raises ``NotInvertibleError`` carrying the gcd."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    g = math.gcd(a % m, m)
    if g != 1:
        raise NotInvertibleError(a, m, g)
    return pow(a % m, -1, m)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    check_u64(n, "primality candidate")
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of ``value`` as ``(prime, exponent)`` pairs, primes ascending."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        product = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factor list {self.factors}")
            last = p
            product *= p**e
        if product != self.value:
            raise ValueError(f"factors {self.factors} do not multiply to {self.value}")

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "·".join(str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors)


def _pollard_brent(n: int) -> int:
    """A non-trivial factor of the odd composite ``n``.

    Offsets c = 1, 2, 3, ... are tried in order and every run starts from the
    same point, so the result is reproducible.
    """
    c = 0
    while True:
        c += 1
        y, r, q, m = 2, 1, 1, 128
        g = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # Batched gcd overshot; redo one step at a time from the saved point.
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    """Trial division by primes below 10^4, then Pollard rho (Brent) on the cofactor."""
    if n < 1:
        raise DomainError(f"factorize requires n >= 1, got {n}")
    check_u64(n, "factorize argument")
    found: dict[int, int] = {}
    rest = n
    for p in _SMALL_PRIMES:
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            found[p] = e
    if rest > 1:
        if rest < TRIAL_DIVISION_LIMIT * TRIAL_DIVISION_LIMIT:
            found[rest] = found.get(rest, 0) + 1
        else:
            _split(rest, found)
    return Factorization(n, tuple(sorted(found.items())))


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n`` in increasing order."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def multiplicative_order(a: int, p: int) -> int:
    """Least d >= 1 with a^d = 1 (mod p), for prime ``p``."""
    if not is_prime(p):
        raise DomainError(f"multiplicative_order needs a prime modulus, got {p}")
    a %= p
    if a == 0:
        raise NotInvertibleError(a, p, p)
    order = p - 1
    for q, _ in factorize(p - 1):
        while order % q == 0 and pow(a, order // q, p) == 1:
            order //= q
    return order


def p_adic_valuation(n: int, p: int) -> int:
    if n < 1:
        raise DomainError(f"valuation needs n >= 1, got {n}")
    if p < 2:
        raise DomainError(f"valuation needs a prime p, got {p}")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, by Euler's criterion."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r
