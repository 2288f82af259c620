"""Binary recurrences U_n = a*U_{n-1} + b*U_{n-2} reduced modulo m."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class RecurrenceParams:
    """Multipliers ``a``, ``b`` and initial values ``U_0 = c``, ``U_1 = d``.

    Negative values are allowed; they are reduced into [0, m) before use.
    """

    a: int
    b: int
    c: int = 0
    d: int = 1

    @classmethod
    def k_fibonacci(cls, k: int) -> "RecurrenceParams":
        return cls(k, 1, 0, 1)

    @property
    def is_k_fibonacci(self) -> bool:
        return self.b == 1 and self.c == 0 and self.d == 1 and self.a >= 1

    def discriminant(self) -> int:
        return self.a * self.a + 4 * self.b


@dataclass(frozen=True)
class StatePair:
    """Two consecutive terms ``(U_n, U_{n+1})`` modulo ``modulus``."""

    u: int
    v: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise DomainError(f"modulus must be >= 2, got {self.modulus}")
        if not (0 <= self.u < self.modulus and 0 <= self.v < self.modulus):
            raise DomainError(f"state ({self.u}, {self.v}) not reduced mod {self.modulus}")

    @classmethod
    def initial(cls, params: RecurrenceParams, m: int) -> "StatePair":
        if m < 2:
            raise DomainError(f"modulus must be >= 2, got {m}")
        return cls(params.c % m, params.d % m, m)

    def as_tuple(self) -> tuple[int, int]:
        return (self.u, self.v)


def step(params: RecurrenceParams, s: StatePair) -> StatePair:
    m = s.modulus
    return StatePair(s.v, ((params.a % m) * s.v + (params.b % m) * s.u) % m, m)


def sequence_mod(params: RecurrenceParams, m: int, count: int) -> list[int]:
    """The first ``count`` terms U_0 .. U_{count-1} modulo ``m``."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    a, b = params.a % m, params.b % m
    u, v = params.c % m, params.d % m
    out = []
    for _ in range(count):
        out.append(u)
        u, v = v, (a * v + b * u) % m
    return out


def _mat_mul(x: tuple[int, int, int, int], y: tuple[int, int, int, int], m: int):
    x00, x01, x10, x11 = x
    y00, y01, y10, y11 = y
    return (
        (x00 * y00 + x01 * y10) % m,
        (x00 * y01 + x01 * y11) % m,
        (x10 * y00 + x11 * y10) % m,
        (x10 * y01 + x11 * y11) % m,
    )


def matrix_power_state(params: RecurrenceParams, n: int, m: int) -> StatePair:
    """``(U_n, U_{n+1}) mod m`` by binary powering of the companion matrix.

    The matrix [[a, b], [1, 0]] maps the column (U_{k+1}, U_k) to
    (U_{k+2}, U_{k+1}); its n-th power is applied to the initial state so any
    (c, d) works, not just (0, 1).
    """
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    result = (1, 0, 0, 1)
    base = (params.a % m, params.b % m, 1, 0)
    while n:
        if n & 1:
            result = _mat_mul(result, base, m)
        base = _mat_mul(base, base, m)
        n >>= 1
    c, d = params.c % m, params.d % m
    r00, r01, r10, r11 = result
    return StatePair((r10 * d + r11 * c) % m, (r00 * d + r01 * c) % m, m)
