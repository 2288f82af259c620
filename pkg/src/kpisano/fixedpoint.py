"""Fixed points of the period map m -> pi_K(m), and trajectories to them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DomainError, InvariantViolation, NoConvergenceError
from .numtheory import check_u64, factorize, p_adic_valuation
from .pisano import pisano_structured

DEFAULT_MAX_ITERS = 200

_LOG_GAP = 2 * math.log(3) - 3 * math.log(2)
# Asymptotic ceilings on T_K(m)/log m and log P_K(m)/log m.
TRAJECTORY_RATIO_BOUND = 1 / math.log(2) + 1 / _LOG_GAP
TERMINAL_RATIO_BOUND = (math.log(8) - math.log(3)) / _LOG_GAP


class KCategory(enum.Enum):
    PM1_MOD6 = "K = ±1 (mod 6)"
    TWO_MOD4 = "K = 2 (mod 4)"
    THREE_MOD6 = "K = 3 (mod 6)"
    ZERO_MOD4 = "K = 0 (mod 4)"


def k_category(k: int) -> KCategory:
    if k < 1:
        raise DomainError(f"K must be a positive integer, got {k}")
    if k % 2:
        return KCategory.THREE_MOD6 if k % 6 == 3 else KCategory.PM1_MOD6
    return KCategory.ZERO_MOD4 if k % 4 == 0 else KCategory.TWO_MOD4


@dataclass(frozen=True)
class FixedPointFamily:
    """A set of moduli described by a few standalone values plus one
    composite form ``composite_base * prod(p^j_p)``.

    ``allowed_primes`` pairs each prime with its minimum exponent.  With
    ``free_two_power`` the composite may carry any extra power of 2; with
    ``require_prime_factor`` at least one allowed prime must actually occur.
    ``pure_power_prime`` adds every power p, p^2, ... of that prime.
    """

    category: KCategory
    base_values: tuple[int, ...] = ()
    composite_base: Optional[int] = None
    allowed_primes: tuple[tuple[int, int], ...] = ()
    pure_power_prime: Optional[int] = None
    free_two_power: bool = False
    require_prime_factor: bool = False

    def describe(self) -> str:
        parts = [str(v) for v in self.base_values]
        if self.pure_power_prime is not None:
            parts.append(f"{self.pure_power_prime}^j")
        if self.composite_base is not None and (self.allowed_primes or not self.pure_power_prime):
            parts.append(self._describe_composite())
        return " or ".join(parts)

    def _describe_composite(self) -> str:
        base = self.composite_base
        single = len(self.allowed_primes) == 1
        head = str(base)
        if self.free_two_power:
            head = f"2^{{i+{p_adic_valuation(base, 2)}}}"
            rest = base >> p_adic_valuation(base, 2)
            if rest > 1:
                head += f"×{rest}"
        terms = [head]
        for n, (p, lo) in enumerate(self.allowed_primes, start=1):
            j = "j" if single else f"j{n}"
            if self.require_prime_factor and single:
                lo = max(lo, 1)
            terms.append(f"{p}^{j}" if lo == 0 else f"{p}^{{{j}+{lo}}}")
        text = "×".join(terms)
        if self.require_prime_factor and not single:
            text += " (some j ≥ 1)"
        return text

    def contains(self, m: int) -> bool:
        return family_contains(self, m)

    def members(self, bound: int) -> list[int]:
        return family_members(self, bound)


def predicted_family(k: int) -> FixedPointFamily:
    """Fixed points of the (K,1,0,1) sequence, organised by K's category.

    Odd primes of K^2+4 always enter freely except that the 12-based and
    4-based composites need at least one of them (12 and 4 themselves are not
    fixed), and the 2-power in front of the odd part must be at least 4.
    """
    category = k_category(k)
    disc = factorize(check_u64(k * k + 4, "K^2+4"))
    odd = tuple((p, 0) for p in disc.primes if p != 2)
    if category is KCategory.PM1_MOD6:
        return FixedPointFamily(category, composite_base=24, allowed_primes=odd)
    if category is KCategory.TWO_MOD4:
        return FixedPointFamily(
            category,
            pure_power_prime=2,
            composite_base=4,
            allowed_primes=odd,
            free_two_power=True,
        )
    if category is KCategory.THREE_MOD6:
        return FixedPointFamily(
            category,
            base_values=(6,),
            composite_base=12,
            allowed_primes=odd,
            require_prime_factor=True,
        )
    return FixedPointFamily(
        category,
        base_values=(2,),
        composite_base=4,
        allowed_primes=odd,
        require_prime_factor=True,
    )


def tabulated_family(k: int) -> FixedPointFamily:
    """The classification exactly as tabulated: 2^{j+1} in front of the odd
    part for K = 2 (mod 4), a bare 12 allowed for K = 3 (mod 6), and every odd
    prime of K^2+4 to exponent >= 1 for K = 0 (mod 4)."""
    category = k_category(k)
    disc = factorize(check_u64(k * k + 4, "K^2+4"))
    odd = tuple(p for p in disc.primes if p != 2)
    if category is KCategory.PM1_MOD6:
        return FixedPointFamily(category, composite_base=24, allowed_primes=tuple((p, 0) for p in odd))
    if category is KCategory.TWO_MOD4:
        return FixedPointFamily(
            category,
            pure_power_prime=2,
            composite_base=2,
            allowed_primes=tuple((p, 0) for p in odd),
            free_two_power=True,
        )
    if category is KCategory.THREE_MOD6:
        return FixedPointFamily(
            category, base_values=(6,), composite_base=12, allowed_primes=tuple((p, 0) for p in odd)
        )
    return FixedPointFamily(
        category, base_values=(2,), composite_base=4, allowed_primes=tuple((p, 1) for p in odd)
    )


def converse_family(k: int) -> FixedPointFamily:
    """The reading used when deriving the classification from pi_K(m) = m:
    2^{j+2} in front of the odd part for K = 2 (mod 4), and a bare 4 allowed
    for K = 0 (mod 4)."""
    fam = tabulated_family(k)
    if fam.category is KCategory.TWO_MOD4:
        return FixedPointFamily(
            fam.category,
            pure_power_prime=2,
            composite_base=4,
            allowed_primes=fam.allowed_primes,
            free_two_power=True,
        )
    if fam.category is KCategory.ZERO_MOD4:
        return FixedPointFamily(
            fam.category,
            base_values=(2,),
            composite_base=4,
            allowed_primes=tuple((p, 0) for p, _ in fam.allowed_primes),
        )
    return fam


def _is_pure_power(m: int, p: int) -> bool:
    if m < p:
        return False
    while m % p == 0:
        m //= p
    return m == 1


def family_contains(family: FixedPointFamily, m: int) -> bool:
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    if m in family.base_values:
        return True
    if family.pure_power_prime is not None and _is_pure_power(m, family.pure_power_prime):
        return True
    base = family.composite_base
    if base is None or m % base:
        return False
    rest = m // base
    if family.free_two_power:
        while rest % 2 == 0:
            rest //= 2
    used = False
    for p, lo in family.allowed_primes:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e < lo:
            return False
        used = used or e > 0
    if rest != 1:
        return False
    return used or not family.require_prime_factor


def family_members(family: FixedPointFamily, bound: int) -> list[int]:
    """Every member of ``family`` in [2, bound], ascending."""
    out = {v for v in family.base_values if 2 <= v <= bound}
    if family.pure_power_prime is not None:
        q = family.pure_power_prime
        while q <= bound:
            out.add(q)
            q *= family.pure_power_prime
    if family.composite_base is not None:
        gens = [(p, lo) for p, lo in family.allowed_primes]
        if family.free_two_power:
            gens.insert(0, (2, 0))
        stack = [(family.composite_base, 0)]
        while stack:
            value, i = stack.pop()
            if i == len(gens):
                if value <= bound:
                    out.add(value)
                continue
            p, lo = gens[i]
            v = value * p**lo
            while v <= bound:
                stack.append((v, i + 1))
                v *= p
    return sorted(m for m in out if m >= 2 and family_contains(family, m))


def is_fixed_point(k: int, m: int) -> bool:
    return pisano_structured(k, m) == m


def enumerate_fixed_points(k: int, bound: int) -> list[int]:
    if bound < 2:
        raise DomainError(f"bound must be >= 2, got {bound}")
    return [m for m in range(2, bound + 1) if pisano_structured(k, m) == m]


class Terminal(enum.Enum):
    FIXED_POINT = "fixed"
    TWO_CYCLE = "2-cycle"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class Trajectory:
    """Orbit of ``start`` under the period map.

    ``length_t`` counts the iterations needed to land on the terminal fixed
    point (or to enter the {2, 3} cycle).
    """

    k: int
    start: int
    steps: tuple[int, ...]
    terminal: Terminal
    length_t: int

    @property
    def terminal_value(self) -> Optional[int]:
        if self.terminal is Terminal.FIXED_POINT:
            return self.steps[-1]
        if self.terminal is Terminal.TWO_CYCLE:
            return 0
        return None

    def chain(self) -> str:
        return " → ".join(str(s) for s in self.steps)


def trajectory(
    k: int,
    m: int,
    max_iters: int = DEFAULT_MAX_ITERS,
    period_fn: Optional[Callable[[int], int]] = None,
) -> Trajectory:
    """Iterate pi_K from ``m`` until a fixed point or the {2, 3} cycle.

    ``period_fn`` replaces ``pisano_structured(k, .)``, e.g. with a cached
    version during sweeps.
    """
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    if max_iters < 1:
        raise DomainError(f"max_iters must be >= 1, got {max_iters}")
    pi = period_fn or (lambda n: pisano_structured(k, n))
    steps = [m]
    seen = {m: 0}
    for _ in range(max_iters):
        cur = steps[-1]
        nxt = pi(cur)
        if nxt == cur:
            return Trajectory(k, m, tuple(steps), Terminal.FIXED_POINT, len(steps) - 1)
        if nxt in seen:
            entry = seen[nxt]
            cycle = set(steps[entry:])
            if cycle != {2, 3} or k % 6 != 3:
                raise InvariantViolation(
                    f"K={k}: trajectory of {m} entered the cycle {steps[entry:]}"
                )
            steps.append(nxt)
            return Trajectory(k, m, tuple(steps), Terminal.TWO_CYCLE, entry)
        seen[nxt] = len(steps)
        steps.append(nxt)
    return Trajectory(k, m, tuple(steps), Terminal.EXHAUSTED, len(steps) - 1)


def terminal_value(k: int, m: int, max_iters: int = DEFAULT_MAX_ITERS) -> int:
    """The fixed point ending the trajectory of ``m``, or 0 for the {2, 3} cycle."""
    t = trajectory(k, m, max_iters)
    if t.terminal is Terminal.EXHAUSTED:
        raise NoConvergenceError(t)
    return t.terminal_value


def s_diagnostic(k: int, m: int) -> float:
    """Sum of v_q(m) * (log q - log 3) over odd primes q | m with q != 3 and
    q not dividing K^2+4.  Diagnostic only; it measures how much of m still
    has to be shed before the trajectory reaches the fixed-point primes."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    disc = k * k + 4
    return sum(
        e * (math.log(q) - math.log(3))
        for q, e in factorize(m)
        if q not in (2, 3) and disc % q
    )


def g_valuation(m: int) -> int:
    """v_2(m) + v_3(m)."""
    return p_adic_valuation(m, 2) + p_adic_valuation(m, 3)


def bound_ratios(
    k: int, m: int, max_iters: int = DEFAULT_MAX_ITERS, traj: Optional[Trajectory] = None
) -> tuple[float, Optional[float]]:
    """``(T_K(m) / log m, log P_K(m) / log m)``; the second is None when the
    trajectory ends in the two-cycle."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    t = traj if traj is not None else trajectory(k, m, max_iters)
    if t.terminal is Terminal.EXHAUSTED:
        raise NoConvergenceError(t)
    log_m = math.log(m)
    p_value = t.terminal_value
    return t.length_t / log_m, (math.log(p_value) / log_m if p_value else None)
