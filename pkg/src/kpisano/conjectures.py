"""General (a, b, c, d) recurrences: named sequences, the degenerate b = -1
cases, and the conjectured fixed-point families for b = -1."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError
from .fixedpoint import KCategory
from .numtheory import factorize, is_prime, legendre, mod_inv, multiplicative_order
from .pisano import oracle_fixed_points, oracle_periods
from .recurrence import RecurrenceParams

DEGENERATE_A = (-2, -1, 0, 1, 2)


class NamedSequence(enum.Enum):
    FIBONACCI = RecurrenceParams(1, 1, 0, 1)
    LUCAS = RecurrenceParams(1, 1, 2, 1)
    PELL = RecurrenceParams(2, 1, 0, 1)
    JACOBSTHAL = RecurrenceParams(1, 2, 0, 1)

    @property
    def params(self) -> RecurrenceParams:
        return self.value


# Published period rows; each maps to consecutive moduli from ``start``.
# The Jacobsthal row has one entry fewer than the others and lines up with
# m = 3, 4, ... (period 1 at m = 2 does not appear in it).
PUBLISHED_PERIOD_ROWS: dict[NamedSequence, tuple[int, tuple[int, ...]]] = {
    NamedSequence.FIBONACCI: (
        2,
        (3, 8, 6, 20, 24, 16, 12, 24, 60, 10, 24, 28, 48, 40, 24, 36, 24, 18, 60, 16, 30, 48, 24),
    ),
    NamedSequence.LUCAS: (
        2,
        (3, 8, 6, 4, 24, 16, 12, 24, 12, 10, 24, 28, 48, 8, 24, 36, 24, 18, 12, 16, 30, 48, 24),
    ),
    NamedSequence.PELL: (
        2,
        (2, 8, 4, 12, 8, 6, 8, 24, 12, 24, 8, 28, 6, 24, 16, 16, 24, 40, 12, 24, 24, 22, 8),
    ),
    NamedSequence.JACOBSTHAL: (
        3,
        (6, 2, 4, 6, 6, 2, 18, 4, 10, 6, 12, 6, 12, 2, 8, 18, 18, 4, 6, 10, 22, 6),
    ),
}


def b_minus1_params(a: int) -> RecurrenceParams:
    return RecurrenceParams(a, -1, 0, 1)


def degenerate_period(a: int, m: int) -> int:
    """Period of the (a, -1, 0, 1) sequence for the five values of ``a`` where
    it is eventually trivial: a cycle of length 6, 3 or 4, or the linear
    sequence 0, 1, 2, ... (a = 2) and its sign-alternating twin (a = -2)."""
    if a not in DEGENERATE_A:
        raise DomainError(f"a={a} is not one of the degenerate values {DEGENERATE_A}")
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    if a == 1:
        return 3 if m == 2 else 6
    if a == -1:
        # modulo 2 the sequence is 0, 1, 1, 0, ...: still period 3
        return 3
    if a == 2:
        return m
    if a == -2:
        return m if m % 2 == 0 else 2 * m
    return 2 if m == 2 else 4


def named_period_row(seq: NamedSequence, m_lo: int, m_hi: int) -> list[int]:
    """Cycle length for each m in [m_lo, m_hi]; eventual cycle when the
    sequence is not purely periodic."""
    if not 2 <= m_lo <= m_hi:
        raise DomainError(f"need 2 <= m_lo <= m_hi, got {m_lo}..{m_hi}")
    return oracle_periods(seq.params, range(m_lo, m_hi + 1))


def _fixed_points(params: RecurrenceParams, bound: int) -> list[int]:
    if bound < 2:
        raise DomainError(f"bound must be >= 2, got {bound}")
    return oracle_fixed_points(params, 2, bound)


def lucas_fixed_points(bound: int) -> list[int]:
    return _fixed_points(NamedSequence.LUCAS.params, bound)


def pell_fixed_points(bound: int) -> list[int]:
    return _fixed_points(NamedSequence.PELL.params, bound)


def jacobsthal_fixed_points(bound: int) -> list[int]:
    return _fixed_points(NamedSequence.JACOBSTHAL.params, bound)


def _a_category(a: int) -> KCategory:
    if a % 2:
        return KCategory.THREE_MOD6 if a % 6 == 3 else KCategory.PM1_MOD6
    return KCategory.ZERO_MOD4 if a % 4 == 0 else KCategory.TWO_MOD4


@dataclass(frozen=True)
class CompositeForm:
    """``base * prod(p^j_p)`` with ``j_p >= min_exponent`` for each listed prime."""

    base: int
    primes: tuple[tuple[int, int], ...]

    def contains(self, m: int) -> bool:
        if m % self.base:
            return False
        rest = m // self.base
        for p, lo in self.primes:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            if e < lo:
                return False
        return rest == 1

    def describe(self) -> str:
        primes = self.primes
        terms = [str(self.base)] if self.base > 1 or not primes else []
        if self.base == 2 and primes and primes[0][0] == 2:
            # 2 * 2^j reads better as a single power
            terms = [f"2^{{j1+{primes[0][1] + 1}}}"]
        for n, (p, lo) in enumerate(primes, start=1):
            if n == 1 and terms and terms[0].startswith("2^"):
                continue
            terms.append(f"{p}^j{n}" if lo == 0 else f"{p}^{{j{n}+{lo}}}")
        return "×".join(terms)


@dataclass(frozen=True)
class ConjectureFamily:
    """Conjectured fixed points of the (a, -1, 0, 1) sequence: pure powers of
    the critical prime(s) plus a list of composite forms."""

    a: int
    category: KCategory
    discriminant: int
    critical_primes: tuple[int, ...]
    composites: tuple[CompositeForm, ...]
    singular: bool = False
    notes: tuple[str, ...] = field(default=())

    def contains(self, m: int) -> bool:
        for p in self.critical_primes:
            q = m
            while q % p == 0:
                q //= p
            if q == 1 and m > 1:
                return True
        return any(c.contains(m) for c in self.composites)

    def members(self, bound: int) -> list[int]:
        return [m for m in range(2, bound + 1) if self.contains(m)]

    def describe(self) -> str:
        parts = [f"{p}^j" for p in self.critical_primes]
        parts += [c.describe() for c in self.composites]
        return " or ".join(parts) if parts else "(empty)"


def critical_prime_candidates(a: int, bound: int) -> list[int]:
    """Primes p | a^2 - 4 with p <= bound whose every power up to ``bound`` is a
    fixed point of the (a, -1, 0, 1) sequence."""
    if a in DEGENERATE_A:
        raise DomainError(f"a={a} is degenerate")
    fixed = set(oracle_fixed_points(b_minus1_params(a), 2, bound))
    out = []
    for p in factorize(a * a - 4).primes:
        if p > bound:
            continue
        q = p
        while q <= bound and q in fixed:
            q *= p
        if q > bound:
            out.append(p)
    return out


def critical_prime(a: int, bound: int) -> Optional[int]:
    """The single critical prime, or None when there is none or more than one."""
    found = critical_prime_candidates(a, bound)
    return found[0] if len(found) == 1 else None


def b_minus1_family(a: int, bound: int = 3000) -> ConjectureFamily:
    """Conjectured family for the (a, -1) sequence.

    The composite part is built from the factorisation of a^2 - 4 following
    the case split on a; the "pure powers" part uses whichever primes of
    a^2 - 4 have all their powers up to ``bound`` fixed, since the
    conjecture does not say which prime that is.  For a = 3 there is no such
    prime and only 12*5^j remains.
    """
    if a in DEGENERATE_A:
        raise DomainError(f"a={a} is one of the degenerate values {DEGENERATE_A}")
    disc = a * a - 4
    primes = factorize(disc).primes
    odd = tuple(p for p in primes if p != 2)
    category = _a_category(a)
    free = lambda ps: tuple((p, 0) for p in ps)  # noqa: E731

    if a == 3:
        return ConjectureFamily(
            a, category, disc, (), (CompositeForm(12, free(primes)),), singular=True,
            notes=("no critical prime; powers of 5 are not fixed",),
        )
    critical = tuple(critical_prime_candidates(a, bound))
    notes = ()
    if len(critical) > 1:
        notes = (f"{len(critical)} primes have all powers fixed",)

    if a > 0:
        if category is KCategory.PM1_MOD6 and a % 6 == 1:
            forms = (CompositeForm(6, free(primes)),)
        elif category is KCategory.PM1_MOD6:
            first, *rest = primes
            forms = (CompositeForm(6, ((first, 1),) + free(rest)),)
        elif category is KCategory.TWO_MOD4:
            forms = (CompositeForm(2, ((2, 0),) + free(odd)),)
        elif category is KCategory.THREE_MOD6:
            forms = (CompositeForm(12, free(primes)),)
        else:
            forms = (CompositeForm(2, free(odd)), CompositeForm(4, free(odd)))
    else:
        if category is KCategory.PM1_MOD6 and a % 6 == 1:
            forms = (CompositeForm(1, ((2, 0),) + tuple((p, 1) for p in primes)),)
        elif category is KCategory.PM1_MOD6:
            forms = (CompositeForm(6, free(p for p in primes if p != 3)),)
        elif category is KCategory.TWO_MOD4:
            forms = (CompositeForm(2, ((2, 0),) + free(odd)),)
        elif category is KCategory.THREE_MOD6:
            forms = (CompositeForm(12, free(primes)),)
        else:
            forms = (CompositeForm(2, free(odd)), CompositeForm(4, free(odd)))
    return ConjectureFamily(a, category, disc, critical, forms, notes=notes)


def b_minus1_fixed_points(a: int, bound: int) -> list[int]:
    return oracle_fixed_points(b_minus1_params(a), 2, bound)


def prime_period_claim(params: RecurrenceParams, p: int) -> tuple[str, int]:
    """What the general (a, b) trichotomy says about the period at an odd
    prime p not dividing b: ``("equals", n)`` or ``("divides", n)``."""
    if p == 2 or not is_prime(p) or params.b % p == 0:
        raise DomainError(f"need an odd prime not dividing b={params.b}, got {p}")
    disc = params.discriminant()
    if disc % p == 0:
        return "equals", p * multiplicative_order(mod_inv(2, p) * params.a, p)
    if legendre(disc, p) == 1:
        return "divides", p - 1
    return "divides", (p + 1) * multiplicative_order(-params.b, p)
