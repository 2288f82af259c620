"""Batch verification: each suite sweeps a (K, m) range, compares two
independent routes or a stated property, and tallies the outcome.

Work is cut into tasks (per K, per m-chunk); tasks run in a process pool when
``parallelism > 1`` and their results are concatenated in task order, so the
report content never depends on the worker count.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterator, Optional

from . import conjectures as cj
from .errors import ArithmeticOverflowError, DomainError, PisanoError
from .fixedpoint import (
    TERMINAL_RATIO_BOUND,
    TRAJECTORY_RATIO_BOUND,
    KCategory,
    Terminal,
    bound_ratios,
    converse_family,
    enumerate_fixed_points,
    g_valuation,
    is_fixed_point,
    k_category,
    predicted_family,
    tabulated_family,
    trajectory,
)
from .numtheory import (
    _sieve,
    factorize,
    gcd,
    is_prime,
    lcm,
    mod_inv,
    multiplicative_order,
)
from .pisano import (
    max_wss_exponent,
    oracle_fixed_points,
    oracle_periods,
    period_oracle,
    pisano_prime_detail,
    pisano_prime_power,
    pisano_structured,
)
from .recurrence import RecurrenceParams, StatePair, matrix_power_state, sequence_mod, step

DEFAULT_VIOLATION_CAP = 1000
M_CHUNK = 1000


class Classification(str, enum.Enum):
    THEOREM_VIOLATION = "theorem-violation"
    STATEMENT_DISCREPANCY = "paper-statement-discrepancy"
    CONJECTURE_COUNTEREXAMPLE = "conjecture-counterexample"


@dataclass(frozen=True)
class Violation:
    k: Any
    m: Optional[int]
    expected: Any
    actual: Any
    classification: Classification

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "expected": self.expected,
            "actual": self.actual,
            "classification": self.classification.value,
        }


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    checked: int
    passed: int
    violations: tuple[Violation, ...]
    notes: tuple[str, ...] = ()
    violations_omitted: int = 0
    wall_time: Optional[float] = None

    def __post_init__(self):
        if self.checked != self.passed + len(self.violations) + self.violations_omitted:
            raise ValueError("checked must equal passed plus violations")

    def count(self, cls: Classification) -> int:
        return sum(v.classification is cls for v in self.violations)

    @property
    def theorem_violations(self) -> int:
        return self.count(Classification.THEOREM_VIOLATION)


Range = tuple[int, int]


@dataclass(frozen=True)
class SweepConfig:
    """Which suites to run and over what ranges.

    A range left as None falls back to the suite's own default, so one
    config can drive suites whose natural sweeps differ.
    """

    suites: tuple[str, ...]
    k_range: Optional[Range] = None
    m_range: Optional[Range] = None
    parallelism: int = 1
    max_iters: int = 200

    def __post_init__(self):
        if not self.suites:
            raise DomainError("no suites requested")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise DomainError(f"unknown suite(s): {', '.join(unknown)}")
        for name, r in (("k_range", self.k_range), ("m_range", self.m_range)):
            if r is not None and r[0] > r[1]:
                raise DomainError(f"{name} {r[0]}..{r[1]} is empty")
        if self.m_range is not None and self.m_range[0] < 2:
            raise DomainError("m_range must start at 2 or above")
        if self.parallelism < 1:
            raise DomainError("parallelism must be >= 1")
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")


@dataclass(frozen=True)
class Task:
    suite: str
    part: str
    k_lo: int
    k_hi: int
    m_lo: int
    m_hi: int
    max_iters: int


@dataclass
class Tally:
    checked: int = 0
    passed: int = 0
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def ok(self, n: int = 1) -> None:
        self.checked += n
        self.passed += n

    def fail(self, k, m, expected, actual, cls=Classification.THEOREM_VIOLATION) -> None:
        self.checked += 1
        self.violations.append(Violation(k, m, expected, actual, cls))

    def expect(self, k, m, expected, actual, cls=Classification.THEOREM_VIOLATION) -> bool:
        if expected == actual:
            self.ok()
            return True
        self.fail(k, m, expected, actual, cls)
        return False

    def guard(self, k, m, check: Callable[[], None]) -> None:
        """Run one check; a library error becomes a violation instead of
        aborting the sweep."""
        try:
            check()
        except PisanoError as exc:
            self.fail(k, m, "no error", f"{type(exc).__name__}: {exc}")


def _chunks(lo: int, hi: int, size: int = M_CHUNK) -> Iterator[tuple[int, int]]:
    start = lo
    while start <= hi:
        yield start, min(hi, start + size - 1)
        start += size


def _primes_in(lo: int, hi: int) -> list[int]:
    return [p for p in _sieve(hi) if p >= lo]


def _k_params(k: int) -> RecurrenceParams:
    return RecurrenceParams.k_fibonacci(k)


# --- suite bodies -------------------------------------------------------------


def _primitives(t: Task, out: Tally) -> None:
    if t.part == "factorize":
        primes = set(_primes_in(2, math.isqrt(t.m_hi) + 1)) | set(_primes_in(t.m_lo, t.m_hi))
        for n in range(t.m_lo, t.m_hi + 1):
            f = factorize(n)
            prod = math.prod(p**e for p, e in f)
            if prod != n or any(p not in primes and not _trial_prime(p) for p in f.primes):
                out.fail(None, n, "factorisation into primes", str(f))
            elif (n in primes) != is_prime(n):
                out.fail(None, n, n in primes, is_prime(n))
            else:
                out.ok()
        return
    rng = random.Random(20240601)
    for _ in range(500):
        m = rng.randrange(2, 10**6)
        a = rng.randrange(1, m)
        if gcd(a, m) != 1:
            continue
        out.expect(None, m, 1, a * mod_inv(a, m) % m)
    for p in _primes_in(3, 2000):
        a = rng.randrange(1, p)
        out.expect(None, p, 0, (p - 1) % multiplicative_order(a, p))
    for _ in range(200):
        params = RecurrenceParams(*(rng.randrange(-50, 51) for _ in range(4)))
        m = rng.randrange(2, 10**4)
        n = rng.randrange(0, 1000)
        s = StatePair.initial(params, m)
        for _ in range(n):
            s = step(params, s)
        out.expect(str(params), m, s.as_tuple(), matrix_power_state(params, n, m).as_tuple())
    for _ in range(200):
        params = RecurrenceParams(*(rng.randrange(-50, 51) for _ in range(4)))
        m = rng.randrange(2, 500)
        t_mult = rng.randrange(1, 20)
        big = sequence_mod(params, m * t_mult, 60)
        out.expect(str(params), m, sequence_mod(params, m, 60), [x % m for x in big])


def _trial_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _order_four(t: Task, out: Tally) -> None:
    for k in range(t.k_lo, t.k_hi + 1):
        for p in factorize(k * k + 4).primes:
            if p == 2:
                continue
            out.expect(k, p, 4, multiplicative_order(mod_inv(2, p) * k, p))


def _oracle_equivalence(t: Task, out: Tally) -> None:
    k = t.k_lo
    ms = range(t.m_lo, t.m_hi + 1)
    for m, want in zip(ms, oracle_periods(_k_params(k), ms)):
        out.guard(k, m, lambda m=m, want=want: out.expect(k, m, want, pisano_structured(k, m)))
    try:
        fell_back = [p for p in _primes_in(max(3, t.m_lo), t.m_hi) if pisano_prime_detail(k, p)[1]]
    except ArithmeticOverflowError:
        return  # already recorded per modulus above
    if fell_back:
        out.notes.append(f"K={k}: divisor search fell back to the oracle at p={fell_back}")


def _parity(t: Task, out: Tally) -> None:
    k = t.k_lo
    for m in range(max(3, t.m_lo), t.m_hi + 1):
        out.guard(k, m, lambda m=m: out.expect(k, m, 0, pisano_structured(k, m) % 2))


def _lcm_law(t: Task, out: Tally) -> None:
    k = t.k_lo
    periods = dict(zip(range(2, t.m_hi + 1), oracle_periods(_k_params(k), range(2, t.m_hi + 1))))
    for m in range(t.m_lo, t.m_hi + 1):
        f = factorize(m)
        if len(f) < 2:
            continue
        p, e = max(f, key=lambda pe: pe[0] ** pe[1])
        m1 = p**e
        m2 = m // m1
        out.expect(k, m, periods[m], lcm(periods[m1], periods[m2]))


def _trichotomy(t: Task, out: Tally) -> None:
    k = t.k_lo
    disc = k * k + 4
    primes = _primes_in(max(3, t.m_lo), t.m_hi)
    for p, pi in zip(primes, oracle_periods(_k_params(k), primes)):
        if disc % p == 0:
            out.expect(k, p, 4 * p, pi)
            continue
        bound = p - 1 if pow(disc, (p - 1) // 2, p) == 1 else 2 * (p + 1)
        out.expect(k, p, f"divides {bound}", f"divides {bound}" if bound % pi == 0 else pi)


def _prime_bound(t: Task, out: Tally) -> None:
    k = t.k_lo
    disc = k * k + 4
    primes = _primes_in(max(3, t.m_lo), t.m_hi)
    for p, pi in zip(primes, oracle_periods(_k_params(k), primes)):
        qs = factorize(pi).primes
        big = max(qs)
        good = big < p or (big == p and disc % p == 0)
        if good:
            out.ok()
        else:
            out.fail(k, p, f"prime factors of {pi} at most {p}", list(qs))


def _falcon_plaza(t: Task, out: Tally) -> None:
    for k in range(max(2, t.k_lo), t.k_hi + 1):
        want = 4 if k % 2 == 0 else 6
        out.expect(k, 2 * k, want, period_oracle(_k_params(k), 2 * k).period)
        out.guard(k, 2 * k, lambda k=k, want=want: out.expect(k, 2 * k, want, pisano_structured(k, 2 * k)))


def _wall_sun_sun(t: Task, out: Tally) -> None:
    pell = _k_params(2)
    for p in (13, 31):
        out.expect(2, p * p, period_oracle(pell, p).period, period_oracle(pell, p * p).period)
    out.expect(2, 13, 2, max_wss_exponent(2, 13, 4).exponent)
    for k in range(t.k_lo, t.k_hi + 1):
        params = _k_params(k)
        wss2 = period_oracle(params, 2).period == period_oracle(params, 4).period
        out.expect(k, 2, k % 4 == 0, wss2)
        # powers of 2: closed forms against the oracle
        for e in range(1, 12):
            out.expect(k, 2**e, period_oracle(params, 2**e).period, pisano_prime_power(k, 2, e))
        # an odd prime of K^2+4 is never Wall-Sun-Sun
        for p in factorize(k * k + 4).primes:
            if p == 2:
                continue
            s = matrix_power_state(params, 4 * p, p * p)
            out.expect(k, p * p, False, s.as_tuple() == (0, 1))


def _fixed_point_theorem(t: Task, out: Tally) -> None:
    k = t.k_lo
    fam = predicted_family(k)
    conv = converse_family(k) if k <= 24 else None
    for m in range(t.m_lo, t.m_hi + 1):
        try:
            fixed = is_fixed_point(k, m)
        except PisanoError as exc:
            out.fail(k, m, "no error", f"{type(exc).__name__}: {exc}")
            continue
        out.expect(k, m, fixed, fam.contains(m))
        if conv is not None:
            out.expect(k, m, fixed, conv.contains(m), Classification.STATEMENT_DISCREPANCY)


# K^2+4 as printed next to each row of the published classification table.
TABLE1_DISCRIMINANTS: dict[int, tuple[tuple[int, int], ...]] = {
    1: ((5, 1),), 2: ((2, 3),), 3: ((13, 1),), 4: ((2, 2), (5, 1)), 5: ((29, 1),),
    6: ((2, 3), (5, 1)), 7: ((53, 1),), 8: ((2, 2), (17, 1)), 9: ((5, 1), (17, 1)),
    10: ((2, 3), (13, 1)), 11: ((5, 3),), 12: ((2, 2), (37, 1)), 13: ((173, 1),),
    14: ((2, 3), (5, 3)), 15: ((229, 1),), 16: ((2, 2), (5, 1), (13, 1)), 17: ((293, 1),),
    18: ((2, 3), (41, 1)), 19: ((5, 1), (73, 1)), 20: ((2, 2), (101, 1)),
    21: ((5, 1), (89, 1)), 22: ((2, 3), (61, 1)), 23: ((13, 1), (41, 1)),
    24: ((2, 2), (5, 1), (29, 1)),
}


def _table1(t: Task, out: Tally) -> None:
    k = t.k_lo
    printed = TABLE1_DISCRIMINANTS.get(k)
    if printed is not None and t.m_lo == 2:
        out.expect(k, None, _fmt_factors(printed), str(factorize(k * k + 4)), Classification.STATEMENT_DISCREPANCY)
    fixed = set(oracle_fixed_points(_k_params(k), t.m_lo, t.m_hi))
    fam = predicted_family(k)
    tab = tabulated_family(k) if printed is not None else None
    for m in range(t.m_lo, t.m_hi + 1):
        out.expect(k, m, m in fixed, fam.contains(m))
        if tab is not None:
            out.expect(k, m, m in fixed, tab.contains(m), Classification.STATEMENT_DISCREPANCY)
    if t.m_lo == 2:
        out.notes.append(f"K={k}: {fam.describe()}")


def _fmt_factors(factors) -> str:
    return "·".join(str(p) if e == 1 else f"{p}^{e}" for p, e in factors)


def _iteration_theorem(t: Task, out: Tally) -> None:
    k = t.k_lo
    confirmed: dict[int, bool] = {}
    for m in range(t.m_lo, t.m_hi + 1):
        try:
            tr = trajectory(k, m, t.max_iters)
        except PisanoError as exc:
            out.fail(k, m, "terminating trajectory", f"{type(exc).__name__}: {exc}")
            continue
        if tr.terminal is Terminal.EXHAUSTED:
            out.fail(k, m, f"terminates within {t.max_iters}", "exhausted")
        elif tr.terminal is Terminal.TWO_CYCLE:
            out.expect(k, m, 3, k % 6, Classification.THEOREM_VIOLATION)
        else:
            v = tr.steps[-1]
            if v not in confirmed:
                confirmed[v] = period_oracle(_k_params(k), v).period == v
            out.expect(k, m, True, confirmed[v])


def _bounds(t: Task, out: Tally) -> None:
    k = t.k_lo
    t_max = p_max = 0.0
    for m in range(max(3, t.m_lo), t.m_hi + 1):
        try:
            tr = trajectory(k, m, t.max_iters)
            t_ratio, p_ratio = bound_ratios(k, m, t.max_iters, traj=tr)
        except PisanoError as exc:
            out.fail(k, m, "finite ratios", f"{type(exc).__name__}: {exc}")
            continue
        t_max = max(t_max, t_ratio)
        if t_ratio <= TRAJECTORY_RATIO_BOUND:
            out.ok()
        else:
            out.fail(k, m, f"t_ratio <= {TRAJECTORY_RATIO_BOUND:.3f}", round(t_ratio, 6))
        if p_ratio is not None:
            p_max = max(p_max, p_ratio)
            if p_ratio <= TERMINAL_RATIO_BOUND:
                out.ok()
            else:
                out.fail(k, m, f"p_ratio <= {TERMINAL_RATIO_BOUND:.3f}", round(p_ratio, 6))
    out.notes.append(f"K={k}: max t_ratio {t_max:.4f}, max p_ratio {p_max:.4f}")
    if k_category(k) is KCategory.PM1_MOD6:
        # once only 2, 3 and primes of K^2+4 remain, g = v2 + v3 cannot grow
        allowed = {2, 3} | set(factorize(k * k + 4).primes)
        for m in range(max(24, t.m_lo + (-t.m_lo) % 24), t.m_hi + 1, 24):
            if not set(factorize(m).primes) <= allowed:
                continue
            nxt = pisano_structured(k, m)
            if nxt == m:
                continue
            out.expect(k, m, True, g_valuation(nxt) <= g_valuation(m))


FIBONACCI_EXAMPLE_CHAINS: dict[int, tuple[int, ...]] = {
    2: (3, 8, 12, 24), 3: (8, 12, 24), 4: (6, 24), 5: (20, 60, 120), 6: (24,),
    7: (16, 24), 8: (12, 24), 9: (24,), 10: (60, 120), 11: (10, 60, 120), 12: (24,),
    13: (28, 48, 24), 14: (48, 24), 15: (40, 60, 120), 16: (24,), 17: (36, 24),
    18: (24,), 19: (18, 24), 20: (60, 120), 21: (16, 24), 22: (30, 120), 23: (48, 24),
}


def _fibonacci_special(t: Task, out: Tally) -> None:
    found = [m for m in enumerate_fixed_points(1, t.m_hi) if m >= t.m_lo]
    expected = []
    v = 24
    while v <= t.m_hi:
        if v >= t.m_lo:
            expected.append(v)
        v *= 5
    out.expect(1, None, expected, found)
    out.notes.append("fixed points: " + " ".join(map(str, found)))
    for m, chain in FIBONACCI_EXAMPLE_CHAINS.items():
        if t.m_lo <= m <= t.m_hi:
            out.expect(1, m, list(chain), list(trajectory(1, m).steps[1:]) or [m])
    if t.m_lo <= 2 <= t.m_hi:
        out.expect(1, 2, 4, trajectory(1, 2).length_t)
    if t.m_lo <= 24 <= t.m_hi:
        out.expect(1, 24, 0, trajectory(1, 24).length_t)


def _final_table(t: Task, out: Tally) -> None:
    for seq, (start, row) in cj.PUBLISHED_PERIOD_ROWS.items():
        got = cj.named_period_row(seq, start, start + len(row) - 1)
        for i, (want, have) in enumerate(zip(row, got)):
            out.expect(seq.name, start + i, want, have)
    # the short row cannot also start at m = 2
    start, row = cj.PUBLISHED_PERIOD_ROWS[cj.NamedSequence.JACOBSTHAL]
    at_two = period_oracle(cj.NamedSequence.JACOBSTHAL.params, 2)
    out.expect(
        cj.NamedSequence.JACOBSTHAL.name, 2, row[0], at_two.period, Classification.STATEMENT_DISCREPANCY
    )
    out.notes.append(
        f"JACOBSTHAL row has {len(row)} entries for m=2..24; aligned to m=3..24 "
        f"(m=2: preperiod {at_two.preperiod}, period {at_two.period})"
    )


def _lucas(t: Task, out: Tally) -> None:
    fixed = [m for m in cj.lucas_fixed_points(t.m_hi) if m >= t.m_lo]
    out.expect("LUCAS", None, [24] if t.m_lo <= 24 <= t.m_hi else [], fixed)
    hi = min(t.m_hi, 500)
    ms = [m for m in range(t.m_lo, hi + 1) if m % 5]
    luc = oracle_periods(cj.NamedSequence.LUCAS.params, ms)
    fib = oracle_periods(cj.NamedSequence.FIBONACCI.params, ms)
    for m, a, b in zip(ms, fib, luc):
        out.expect("LUCAS", m, a, b)


def _pell(t: Task, out: Tally) -> None:
    fixed = [m for m in cj.pell_fixed_points(t.m_hi) if m >= t.m_lo]
    powers = [1 << e for e in range(1, t.m_hi.bit_length()) if t.m_lo <= 1 << e <= t.m_hi]
    out.expect("PELL", None, powers, fixed)
    ms = range(t.m_lo, min(t.m_hi, 2000) + 1)
    for m, want in zip(ms, oracle_periods(cj.NamedSequence.PELL.params, ms)):
        out.expect("PELL", m, want, pisano_structured(2, m))


def _jacobsthal(t: Task, out: Tally) -> None:
    params = cj.NamedSequence.JACOBSTHAL.params
    fixed = set(m for m in cj.jacobsthal_fixed_points(t.m_hi) if m >= t.m_lo)
    predicted = set()
    v = 6
    while v <= t.m_hi:
        if v >= t.m_lo:
            predicted.add(v)
        v *= 3
    for m in range(t.m_lo, t.m_hi + 1):
        out.expect("JACOBSTHAL", m, m in predicted, m in fixed, Classification.CONJECTURE_COUNTEREXAMPLE)
    out.notes.append("fixed points: " + " ".join(map(str, sorted(fixed))))
    for p in _primes_in(max(3, t.m_lo), t.m_hi):
        kind, n = cj.prime_period_claim(params, p)
        pi = period_oracle(params, p).period
        holds = pi == n if kind == "equals" else n % pi == 0
        out.expect("JACOBSTHAL", p, f"{kind} {n}", f"{kind} {n}" if holds else pi)
    impure = sum(1 for m in range(t.m_lo, min(t.m_hi, 64) + 1) if not period_oracle(params, m).pure)
    out.notes.append(f"moduli up to 64 with a preperiod: {impure}")


def _b_minus1(t: Task, out: Tally) -> None:
    for a in range(t.k_lo, t.k_hi + 1):
        if a in cj.DEGENERATE_A:
            continue
        fam = cj.b_minus1_family(a, t.m_hi)
        fixed = set(cj.b_minus1_fixed_points(a, t.m_hi))
        for m in range(t.m_lo, t.m_hi + 1):
            out.expect(a, m, m in fixed, fam.contains(m), Classification.CONJECTURE_COUNTEREXAMPLE)
        if a == 3:
            powers = [5**j for j in range(1, 10) if 5**j <= t.m_hi]
            out.expect(a, None, [], [q for q in powers if q in fixed], Classification.CONJECTURE_COUNTEREXAMPLE)
        else:
            crit = list(fam.critical_primes)
            out.expect(a, None, 1, len(crit), Classification.CONJECTURE_COUNTEREXAMPLE) or out.notes.append(
                f"a={a}: critical prime candidates {crit}"
            )
        out.notes.append(f"a={a}: {fam.describe()}")


def _degenerate(t: Task, out: Tally) -> None:
    for a in cj.DEGENERATE_A:
        params = cj.b_minus1_params(a)
        ms = range(t.m_lo, t.m_hi + 1)
        for m, pi in zip(ms, oracle_periods(params, ms)):
            out.expect(a, m, cj.degenerate_period(a, m), pi)


@dataclass(frozen=True)
class SuiteDef:
    body: Callable[[Task, Tally], None]
    k_default: Range
    m_default: Range
    split: str  # "k": one task per K; "km": per K and m-chunk; "one": single task


SUITES: dict[str, SuiteDef] = {
    "primitives": SuiteDef(_primitives, (1, 1), (2, 100_000), "one"),
    "order-four": SuiteDef(_order_four, (1, 200), (2, 2), "one"),
    "oracle-equivalence": SuiteDef(_oracle_equivalence, (1, 24), (2, 2000), "km"),
    "parity": SuiteDef(_parity, (1, 24), (3, 2000), "km"),
    "lcm-law": SuiteDef(_lcm_law, (1, 24), (2, 2000), "km"),
    "trichotomy": SuiteDef(_trichotomy, (1, 24), (3, 5000), "km"),
    "prime-bound": SuiteDef(_prime_bound, (1, 24), (3, 5000), "km"),
    "falcon-plaza": SuiteDef(_falcon_plaza, (2, 100), (2, 2), "one"),
    "wall-sun-sun": SuiteDef(_wall_sun_sun, (1, 50), (2, 2), "one"),
    "fixed-point-theorem": SuiteDef(_fixed_point_theorem, (1, 24), (2, 5000), "km"),
    "iteration-theorem": SuiteDef(_iteration_theorem, (1, 24), (2, 5000), "km"),
    "fibonacci-special": SuiteDef(_fibonacci_special, (1, 1), (2, 3000), "one"),
    "bounds": SuiteDef(_bounds, (1, 24), (2, 5000), "k"),
    "table1": SuiteDef(_table1, (1, 24), (2, 5000), "k"),
    "final-table": SuiteDef(_final_table, (1, 1), (2, 24), "one"),
    "lucas": SuiteDef(_lucas, (1, 1), (2, 2000), "one"),
    "pell": SuiteDef(_pell, (2, 2), (2, 2048), "one"),
    "jacobsthal": SuiteDef(_jacobsthal, (1, 1), (2, 5000), "one"),
    "b-minus1": SuiteDef(_b_minus1, (-20, 20), (2, 3000), "k"),
    "degenerate": SuiteDef(_degenerate, (1, 1), (2, 500), "one"),
}

SUITE_IDS = tuple(SUITES)


def plan_tasks(config: SweepConfig, suite: str) -> list[Task]:
    entry = SUITES[suite]
    k_lo, k_hi = config.k_range or entry.k_default
    m_lo, m_hi = config.m_range or entry.m_default
    if entry.split == "one":
        tasks = [Task(suite, "main", k_lo, k_hi, m_lo, m_hi, config.max_iters)]
        if suite == "primitives":
            tasks += [
                Task(suite, "factorize", k_lo, k_hi, lo, hi, config.max_iters)
                for lo, hi in _chunks(m_lo, m_hi, 10_000)
            ]
        return tasks
    if entry.split == "k":
        return [Task(suite, "main", k, k, m_lo, m_hi, config.max_iters) for k in range(k_lo, k_hi + 1)]
    return [
        Task(suite, "main", k, k, lo, hi, config.max_iters)
        for k in range(max(1, k_lo), k_hi + 1)
        for lo, hi in _chunks(m_lo, m_hi)
    ]


def execute_task(task: Task) -> Tally:
    out = Tally()
    try:
        SUITES[task.suite].body(task, out)
    except PisanoError as exc:
        out.fail(task.k_lo, task.m_lo, "task completes", f"{type(exc).__name__}: {exc}")
    return out


def _merge(suite: str, parts: list[Tally], elapsed: float) -> VerificationReport:
    checked = sum(p.checked for p in parts)
    passed = sum(p.passed for p in parts)
    violations = tuple(v for p in parts for v in p.violations)
    notes = tuple(n for p in parts for n in p.notes)
    return VerificationReport(suite, checked, passed, violations, notes, 0, elapsed)


def run_suite(config: SweepConfig) -> list[VerificationReport]:
    """One report per requested suite, in the order requested."""
    plans = [(s, plan_tasks(config, s)) for s in config.suites]
    reports = []
    if config.parallelism == 1:
        for suite, tasks in plans:
            t0 = time.perf_counter()
            parts = [execute_task(t) for t in tasks]
            reports.append(_merge(suite, parts, time.perf_counter() - t0))
        return reports
    with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
        for suite, tasks in plans:
            t0 = time.perf_counter()
            parts = list(pool.map(execute_task, tasks))
            reports.append(_merge(suite, parts, time.perf_counter() - t0))
    return reports


# --- serialisation ------------------------------------------------------------

CSV_FIELDS = (
    "record", "suite", "k", "m", "expected", "actual", "classification",
    "checked", "passed", "violations_omitted", "wall_time_ms",
)


def _capped(r: VerificationReport, cap: Optional[int]) -> tuple[tuple[Violation, ...], int]:
    if cap is None or len(r.violations) <= cap:
        return r.violations, r.violations_omitted
    return r.violations[:cap], r.violations_omitted + len(r.violations) - cap


def _wall_ms(r: VerificationReport, timing: bool) -> Optional[int]:
    if not timing or r.wall_time is None:
        return None
    return round(r.wall_time * 1000)


def report_to_dict(r: VerificationReport, cap: Optional[int] = DEFAULT_VIOLATION_CAP, timing: bool = False) -> dict:
    shown, omitted = _capped(r, cap)
    return {
        "suite": r.suite,
        "checked": r.checked,
        "passed": r.passed,
        "violations": [v.as_dict() for v in shown],
        "violations_omitted": omitted,
        "notes": list(r.notes),
        "wall_time_ms": _wall_ms(r, timing),
    }


def report_serialize(
    r: VerificationReport,
    fmt: str = "json",
    cap: Optional[int] = DEFAULT_VIOLATION_CAP,
    timing: bool = False,
) -> bytes:
    """Stable bytes for ``r``.  Timing is left out (null) unless asked for, so
    identical sweeps serialise identically."""
    if fmt == "json":
        text = json.dumps(report_to_dict(r, cap, timing), indent=2, ensure_ascii=False) + "\n"
        return text.encode("utf-8")
    if fmt != "csv":
        raise DomainError(f"unknown report format {fmt!r}")
    shown, omitted = _capped(r, cap)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for v in shown:
        w.writerow([
            "violation", r.suite, json.dumps(v.k), json.dumps(v.m),
            json.dumps(v.expected, ensure_ascii=False), json.dumps(v.actual, ensure_ascii=False),
            v.classification.value, "", "", "", "",
        ])
    wall = _wall_ms(r, timing)
    w.writerow([
        "summary", r.suite, "", "", "", "", "", r.checked, r.passed, omitted,
        "" if wall is None else wall,
    ])
    return buf.getvalue().encode("utf-8")


def _violation_from(d: dict) -> Violation:
    return Violation(d["k"], d["m"], d["expected"], d["actual"], Classification(d["classification"]))


def report_deserialize(data: bytes, fmt: str = "json") -> VerificationReport:
    if fmt == "json":
        d = json.loads(data.decode("utf-8"))
        wall = d.get("wall_time_ms")
        return VerificationReport(
            d["suite"], d["checked"], d["passed"],
            tuple(_violation_from(v) for v in d["violations"]),
            tuple(d.get("notes", ())), d.get("violations_omitted", 0),
            None if wall is None else wall / 1000,
        )
    if fmt != "csv":
        raise DomainError(f"unknown report format {fmt!r}")
    rows = list(csv.DictReader(io.StringIO(data.decode("utf-8"))))
    violations = []
    summary = None
    for row in rows:
        if row["record"] == "violation":
            violations.append(_violation_from({
                "k": json.loads(row["k"]), "m": json.loads(row["m"]),
                "expected": json.loads(row["expected"]), "actual": json.loads(row["actual"]),
                "classification": row["classification"],
            }))
        elif row["record"] == "summary":
            summary = row
    if summary is None:
        raise DomainError("CSV report has no summary row")
    wall = summary["wall_time_ms"]
    return VerificationReport(
        summary["suite"], int(summary["checked"]), int(summary["passed"]), tuple(violations),
        (), int(summary["violations_omitted"]), int(wall) / 1000 if wall else None,
    )


def capped(r: VerificationReport, cap: int) -> VerificationReport:
    """``r`` as it looks after serialisation with ``cap``."""
    shown, omitted = _capped(r, cap)
    return replace(r, violations=shown, violations_omitted=omitted)
