from __future__ import annotations

import pytest

from conftest import naive_period
from kpisano.conjectures import (
    DEGENERATE_A,
    PUBLISHED_PERIOD_ROWS,
    NamedSequence,
    b_minus1_family,
    b_minus1_fixed_points,
    critical_prime,
    critical_prime_candidates,
    degenerate_period,
    jacobsthal_fixed_points,
    lucas_fixed_points,
    named_period_row,
    pell_fixed_points,
    prime_period_claim,
)
from kpisano.errors import DomainError
from kpisano.fixedpoint import KCategory
from kpisano.pisano import period_oracle, pisano_structured


def test_named_params():
    assert NamedSequence.LUCAS.params.c == 2
    assert (NamedSequence.JACOBSTHAL.params.a, NamedSequence.JACOBSTHAL.params.b) == (1, 2)


@pytest.mark.parametrize("a, m, want", [(2, 17, 17), (0, 2, 2), (-2, 9, 18), (1, 2, 3), (1, 5, 6), (-1, 7, 3)])
def test_degenerate_examples(a, m, want):
    assert degenerate_period(a, m) == want


@pytest.mark.parametrize("a", DEGENERATE_A)
def test_degenerate_formulas_match_oracle(a):
    for m in range(2, 300):
        assert degenerate_period(a, m) == naive_period(a, -1, m), (a, m)


def test_degenerate_rejects_other_a():
    with pytest.raises(DomainError):
        degenerate_period(3, 10)


@pytest.mark.parametrize("bound, want", [(100, [24]), (23, []), (2, []), (2000, [24])])
def test_lucas(bound, want):
    assert lucas_fixed_points(bound) == want


@pytest.mark.parametrize("bound, want", [(20, [2, 4, 8, 16]), (3, [2]), (2, [2])])
def test_pell(bound, want):
    assert pell_fixed_points(bound) == want


@pytest.mark.parametrize("bound, want", [(60, [6, 18, 54]), (5, []), (18, [6, 18])])
def test_jacobsthal(bound, want):
    assert jacobsthal_fixed_points(bound) == want


def test_named_rows():
    assert named_period_row(NamedSequence.FIBONACCI, 2, 24) == list(PUBLISHED_PERIOD_ROWS[NamedSequence.FIBONACCI][1])
    assert named_period_row(NamedSequence.PELL, 2, 9) == [2, 8, 4, 12, 8, 6, 8, 24]
    assert named_period_row(NamedSequence.LUCAS, 2, 8) == [3, 8, 6, 4, 24, 16, 12]
    start, row = PUBLISHED_PERIOD_ROWS[NamedSequence.JACOBSTHAL]
    assert start == 3 and named_period_row(NamedSequence.JACOBSTHAL, 3, 24) == list(row)
    with pytest.raises(DomainError):
        named_period_row(NamedSequence.PELL, 5, 4)


def test_lucas_agrees_with_fibonacci_off_multiples_of_five():
    for m in range(2, 500):
        if m % 5:
            assert period_oracle(NamedSequence.LUCAS.params, m) == period_oracle(NamedSequence.FIBONACCI.params, m)


def test_pell_is_k2():
    for m in range(2, 600):
        assert period_oracle(NamedSequence.PELL.params, m).period == pisano_structured(2, m)


def test_singular_case_a3():
    fam = b_minus1_family(3)
    assert fam.singular and fam.critical_primes == ()
    assert critical_prime(3, 3000) is None
    fixed = b_minus1_fixed_points(3, 3000)
    assert fixed == [12, 60, 300, 1500]
    assert fam.members(3000) == fixed


def test_family_shapes():
    assert b_minus1_family(4).category is KCategory.ZERO_MOD4
    assert b_minus1_family(4).discriminant == 12
    assert b_minus1_family(5).category is KCategory.PM1_MOD6
    assert b_minus1_family(5).discriminant == 21
    with pytest.raises(DomainError):
        b_minus1_family(2)


@pytest.mark.parametrize("a, want", [(5, 3), (7, 5), (9, 7), (-9, 11), (6, 2)])
def test_critical_prime(a, want):
    assert critical_prime(a, 2000) == want


def test_critical_prime_not_always_unique():
    assert critical_prime_candidates(14, 2000) == [2, 3]
    assert critical_prime(14, 2000) is None


def test_families_agree_with_oracle_for_clean_cases():
    for a in (3, 6, 7, 9, -9, 12):
        assert b_minus1_family(a, 3000).members(3000) == b_minus1_fixed_points(a, 3000), a


def test_prime_period_claim_for_jacobsthal():
    params = NamedSequence.JACOBSTHAL.params
    assert prime_period_claim(params, 3) == ("equals", 6)
    for p in (5, 7, 11, 13, 17, 101):
        kind, n = prime_period_claim(params, p)
        assert kind == "divides" and n % period_oracle(params, p).period == 0
    with pytest.raises(DomainError):
        prime_period_claim(params, 2)
