from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_period
from kpisano.errors import DomainError, InvariantViolation, NoConvergenceError
from kpisano.fixedpoint import (
    TERMINAL_RATIO_BOUND,
    TRAJECTORY_RATIO_BOUND,
    KCategory,
    Terminal,
    bound_ratios,
    converse_family,
    enumerate_fixed_points,
    family_contains,
    g_valuation,
    is_fixed_point,
    k_category,
    predicted_family,
    s_diagnostic,
    tabulated_family,
    terminal_value,
    trajectory,
)


@pytest.mark.parametrize(
    "k, cat",
    [(1, KCategory.PM1_MOD6), (6, KCategory.TWO_MOD4), (9, KCategory.THREE_MOD6), (8, KCategory.ZERO_MOD4)],
)
def test_k_category(k, cat):
    assert k_category(k) is cat


@settings(max_examples=100)
@given(st.integers(1, 10**6))
def test_every_k_has_one_category(k):
    cat = k_category(k)
    assert cat is k_category(k + 12)


@pytest.mark.parametrize("k, m, want", [(1, 24, True), (1, 120, True), (1, 10, False), (4, 20, True)])
def test_is_fixed_point(k, m, want):
    assert is_fixed_point(k, m) is want


@pytest.mark.parametrize(
    "k, text",
    [
        (1, "24×5^j"),
        (5, "24×29^j"),
        (2, "2^j"),
        (8, "2 or 4×17^{j+1}"),
        (6, "2^j or 2^{i+2}×5^j"),
        (9, "6 or 12×5^j1×17^j2 (some j ≥ 1)"),
        (16, "2 or 4×5^j1×13^j2 (some j ≥ 1)"),
    ],
)
def test_family_descriptions(k, text):
    assert predicted_family(k).describe() == text


@pytest.mark.parametrize(
    "k, m, want", [(1, 600, True), (1, 48, False), (3, 6, True), (3, 12, False), (16, 20, True), (6, 10, False), (6, 20, True)]
)
def test_family_contains(k, m, want):
    assert family_contains(predicted_family(k), m) is want


@pytest.mark.parametrize(
    "k, bound, want", [(1, 150, [24, 120]), (2, 20, [2, 4, 8, 16]), (3, 200, [6, 156]), (1, 3000, [24, 120, 600, 3000])]
)
def test_enumerate_fixed_points(k, bound, want):
    assert enumerate_fixed_points(k, bound) == want


def test_twelve_is_not_fixed_for_k3():
    # pi_3(12) = lcm(pi_3(4), pi_3(3)) = lcm(6, 2)
    assert naive_period(3, 1, 12) == 6


@pytest.mark.parametrize("k", range(1, 25))
def test_families_match_oracle(k):
    fixed = [m for m in range(2, 1500) if naive_period(k, 1, m) == m]
    assert predicted_family(k).members(1499) == fixed


def test_alternative_readings_differ_where_expected():
    assert tabulated_family(3).contains(12)
    assert tabulated_family(6).contains(10)
    assert not tabulated_family(16).contains(20)
    assert converse_family(4).contains(4)
    assert converse_family(6).contains(20) and not converse_family(6).contains(10)


def test_trajectory_examples():
    t = trajectory(1, 2)
    assert t.steps == (2, 3, 8, 12, 24)
    assert t.terminal is Terminal.FIXED_POINT and t.length_t == 4
    assert trajectory(1, 24).length_t == 0
    assert trajectory(1, 11).steps == (11, 10, 60, 120)
    t = trajectory(3, 2)
    assert t.terminal is Terminal.TWO_CYCLE and t.steps == (2, 3, 2)
    assert t.chain() == "2 → 3 → 2"


def test_trajectory_exhaustion_and_bad_cycles():
    t = trajectory(1, 2, max_iters=2)
    assert t.terminal is Terminal.EXHAUSTED and t.terminal_value is None
    with pytest.raises(NoConvergenceError):
        terminal_value(1, 2, max_iters=2)
    fake = {5: 7, 7: 5}
    with pytest.raises(InvariantViolation):
        trajectory(1, 5, period_fn=fake.__getitem__)


@pytest.mark.parametrize("k, m, want", [(1, 2, 24), (3, 3, 0), (1, 15, 120)])
def test_terminal_value(k, m, want):
    assert terminal_value(k, m) == want


def test_s_diagnostic():
    assert s_diagnostic(1, 120) == 0
    assert s_diagnostic(1, 7) == pytest.approx(math.log(7) - math.log(3))
    assert s_diagnostic(1, 49) == pytest.approx(2 * (math.log(7) - math.log(3)))


def test_bound_ratios():
    t, p = bound_ratios(1, 2)
    assert t == pytest.approx(4 / math.log(2))
    assert bound_ratios(1, 24) == (0.0, pytest.approx(1.0))
    assert bound_ratios(3, 3)[1] is None
    assert TRAJECTORY_RATIO_BOUND == pytest.approx(9.933, abs=5e-4)
    assert TERMINAL_RATIO_BOUND == pytest.approx(8.327, abs=5e-4)


def test_g_valuation():
    assert g_valuation(24) == 4
    assert g_valuation(5) == 0


def test_domain_errors():
    with pytest.raises(DomainError):
        k_category(0)
    with pytest.raises(DomainError):
        trajectory(1, 1)
    with pytest.raises(DomainError):
        enumerate_fixed_points(1, 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 30), st.integers(2, 20_000))
def test_trajectory_steps_follow_the_period_map(k, m):
    t = trajectory(k, m)
    assert t.terminal is not Terminal.EXHAUSTED
    for a, b in zip(t.steps, t.steps[1:]):
        if a < 3000:
            assert b == naive_period(k, 1, a)
    if t.terminal is Terminal.TWO_CYCLE:
        assert k % 6 == 3
        assert set(t.steps[-2:]) == {2, 3}
    else:
        assert is_fixed_point(k, t.steps[-1])
