# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import pytest

from hypothesis import assume, given, settings, strategies as st

from wfdiffusion import DomainError, FellerViolated, InvalidFraction, OrderingError
from wfdiffusion.runtime import (bound_additive_functional, bound_discounted_time, bound_exp_moment, bound_hit_probability, BoundVariant,
                                 check_boundary_plan, check_recurrence_plan, ModelParams, plan_boundary, plan_recurrence)


@pytest.mark.parametrize('a, b, epsilon, c, m, g_m, C_m, alpha', [
    (1, 1, 1, 1, 0.5, 0.125, 16, 0.015625),
    (2, 3, 1, 0.5, 1.5, 1.125, 2 / 1.125, 0.03515625),
])
def test_plan_recurrence(a, b, epsilon, c, m, g_m, C_m, alpha):
    p = ModelParams(a, b, epsilon)
    plan = plan_recurrence(p, c)
    assert plan.m == pytest.approx(m, rel=1e-14)
    assert plan.g_m == pytest.approx(g_m, rel=1e-14)
    assert plan.C_m == pytest.approx(C_m, rel=1e-14)
    assert plan.alpha == pytest.approx(alpha, rel=1e-14)
    assert check_recurrence_plan(p, plan)


def test_plan_recurrence_feller():
    with pytest.raises(FellerViolated):
        plan_recurrence(ModelParams(0.5, 1, 1), 1)


@pytest.mark.parametrize('m_fraction, alpha_fraction', [
    (0, 0.5),
    (1, 0.5),
    (0.5, 0),
    (0.5, 1.2),
])
def test_plan_recurrence_fractions(m_fraction, alpha_fraction):
    with pytest.raises(InvalidFraction):
        plan_recurrence(ModelParams(1, 1, 1), 1, m_fraction, alpha_fraction)


def test_plan_recurrence_near_upper_m():
    plan = plan_recurrence(ModelParams(1, 1, 1), 1, m_fraction=0.999999)
    assert 0 < plan.g_m < 1e-5
    assert 0 < plan.alpha < 1e-5
    assert plan.C_m > 1e5
    assert check_recurrence_plan(ModelParams(1, 1, 1), plan)


def test_plan_recurrence_multiplier():
    p = ModelParams(5, 5, 0.1)
    plan = plan_recurrence(p, 1e-9, multiplier=1.01, half_gap=1e-3)
    assert plan.alpha_upper <= 0.5 - 1e-3
    assert plan.C_m == pytest.approx(1.01 / (0.01 * plan.g_m))
    assert plan_recurrence(p, 1, multiplier=2) == plan_recurrence(p, 1)


def test_check_recurrence_plan_violation():
    p = ModelParams(1, 1, 1)
    plan = plan_recurrence(p, 1)
    with pytest.raises(DomainError):
        check_recurrence_plan(p, plan.replace(alpha=2 * plan.alpha_upper))
    with pytest.raises(DomainError):
        check_recurrence_plan(p, plan.replace(m=1.5))


def test_bound_exp_moment_example():
    plan = plan_recurrence(ModelParams(1, 1, 1), 1)
    assert bound_exp_moment(plan, 0.01) == pytest.approx(16 / 512 * (10 + 0.99 ** -0.5) + 1, rel=1e-12)
    assert bound_exp_moment(plan, 0.01) == pytest.approx(1.34389, abs=1e-5)


def test_bound_additive_functional_example():
    plan = plan_recurrence(ModelParams(1, 1, 1), 1)
    assert bound_additive_functional(plan, 0.01, BoundVariant.AS_PROVED) == pytest.approx(176.08, abs=1e-2)
    assert bound_additive_functional(plan, 0.01, BoundVariant.AS_STATED) == pytest.approx(0.34389, abs=1e-5)
    assert bound_additive_functional(plan, 0.01) == bound_additive_functional(plan, 0.01, BoundVariant.AS_PROVED)
    with pytest.raises(DomainError):
        bound_additive_functional(plan, 0.01, 'unknown')


def test_bound_discounted_time():
    plan = plan_recurrence(ModelParams(2, 3, 1), 0.5)
    x = 0.02
    assert bound_discounted_time(plan, x) * plan.c + 1 == pytest.approx(bound_exp_moment(plan, x), rel=1e-14)


@pytest.mark.parametrize('x', [0.0, 1.0])
def test_bounds_domain(x):
    plan = plan_recurrence(ModelParams(1, 1, 1), 1)
    with pytest.raises(DomainError):
        bound_exp_moment(plan, x)
    with pytest.raises(DomainError):
        bound_additive_functional(plan, x)


def test_plan_boundary_example():
    plan = plan_boundary(ModelParams(1, 1, 1), 0, 0.5)
    assert plan.kappa == 0.125
    assert plan.b0 == 0.75
    assert plan.n == 0.5
    assert check_boundary_plan(ModelParams(1, 1, 1), plan)


def test_plan_boundary_one_sided_feller():
    p = ModelParams(2, 0.4, 1)
    assert plan_boundary(p, 0).endpoint == 0
    with pytest.raises(FellerViolated):
        plan_boundary(p, 1)


def test_plan_boundary_near_upper_kappa():
    p = ModelParams(1, 1, 1)
    plan = plan_boundary(p, 0, 0.999999)
    assert plan.b0 > 0.5
    assert 0 < plan.n < 1e-5
    assert check_boundary_plan(p, plan)


def test_check_boundary_plan_violation():
    p = ModelParams(1, 1, 1)
    plan = plan_boundary(p)
    with pytest.raises(DomainError):
        check_boundary_plan(p, plan.replace(n=plan.n * 1.5))


@pytest.mark.parametrize('beta, expected', [
    (0.01, 0.1 ** 0.5),
    (1e-12, 1e-11 ** 0.5),
])
def test_bound_hit_probability(beta, expected):
    plan = plan_boundary(ModelParams(1, 1, 1))
    assert bound_hit_probability(plan, 0.1, beta) == pytest.approx(expected, rel=1e-12)


def test_bound_hit_probability_vacuous():
    plan = plan_boundary(ModelParams(1, 1, 1))
    assert bound_hit_probability(plan, 0.1, 0.1 * (1 - 1e-15)) == pytest.approx(1, rel=1e-12)


def test_bound_hit_probability_mirrored():
    p = ModelParams(1, 1, 1)
    assert bound_hit_probability(plan_boundary(p, 1), 0.9, 0.01) == pytest.approx(bound_hit_probability(plan_boundary(p, 0), 0.1, 0.01), rel=1e-12)


@pytest.mark.parametrize('x, beta', [
    (0.1, 0.1),
    (0.1, 0.2),
    (0.1, 0),
    (0.3, 0.2),
])
def test_bound_hit_probability_ordering(x, beta):
    with pytest.raises(OrderingError):
        bound_hit_probability(plan_boundary(ModelParams(1, 1, 1)), x, beta)


model_params = st.builds(ModelParams, st.floats(0.1, 5), st.floats(0.1, 5), st.floats(0.1, 2)).filter(lambda p: min(p.a, p.b) > 1.01 * p.epsilon ** 2 / 2)
fractions = st.floats(0.05, 0.95)


@settings(max_examples=1000, deadline=None)
@given(p=model_params, c=st.floats(0.01, 10), m_fraction=fractions, alpha_fraction=fractions, kappa_fraction=fractions,
       x=st.floats(1e-6, 1 - 1e-6))
def test_plan_invariants(p, c, m_fraction, alpha_fraction, kappa_fraction, x):
    plan = plan_recurrence(p, c, m_fraction, alpha_fraction)
    assert check_recurrence_plan(p, plan)
    assert plan.alpha < 0.5
    assert plan.C_m == pytest.approx(2 / plan.g_m, rel=1e-14)
    assert bound_exp_moment(plan, x) >= 1

    for endpoint in (0, 1):
        bplan = plan_boundary(p, endpoint, kappa_fraction)
        assert check_boundary_plan(p, bplan)


@settings(max_examples=500, deadline=None)
@given(p=model_params, c=st.floats(0.01, 10), factor=st.floats(1.01, 10))
def test_plan_alpha_decreases_with_rate(p, c, factor):
    assert plan_recurrence(p, c * factor).alpha < plan_recurrence(p, c).alpha


@settings(max_examples=500, deadline=None)
@given(p=model_params, kappa_fraction=fractions)
def test_plan_boundary_symmetry(p, kappa_fraction):
    mirrored = plan_boundary(p, 1, kappa_fraction).as_dict()
    swapped = plan_boundary(p.swap(), 0, kappa_fraction).as_dict()
    assert mirrored.pop('endpoint') == 1
    assert swapped.pop('endpoint') == 0
    assert mirrored == swapped


@settings(max_examples=200, deadline=None)
@given(p=model_params, x=st.floats(0.01, 0.99))
def test_bound_additive_functional_variants(p, x):
    plan = plan_recurrence(p, 1)
    assume(plan.c * plan.alpha ** (plan.m + 1) <= 1)
    assert bound_additive_functional(plan, x, BoundVariant.AS_PROVED) >= bound_additive_functional(plan, x, BoundVariant.AS_STATED)


@pytest.mark.parametrize('multiplier', [1.5, 2, 4])
def test_plan_recurrence_multiplier_sets_alpha_limit(multiplier):
    p = ModelParams(1, 1, 1)
    plan = plan_recurrence(p, 1, multiplier=multiplier)
    assert plan.alpha_upper == pytest.approx(min(plan.g_m / (multiplier * (1 + 2 * plan.m)), 0.5 - 1e-3))
    assert plan.C_m == pytest.approx(multiplier / ((multiplier - 1) * plan.g_m))
