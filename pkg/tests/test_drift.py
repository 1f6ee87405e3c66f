# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import io

from math import exp

import numpy as np
import pytest

from hypothesis import assume, given, settings, strategies as st

from wfdiffusion.runtime import LyapunovSpec, ModelParams, plan_boundary, plan_recurrence
from wfdiffusion.tool import (check_plan_drift, fuzz_generator, inflated_plan, ito_expansion_identity, scan_boundary_drift, scan_recurrence_drift,
                              write_scan_csv)
from wfdiffusion.tool.drift import relative_error


@pytest.mark.parametrize('a, b, epsilon, c', [
    (1, 1, 1, 1),
    (2, 3, 1, 0.5),
    (1, 1, 0.7, 0.5),
])
@pytest.mark.parametrize('endpoint', [0, 1])
def test_recurrence_drift_holds(a, b, epsilon, c, endpoint):
    p = ModelParams(a, b, epsilon)
    plan = plan_recurrence(p, c)
    report = scan_recurrence_drift(p, plan, 1000, endpoint=endpoint)
    assert report.holds
    assert report.inequality_margin >= -1e-12
    assert report.max_rel_err <= 1e-6
    assert len(report.grid) == 1000
    if endpoint == 0:
        assert report.grid[0] == pytest.approx(1e-11)
        assert report.grid[-1] == pytest.approx(plan.alpha)
    else:
        assert report.grid[-1] == pytest.approx(1 - plan.alpha)


def test_recurrence_drift_example():
    p = ModelParams(1, 1, 1)
    plan = plan_recurrence(p, 1)
    assert plan.alpha == 0.015625
    report = scan_recurrence_drift(p, plan, 1000)
    assert report.margins[-1] >= 0
    assert report.required_rhs[0] == pytest.approx(-0.5 * plan.g_m / (plan.m + 1))


@pytest.mark.parametrize('a, b', [
    (1, 1),
    (2, 3),
    (3, 2),
])
def test_recurrence_drift_inflated_alpha(a, b):
    p = ModelParams(a, b, 1)
    scans, inflated = check_plan_drift(p, plan_recurrence(p, 1), [plan_boundary(p, 0), plan_boundary(p, 1)], 200)
    assert all(scan.holds for scan in scans)
    assert not inflated.holds
    assert inflated.margins[-1] < 0


def test_inflated_plan():
    plan = plan_recurrence(ModelParams(1, 1, 1), 1)
    assert inflated_plan(plan).alpha == 2 * plan.alpha_upper


@pytest.mark.parametrize('a, b', [
    (2, 3),
    (3, 1.2),
])
def test_mirrored_scan_matches_swapped_model(a, b):
    p = ModelParams(a, b, 1)
    plan = plan_recurrence(p, 1)
    mirrored = scan_recurrence_drift(p, plan, 500, endpoint=1)
    swapped = scan_recurrence_drift(p.swap(), plan, 500, endpoint=0)
    assert mirrored.holds == swapped.holds
    assert np.array_equal(mirrored.margins, swapped.margins)

    inflated = inflated_plan(plan)
    assert scan_recurrence_drift(p, inflated, 500, endpoint=1).holds == scan_recurrence_drift(p.swap(), inflated, 500, endpoint=0).holds


@pytest.mark.parametrize('a, b, epsilon', [
    (1, 1, 1),
    (2, 3, 1),
    (0.6, 4, 0.9),
])
@pytest.mark.parametrize('endpoint', [0, 1])
def test_boundary_drift_holds(a, b, epsilon, endpoint):
    p = ModelParams(a, b, epsilon)
    bplan = plan_boundary(p, endpoint)
    report = scan_boundary_drift(p, bplan, 1000)
    assert report.holds
    assert report.max_rel_err <= 1e-6
    if endpoint == 1:
        assert report.grid[-1] == pytest.approx(1 - bplan.kappa)


def test_boundary_drift_exponent_too_large():
    p = ModelParams(1, 1, 1)
    bplan = plan_boundary(p)
    report = scan_boundary_drift(p, bplan.replace(n=bplan.n * 1.5), 1000)
    assert not report.holds


def test_drift_scans_large_exponents():
    # m and n are close to 50 here, so the unscaled generator overflows near the endpoints
    p = ModelParams(2, 2, 0.2)
    plan = plan_recurrence(p, 1)
    bplans = [plan_boundary(p, 0), plan_boundary(p, 1)]
    assert plan.m > 40
    assert all(bplan.n > 40 for bplan in bplans)

    scans, inflated = check_plan_drift(p, plan, bplans, 1000)
    for scan in scans:
        assert scan.holds
        assert scan.max_rel_err <= 1e-6
        assert np.all(np.isfinite(scan.closed_form))
        assert np.all(np.isfinite(scan.fd_values))
    assert not inflated.holds


@settings(max_examples=100, deadline=None)
@given(a=st.floats(0.1, 5), b=st.floats(0.1, 5), epsilon=st.floats(0.1, 2), c=st.floats(0.1, 2))
def test_drift_scans_hold_for_default_plans(a, b, epsilon, c):
    p = ModelParams(a, b, epsilon)
    # keep the compact interval and kappa well above the first grid point
    assume(min(a, b) >= epsilon ** 2 / 2 + 1e-3)
    plan = plan_recurrence(p, c)
    for endpoint in (0, 1):
        recurrence = scan_recurrence_drift(p, plan, 200, endpoint=endpoint)
        assert recurrence.holds
        assert recurrence.max_rel_err <= 1e-6

        boundary = scan_boundary_drift(p, plan_boundary(p, endpoint), 200)
        assert boundary.holds
        assert boundary.max_rel_err <= 1e-6


@pytest.mark.parametrize('c, t, x', [
    (1.0, 0.0, 0.3),
    (0.5, 1.0, 0.01),
])
def test_ito_identity_constant_in_x(c, t, x):
    check = ito_expansion_identity(ModelParams(1, 2, 1), 0, c, t, x)
    assert check.lhs == pytest.approx(c * exp(c * t), rel=1e-15)
    assert check.rhs == pytest.approx(c * exp(c * t), rel=1e-15)


def test_ito_identity_vanishing_slope():
    p = ModelParams(0.2, 0.1, 1)
    m = 0.5
    q = m * (m + 1) / 2
    c = q - m * (p.a + p.b)
    check = ito_expansion_identity(p, m, c, 0.0, 0.2)
    assert c > 0
    assert check.lhs == pytest.approx(0.2 ** (-m - 1) * (-m * p.a + q), rel=1e-14)
    assert check.abs_err <= 1e-12 * check.scale


def test_generator_fuzz():
    report = fuzz_generator(2000, 7)
    assert report.n == 2000
    assert report.identity_err <= 1e-12
    assert report.fd_err <= 1e-6
    assert sum(report.kinds.values()) == 2000
    assert all(report.kinds[kind] > 0 for kind in LyapunovSpec.kinds)


def test_generator_fuzz_reproducible():
    assert fuzz_generator(200, 3).as_dict() == fuzz_generator(200, 3).as_dict()


@pytest.mark.parametrize('value, reference, scale, expected', [
    (1.5, 1.0, 1.0, 0.5),
    (-2.0, -1.0, 3.0, 1.0),
    (1e-7, 0.0, 1.0, 0.1),
    (0.0, 0.0, 0.0, 0.0),
])
def test_relative_error(value, reference, scale, expected):
    assert float(relative_error(value, reference, scale)) == pytest.approx(expected)


def test_write_scan_csv():
    p = ModelParams(1, 1, 1)
    report = scan_recurrence_drift(p, plan_recurrence(p, 1), 10)
    out = io.StringIO()
    write_scan_csv(report, out)
    lines = out.getvalue().splitlines()
    assert lines[0] == 'x,closed_form,fd,required_rhs,margin'
    assert len(lines) == 11
