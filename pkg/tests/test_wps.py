import math
from fractions import Fraction

import numpy as np
import pytest

from jetmorse.wps import (FiberEvaluationError, FiberPoint, WeightSpec,
                          integrate_fiber, integrate_fiber_limit, phi, phi_limit,
                          volume_closed_form)


def test_weight_spec_validation():
    w = WeightSpec((1, 2, 3), (1, 1, 1))
    assert w.p == 6.0  # lcm default
    assert w.total_rank == 3
    with pytest.raises(ValueError):
        WeightSpec((2, 4), (1, 1))  # not coprime
    with pytest.raises(ValueError):
        WeightSpec((1, 2), (1,))
    with pytest.raises(ValueError):
        WeightSpec((1, 3), (1, 1), p=2.0)  # p below max weight


def test_volume_closed_form():
    assert volume_closed_form(WeightSpec((1, 2, 3), (1, 1, 1))) == Fraction(1, 6)
    assert volume_closed_form(WeightSpec((1, 2), (2, 1))) == Fraction(1, 2)
    assert volume_closed_form(WeightSpec((1,), (4,))) == 1


def test_phi_log_homogeneous():
    # phi(lambda . z) = phi(z) + 2 log|lambda| for the weighted action
    w = WeightSpec((1, 2), (2, 1))
    z = FiberPoint((np.array([0.3 + 0.1j, -0.2j]), np.array([0.5 + 0.4j])))
    lam = 0.7 - 0.3j
    got = phi(w, z.scaled(lam, w.a))
    assert abs(got - (phi(w, z) + 2 * math.log(abs(lam)))) < 1e-12


def test_phi_limit_is_pointwise_limit():
    w_small = WeightSpec((1, 2), (1, 1), p=2.0)
    w_big = WeightSpec((1, 2), (1, 1), p=4096.0)
    z = FiberPoint((np.array([0.8]), np.array([0.6])))
    lim = phi_limit(w_big, z)
    assert abs(phi(w_big, z) - lim) < 1e-3
    assert abs(phi(w_small, z) - lim) > abs(phi(w_big, z) - lim)


def test_phi_limit_zero_block():
    w = WeightSpec((1, 2), (1, 1))
    z = FiberPoint((np.array([0.0]), np.array([0.5])))
    assert phi_limit(w, z) == 2 / 2 * math.log(0.5)


def test_integrate_fiber_constant_matches_volume():
    w = WeightSpec((1, 2), (2, 1))
    est, se = integrate_fiber(w, lambda z: 1.0, 40000, 3)
    assert abs(est - 0.5) <= 3 * se + 1e-12


def test_integrate_fiber_deterministic():
    w = WeightSpec((2, 3), (1, 2))
    f = lambda z: float(np.linalg.norm(z[0]) ** 2)
    a = integrate_fiber(w, f, 5000, 9)
    b = integrate_fiber(w, f, 5000, 9)
    assert a == b
    c = integrate_fiber(w, f, 5000, 10)
    assert a != c


def test_integrate_fiber_limit_sphere_moment():
    # the p -> infinity measure is volume times the product-of-spheres average;
    # |u_1|^2 averages to 1/r on the first block
    w = WeightSpec((1,), (3,))
    f = lambda z: float(abs(z[0][0]) ** 2)
    est, se = integrate_fiber_limit(w, f, 60000, 21)
    assert abs(est - 1 / 3) <= 3 * se


def test_integrate_fiber_nonfinite_raises():
    w = WeightSpec((1, 2), (1, 1))
    with pytest.raises(FiberEvaluationError) as err:
        integrate_fiber(w, lambda z: float("nan"), 100, 5)
    assert err.value.sample_index == 0


def test_permutation_invariance():
    # permuting the (a_s, r_s) pairs changes draws but not the integral
    f = lambda z: float(sum(np.linalg.norm(v) ** 2 for v in z))
    w1 = WeightSpec((1, 2), (2, 1))
    w2 = WeightSpec((2, 1), (1, 2))
    assert volume_closed_form(w1) == volume_closed_form(w2)
    e1, s1 = integrate_fiber(w1, f, 40000, 12)
    e2, s2 = integrate_fiber(w2, lambda z: f(z[::-1]), 40000, 12)
    assert abs(e1 - e2) <= 3 * math.hypot(s1, s2) + 1e-12
