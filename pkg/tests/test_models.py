import json
import math
from fractions import Fraction

import numpy as np
import pytest

from jetmorse.curvature import curvature_pairing, eta, sigma_variance, trace_free
from jetmorse.measures import sample_sphere_batch
from jetmorse.models import (CompleteIntersectionSpec, SecondFundamentalForm,
                             build_sample, ci_threshold,
                             fermat_sample, fermat_second_fundamental_form,
                             fermat_tangent_tensor, fubini_study_tensor,
                             hypersurface_tensor, j_bound, random_tensor)
from jetmorse.rng import stream


def test_fubini_study_eta():
    assert np.allclose(eta(fubini_study_tensor(1)).entries, [[-2.0]])
    assert np.allclose(eta(fubini_study_tensor(2)).entries, -3.0 * np.eye(2))


def test_fubini_study_pairing_contract():
    rng = stream(1, "fs-contract")
    for n in (1, 2, 3):
        t = fubini_study_tensor(n)
        for _ in range(200):
            z = sample_sphere_batch(n, (), rng)
            u = sample_sphere_batch(n, (), rng)
            want = 1.0 + abs(np.vdot(u, z)) ** 2
            assert abs(curvature_pairing(t, z, u) - want) < 1e-10


def test_hypersurface_zero_beta_is_fubini_study():
    ff = SecondFundamentalForm(np.zeros((1, 2, 2), dtype=complex))
    assert np.array_equal(hypersurface_tensor(ff, 2).c, fubini_study_tensor(2).c)


def test_hypersurface_pairing_contract():
    rng = stream(2, "hyp")
    b = rng.standard_normal((1, 2, 2)) + 1j * rng.standard_normal((1, 2, 2))
    b = 0.5 * (b + np.transpose(b, (0, 2, 1)))
    ff = SecondFundamentalForm(b)
    t = hypersurface_tensor(ff, 2)
    for _ in range(200):
        z = sample_sphere_batch(2, (), rng)
        u = sample_sphere_batch(2, (), rng)
        want = 1.0 + abs(np.vdot(u, z)) ** 2 - np.sum(np.abs(ff.apply(z, u)) ** 2)
        assert abs(curvature_pairing(t, z, u) - want) < 1e-10


def test_beta_scaling_quadratic_in_eta():
    b = np.full((1, 1, 1), 1.0 + 0.0j)
    e1 = eta(hypersurface_tensor(SecondFundamentalForm(b), 1)).entries[0, 0]
    e2 = eta(hypersurface_tensor(SecondFundamentalForm(2 * b), 1)).entries[0, 0]
    # eta = |b|^2 - 2 in rank one, so the beta part scales by 4
    assert (e2 + 2) == pytest.approx(4 * (e1 + 2))


def test_second_fundamental_form_symmetry_enforced():
    bad = np.zeros((1, 2, 2), dtype=complex)
    bad[0, 0, 1] = 1.0
    with pytest.raises(ValueError):
        SecondFundamentalForm(bad)


def _fermat_point(n, d, seed):
    rng = stream(seed, "pt", n, d)
    rest = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    z = np.append(rest, (-np.sum(rest**d)) ** (1.0 / d))
    return z / np.linalg.norm(z)


def test_fermat_point_rejection():
    with pytest.raises(ValueError):
        fermat_second_fundamental_form(2, 6, np.ones(4, dtype=complex))
    with pytest.raises(ValueError):
        fermat_second_fundamental_form(2, 6, np.zeros(4, dtype=complex))


def test_fermat_linear_has_zero_beta():
    z = _fermat_point(2, 1, 3)
    ff = fermat_second_fundamental_form(2, 1, z)
    assert not np.any(ff.beta)


def test_fermat_trace_identity():
    # eta = Tr(beta beta^*) - (n+1) id, assembled independently from beta
    n, d = 2, 6
    for seed in range(20):
        z = _fermat_point(n, d, seed)
        ff = fermat_second_fundamental_form(n, d, z)
        t = hypersurface_tensor(ff, n)
        want = (np.einsum("sia,sja->ij", ff.beta, ff.beta.conj())
                - (n + 1) * np.eye(n))
        assert float(np.abs(eta(t).entries - want).max()) < 1e-8


def test_fermat_frame_choice_invariance():
    # scalar invariants do not depend on the unitary frame freedom; a
    # rescaled representative of the same projective point gives the same eta
    n, d = 2, 6
    z = _fermat_point(n, d, 7)
    t1 = fermat_tangent_tensor(n, d, z)
    t2 = fermat_tangent_tensor(n, d, 3.7j * z)
    e1 = np.linalg.eigvalsh(eta(t1).entries)
    e2 = np.linalg.eigvalsh(eta(t2).entries)
    assert np.allclose(e1, e2, atol=1e-8)


def test_fermat_curve_eta_averages_to_zero():
    # degree-3 curve in the projective plane has trivial canonical bundle,
    # so the weighted quadrature average of the scalar eta vanishes
    S = fermat_sample(1, 3, 10000, 5)
    w = np.array([p.weight for p in S.points])
    v = np.array([float(eta(p.tensor).entries[0, 0].real) for p in S.points])
    avg = float(w @ v)
    m = len(w)
    se = math.sqrt(np.var(w * m * (v - avg)) / m)
    assert abs(avg) <= 3 * se
    assert abs(avg) < 0.05


def test_fermat_rank1_trace_free_vanishes():
    z = _fermat_point(1, 3, 11)
    t = fermat_tangent_tensor(1, 3, z)
    assert float(np.abs(trace_free(t).c).max()) < 1e-12


def test_random_tensor_properties():
    t = random_tensor(2, 3, 1.0, 5)
    assert np.array_equal(t.c, random_tensor(2, 3, 1.0, 5).c)
    assert not np.array_equal(t.c, random_tensor(2, 3, 1.0, 6).c)
    assert not np.any(random_tensor(2, 3, 0.0, 5).c)


def test_ci_threshold_example():
    spec = CompleteIntersectionSpec(2, 1, (15,), Fraction(1))
    assert ci_threshold(spec) == pytest.approx(106.874, abs=5e-3)


def test_ci_threshold_boundary_and_monotone():
    with pytest.raises(ValueError):
        ci_threshold(CompleteIntersectionSpec(2, 1, (5,), Fraction(1)))
    vals = [ci_threshold(CompleteIntersectionSpec(2, 1, (d,), Fraction(1)))
            for d in (8, 12, 20, 100)]
    assert vals == sorted(vals, reverse=True)


def test_ci_threshold_large_degree_limit():
    big = ci_threshold(CompleteIntersectionSpec(2, 1, (10**9,), Fraction(1)))
    assert abs(big - 7.38 * 2**2.5) < 1e-6


def test_j_bound_zero_cases():
    from jetmorse.morse_mc import ManifoldPoint, ManifoldSample
    M1 = ManifoldSample((ManifoldPoint("a", random_tensor(1, 2, 1.0, 1), 1.0),))
    assert j_bound(M1, 10) == 0.0
    M2 = ManifoldSample((ManifoldPoint("a", random_tensor(2, 2, 0.0, 1), 1.0),))
    assert j_bound(M2, 10) == 0.0


def test_j_bound_monotone_with_limit():
    from jetmorse.morse_mc import ManifoldPoint, ManifoldSample
    M = ManifoldSample((ManifoldPoint("a", random_tensor(2, 2, 1.0, 3), 1.0),))
    v1 = j_bound(M, 2, seed=1)
    v2 = j_bound(M, 50, seed=1)
    v3 = j_bound(M, 5000, seed=1)
    assert v1 <= v2 <= v3
    # the partial sum factor saturates at pi/sqrt(6)
    assert v3 / (v1 / math.sqrt(1 + 0.25)) == pytest.approx(math.pi / math.sqrt(6),
                                                            rel=1e-3)


def test_build_sample_kinds():
    s = build_sample({"type": "fubini_study", "n": 2})
    assert s.n == 2 and s.r == 2 and len(s.points) == 1
    s = build_sample({"type": "random", "n": 2, "r": 1, "points": 3, "seed": 4})
    assert len(s.points) == 3 and s.r == 1
    s = build_sample({"type": "fermat", "n": 1, "d": 3, "points": 10, "seed": 2})
    assert len(s.points) == 10
    with pytest.raises(ValueError):
        build_sample({"type": "unknown"})


def test_build_sample_explicit_roundtrip():
    from jetmorse.curvature import tensor_to_json
    t = random_tensor(2, 2, 1.0, 9)
    doc = {"type": "explicit", "points": [
        {"id": "a", "weight": 0.5, "tensor": json.loads(tensor_to_json(t))},
        {"id": "b", "weight": 0.5, "tensor": json.loads(tensor_to_json(t)),
         "twist": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]},
    ]}
    s = build_sample(doc)
    assert s.points[1].twist is not None
    assert np.array_equal(s.points[0].tensor.c, t.c)
