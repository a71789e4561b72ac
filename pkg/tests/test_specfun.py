import math
import random

import mpmath
import numpy as np
import pytest
from scipy import special

from sturmspec import BoundaryParams, SolverSettings, shoot
from sturmspec import heleshaw, specfun


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.5, 7.3, 30.0, -0.5, -2.7])
def test_digamma_vs_scipy(x):
    assert specfun.digamma(x) == pytest.approx(special.digamma(x), rel=1e-13,
                                               abs=1e-14)


@pytest.mark.parametrize("alpha,z", [(0.3, 0.5), (-2.5, 3.0), (-7.25, 11.0),
                                     (1.7, 20.0), (-0.45, 2.75)])
def test_kummer_phi_vs_mpmath(alpha, z):
    ref = float(mpmath.hyp1f1(alpha, 1, z))
    assert specfun.kummer_phi(alpha, z) == pytest.approx(ref, rel=1e-12)
    dref = float(mpmath.diff(lambda t: mpmath.hyp1f1(alpha, 1, t), z))
    assert specfun.kummer_phi_prime(alpha, z) == pytest.approx(dref, rel=1e-10)


@pytest.mark.parametrize("alpha,z", [(0.3, 0.5), (-2.5, 3.0), (-7.25, 11.0),
                                     (1.7, 20.0), (-0.45, 2.75)])
def test_tricomi_psi_vs_mpmath(alpha, z):
    ref = float(mpmath.hyperu(alpha, 1, z))
    assert specfun.tricomi_psi(alpha, z) == pytest.approx(ref, rel=1e-11)


def test_displayed_psi_fails_residual():
    alpha = -0.45
    zs = np.linspace(2.0, 4.0, 9)
    good = specfun.kummer_residual(
        lambda z: specfun.tricomi_psi(alpha, z),
        lambda z: specfun.tricomi_psi_prime(alpha, z), alpha, zs)
    bad = specfun.kummer_residual(
        lambda z: specfun.tricomi_psi(alpha, z, form="displayed"),
        lambda z: specfun.tricomi_psi_prime(alpha, z, form="displayed"),
        alpha, zs)
    assert good < 1e-7
    assert bad > 1e-3


@pytest.mark.parametrize("alpha", [0.0, -1.0, -2.0, -3.0])
def test_log_solution_at_integer_alpha(alpha):
    zs = np.linspace(1.5, 4.0, 7)
    res = specfun.kummer_residual(
        lambda z: specfun.kummer_log_solution(alpha, z)[0],
        lambda z: specfun.kummer_log_solution(alpha, z)[1], alpha, zs)
    assert res < 1e-7


def test_linear_profile_solution_vs_shoot(tight):
    hp = heleshaw.TABLE1
    prof = specfun.LinearProfile(hp.slope, hp.intercept)
    for k, lam in [(1.0, 14.4968), (2.0, -0.51684), (3.0, 5.0), (1.0, 5.0)]:
        prob = heleshaw.build_slp(hp, k)
        xs = np.linspace(0.0, hp.L, 9)
        f, df = specfun.linear_profile_solution(prof, k, lam, xs,
                                                prob.boundary)
        for xi, fi in zip(xs, f):
            ref = shoot(prob.__class__(
                prob.coefficients.__class__(
                    prob.coefficients.p, prob.coefficients.q,
                    prob.coefficients.r, float(xi) if xi > 0 else 1e-12),
                prob.boundary), lam, tight, locate=False).f_end
            assert fi == pytest.approx(ref, rel=1e-8, abs=1e-10)


def test_constant_profile_closed_forms(tight):
    from sturmspec import CoefficientSet, ConstantFunction, h1, make_problem
    mu, k, L = 1.5, 2.0, 1.0
    bc = BoundaryParams(0.9, 3.0, -0.9, 3.0)
    prob = make_problem(
        CoefficientSet(ConstantFunction(mu), ConstantFunction(k * k * mu),
                       ConstantFunction(0.0), L), bc, require_positive="pq")
    for lam in (0.5, 3.0, -2.0, -9.0):
        assert h1(prob, lam, tight) == pytest.approx(
            specfun.constant_profile_h1(mu, k, L, bc, lam), rel=1e-10)
        f, df = specfun.constant_profile_solution(mu, k, lam, L, 0.9, 3.0)
        s = shoot(prob, lam, tight, locate=False)
        assert mu * s.f_end == pytest.approx(f, rel=1e-10)
        assert s.pfprime_end == pytest.approx(df, rel=1e-10)


def _random_bc(rng):
    def pick():
        return rng.choice([-1, 0, 1]) * rng.uniform(0.1, 5.0)
    return BoundaryParams(pick(), rng.uniform(0.1, 5.0), pick(),
                          rng.uniform(0.1, 5.0))


def test_existence_matrix_matches_quadratic_roots():
    rng = random.Random(7)
    for _ in range(300):
        bc = _random_bc(rng)
        mu, k, L = rng.uniform(0.5, 3), rng.uniform(0.2, 4), rng.uniform(0.2, 2)
        roots = specfun.constant_profile_spectrum(mu, k, L, bc)
        flags = specfun.constant_profile_existence(bc)
        assert {lab for lab, v in flags.items() if v} == set(roots)
        assert all(v != 0 for v in roots.values())
