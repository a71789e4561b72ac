"""Closed-form solutions for the linear viscosity profile.

With mu0(x) = a x + b the amplitude equation becomes Kummer's equation in
z = 2k(ax + b)/a, with alpha = (1 - lam k)/2 and c = 1.  This script checks
the series for Phi and Psi against mpmath when available, shows the ODE
residual gate, and compares the Kummer solution with direct shooting.
"""
import numpy as np

from sturmspec import SolverSettings, shoot
from sturmspec import heleshaw, specfun

alpha, z = -2.3, 4.0
print(f"Phi({alpha}, 1; {z}) = {specfun.kummer_phi(alpha, z):.15g}")
print(f"Psi({alpha}, 1; {z}) = {specfun.tricomi_psi(alpha, z):.15g}")
try:
    import mpmath
    print(f"  mpmath hyp1f1 = {float(mpmath.hyp1f1(alpha, 1, z)):.15g}")
    print(f"  mpmath hyperu = {float(mpmath.hyperu(alpha, 1, z)):.15g}")
except ImportError:
    pass

zs = np.linspace(2.0, 6.0, 9)
for form in ("standard", "displayed"):
    res = specfun.kummer_residual(
        lambda t: specfun.tricomi_psi(alpha, t, form=form),
        lambda t: specfun.tricomi_psi_prime(alpha, t, form=form), alpha, zs)
    print(f"ODE residual of the {form} logarithmic series: {res:.2e}")

hp = heleshaw.TABLE1
prof = specfun.LinearProfile(hp.slope, hp.intercept)
k = 1.0
problem = heleshaw.build_slp(hp, k)
tight = SolverSettings(rel_tol=1e-13, abs_tol=1e-15)
for lam in (-6.46019, 14.4968, 5.0):   # lam = 5 puts alpha at the pole -2
    f, _ = specfun.linear_profile_solution(prof, k, lam, hp.L,
                                           problem.boundary)
    s = shoot(problem, lam, tight, locate=False)
    print(f"lam={lam:9.5g}: Kummer f(L)={f:.12g}  shooting f(L)={s.f_end:.12g}")
