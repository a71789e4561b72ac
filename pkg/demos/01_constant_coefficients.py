"""Spectrum of a constant-coefficient problem with two eigenparameter
dependent boundary conditions.

    f'' - f + lam f = 0 on ]0, 1[
    f'(0) = (lam + 1) f(0),   f'(1) = (-lam - 1) f(1)

Besides the ordinary oscillating eigenfunctions there are two extra
eigenvalues on the negative axis.  Each eigenfunction with index l has
exactly |l| interior zeros, which the Prüfer count confirms.
"""
import math

from sturmspec import (BoundaryParams, CoefficientSet, ConstantFunction,
                       aux_spectrum, full_spectrum, make_problem,
                       verify_interlacing)

one = ConstantFunction(1.0)
problem = make_problem(CoefficientSet(one, one, one, 1.0),
                       BoundaryParams(1.0, 1.0, -1.0, 1.0))

aux = aux_spectrum(problem, 4)
print("auxiliary problem (f(1) = 0):")
print(f"  eta_-0 = {aux.eta_neg0}")
for n, eta in enumerate(aux.etas):
    print(f"  eta_{n} = {eta:.8g}")

records = full_spectrum(problem, 4, aux=aux)
print("\neigenvalues:")
for rec in records:
    print(f"  lambda_{rec.index.label:>2} = {rec.lam:14.8g}  zeros={rec.zero_count}"
          f"  branch=]{rec.branch.lo:.4g}, {rec.branch.hi:.4g}[")

print("\ninterlacing chain holds:", verify_interlacing(records, aux).ok)

# large eigenvalues approach Dirichlet modes: sqrt(lambda_n) ~ (n + 1) pi
for rec in records[-3:]:
    n = int(rec.index.label)
    print(f"  n={n}: sqrt(lambda)/pi = {math.sqrt(rec.lam) / math.pi:.5f}")
