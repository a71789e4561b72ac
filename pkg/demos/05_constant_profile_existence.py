"""Constant viscosity in the middle layer.

The amplitude equation has hyperbolic solutions, the characteristic
equation is a quadratic in lam, and which eigenvalues exist depends only
on the signs of alpha1 and beta1.  No sign pattern yields lam = 0, so there
is no wave with zero growth rate.
"""
from dataclasses import replace

from sturmspec import BoundaryParams, heleshaw, specfun

print("alpha1 beta1 | lam_-1 lam_-0 lam_0 lam_1")
for a1 in (-1, 1, 0):
    for b1 in (1, 0, -1):
        flags = specfun.constant_profile_existence((a1, b1))
        cells = ["exist" if flags[lab] else "not"
                 for lab in specfun.EXISTENCE_LABELS]
        print(f"{a1:+6d} {b1:+5d} | " + " ".join(f"{c:>6}" for c in cells))

bc = BoundaryParams(0.9, 1.0, -0.9, 2.0)
print("\nexample (mu = 1.5, k = 1, L = 1):",
      specfun.constant_profile_spectrum(1.5, 1.0, 1.0, bc))

hp = replace(heleshaw.TABLE1, profile="constant", mu=1.5)
for row in heleshaw.scan(hp, [0.2, 1.0, 4.0]):
    print(f"k={row.k:4.1f} alpha1={row.alpha1:9.4g} beta1={row.beta1:9.4g} "
          f"eigenvalues={ {k: round(v, 6) for k, v in row.eigenvalues.items() if v is not None} }")
