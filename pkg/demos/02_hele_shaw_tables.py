"""Linear stability of a three-layer Hele-Shaw flow.

The middle layer has a linear viscosity profile.  For every wave number k
the perturbation amplitude solves a Sturm-Liouville problem whose boundary
conditions depend on lam = U / sigma.  The scan reproduces the layout of the
standard wave-number tables: boundary coefficients, the two negative eigenvalues and
the first three positive ones, plus the dominant growth rate U / lam_0.
"""
from sturmspec import heleshaw


def show(title, hp):
    print(title)
    print(f"{'k':>3} {'alpha1':>9} {'beta1':>9} " +
          " ".join(f"{'lam_' + lab:>11}" for lab in heleshaw.TABLE_LABELS) +
          f" {'sigma_0':>9}")
    for row in heleshaw.scan(hp, range(1, 10), 2):
        cells = [("-" if row.eigenvalues.get(lab) is None
                  else f"{row.eigenvalues[lab]:.6g}")
                 for lab in heleshaw.TABLE_LABELS]
        print(f"{row.k:3.0f} {row.alpha1:9.6g} {row.beta1:9.6g} " +
              " ".join(f"{c:>11}" for c in cells) + f" {row.sigma0:9.4g}")
    print()


show("U = 1", heleshaw.TABLE1)
show("U = 10 (alpha1 = beta1 = 0 at k = 1: no negative eigenvalues)",
     heleshaw.TABLE2)
