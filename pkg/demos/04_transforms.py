"""From eigenparameter dependent conditions to a regular problem and back.

The ground state f(.; lam_0) is positive, so g = p f' - phi0 f with
phi0 = p y0'/y0 maps every other eigenfunction to an eigenfunction of a
regular Sturm-Liouville problem with lam-independent Robin conditions.
Its spectrum is the original one with lam_0 removed.  The Liouville
change of variables then puts it in the form z'' + (lam - Q) z = 0 on
[0, t1], and sqrt(lam) ~ m pi / t1 for the m-th regular eigenvalue.
"""
import math

import numpy as np

from sturmspec import eigenfunction_samples, full_spectrum, heleshaw, transforms

problem = heleshaw.build_slp(heleshaw.TABLE1, 1.0)
records = full_spectrum(problem, 5)
lam = {r.index.label: r.lam for r in records}

ctx = transforms.make_context(problem, lam["0"])
reg = transforms.build_regular_slp(ctx, problem)
print(f"regular problem: alpha~ = {reg.alpha:.6g}, beta~ = {reg.beta:.6g}")

for label in ("1", "2"):
    fs = eigenfunction_samples(problem, lam[label], ctx.x)
    x, g, dg = transforms.crum_darboux(ctx, problem, lam[label], fs)
    res = transforms.regular_residual(reg, lam[label], x, g, dg)
    inv = transforms.inverse_map(lam[label], x, g, ctx, problem)
    scale = fs[0, 1] / inv.w[0]
    dev = np.max(np.abs(scale * inv.w - fs[:, 1])) / np.max(np.abs(fs[:, 1]))
    print(f"lambda_{label}: transformed residual {res.worst:.1e}, "
          f"inverse map deviation {dev:.1e}")

regular = transforms.regular_eigenvalues(reg, 5)
original = [lam[k] for k in ("-1", "-0", "1", "2", "3", "4")]
print("\nregular spectrum vs original without lambda_0:")
for a, b in zip(regular, original):
    print(f"  {a:14.8g} {b:14.8g}")

form = transforms.liouville_normalize(reg)
print(f"\nLiouville length t1 = {form.t1:.6f}")
for m, value in enumerate(regular[2:], start=2):
    print(f"  m={m}: sqrt(lam) t1 / (m pi) = "
          f"{math.sqrt(value) * form.t1 / (m * math.pi):.5f}")
