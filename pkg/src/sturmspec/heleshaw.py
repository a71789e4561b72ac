"""Three-layer Hele-Shaw stability as an eigenvalue problem.

A less viscous fluid (viscosity mu1) displaces a middle layer of length L
with viscosity profile mu0(x), which in turn displaces oil (mu2) at speed U.
Normal modes with wave number k and growth rate sigma lead to the problem

    (mu0 f')' - k^2 mu0 f + lam k^2 mu0' f = 0,   lam = U / sigma,

with eigenparameter-dependent conditions whose coefficients are

    alpha1 = k^2 (S k^2 / U + mu1 - mu0(0+)),   alpha2 = mu1 k,
    beta1  = k^2 (mu2 - mu0(L-) - T k^2 / U),   beta2  = mu2 k.

S and T are the interfacial tensions at x = 0 and x = L.  For the linear
profile the viscosity jumps J1 = mu0(0+) - mu1 and J2 = mu2 - mu0(L-) fix
mu0(x) = a x + b.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .core import (BoundaryParams, CoefficientSet, ConstantFunction,
                   LinearFunction, SLProblem, SolverSettings, make_problem)
from .errors import RegimeError, SturmSpecError
from .specfun import constant_profile_existence, constant_profile_spectrum
from .spectrum import RegimeCase, classify_case, full_spectrum

__all__ = [
    "HeleShawParams", "RegimeBounds", "ScanRow", "physics_coefficients",
    "build_slp", "regime_bounds", "growth_rates", "scan", "TABLE1", "TABLE2",
    "TABLE1_REPORTED", "TABLE2_REPORTED", "TABLE_LABELS",
]

TABLE_LABELS = ("-1", "-0", "0", "1", "2")


def _exact(v):
    # shortest decimal form, so 0.1 is read as 1/10 and cancellations in
    # the coefficient formulas are exact
    return Fraction(repr(float(v)))


@dataclass(frozen=True)
class HeleShawParams:
    """Physical parameters; ``profile`` is "linear" (J1, J2) or "constant"
    (mu)."""

    mu1: float
    mu2: float
    S: float
    T: float
    U: float
    L: float
    profile: str = "linear"
    J1: float = 0.0
    J2: float = 0.0
    mu: float | None = None

    def __post_init__(self):
        for name in ("mu1", "mu2", "S", "T", "U", "L"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v!r}")
        if self.profile == "linear":
            if not self.mu0_left > 0:
                raise ValueError("mu1 + J1 must be positive")
            if not self.mu0_right > self.mu0_left:
                raise ValueError("the middle-layer viscosity must increase: "
                                 "mu2 - J2 > mu1 + J1 required")
        elif self.profile == "constant":
            if self.mu is None or not self.mu > 0:
                raise ValueError("constant profile needs mu > 0")
        else:
            raise ValueError(f"unknown profile {self.profile!r}")

    @property
    def mu0_left(self):
        """mu0(0+)."""
        if self.profile == "constant":
            return float(self.mu)
        return float(_exact(self.mu1) + _exact(self.J1))

    @property
    def mu0_right(self):
        """mu0(L-)."""
        if self.profile == "constant":
            return float(self.mu)
        return float(_exact(self.mu2) - _exact(self.J2))

    @property
    def slope(self):
        """a in mu0(x) = a x + b."""
        if self.profile == "constant":
            return 0.0
        num = (_exact(self.mu2) - _exact(self.mu1)
               - (_exact(self.J1) + _exact(self.J2)))
        return float(num / _exact(self.L))

    @property
    def intercept(self):
        """b in mu0(x) = a x + b."""
        return self.mu0_left

    def _jumps_exact(self):
        if self.profile == "constant":
            m = _exact(self.mu)
            return m - _exact(self.mu1), _exact(self.mu2) - m
        return _exact(self.J1), _exact(self.J2)


@dataclass(frozen=True)
class RegimeBounds:
    k_lo: float
    k_hi: float

    def __post_init__(self):
        if not 0 < self.k_lo <= self.k_hi:
            raise ValueError(f"need 0 < k_lo <= k_hi, got {self.k_lo}, "
                             f"{self.k_hi}")

    def classify(self, k: float) -> RegimeCase:
        if k < self.k_lo:
            return RegimeCase.I
        if k > self.k_hi:
            return RegimeCase.III
        return RegimeCase.II


@dataclass(frozen=True)
class ScanRow:
    """One wave number: coefficients, eigenvalues by label and growth rates.

    ``eigenvalues`` maps labels "-1", "-0", "0", "1", ... to a value or None
    when the regime excludes that eigenvalue.  ``error`` holds the message of
    a solver failure for this row; the other rows of a scan are unaffected.
    """

    k: float
    alpha1: float
    beta1: float
    case: RegimeCase | None
    eigenvalues: dict = field(default_factory=dict)
    zero_counts: dict = field(default_factory=dict)
    sigma: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def sigma0(self):
        return self.sigma.get("0")

    def as_dict(self):
        return {"k": self.k, "alpha1": self.alpha1, "beta1": self.beta1,
                "case": self.case.value if self.case else None,
                "eigenvalues": dict(self.eigenvalues),
                "zero_counts": dict(self.zero_counts),
                "sigma": dict(self.sigma), "sigma0": self.sigma0,
                "error": self.error}


def _coefficients_exact(hp, k):
    kk = _exact(k)
    k2 = kk * kk
    S, T, U = _exact(hp.S), _exact(hp.T), _exact(hp.U)
    mu1, mu2 = _exact(hp.mu1), _exact(hp.mu2)
    J1, J2 = hp._jumps_exact()
    # mu1 - mu0(0+) = -J1 and mu2 - mu0(L-) = J2
    a1 = k2 * (S * k2 / U - J1)
    b1 = k2 * (J2 - T * k2 / U)
    return a1, mu1 * kk, b1, mu2 * kk


def physics_coefficients(hp: HeleShawParams, k: float) -> BoundaryParams:
    """Boundary constants for wave number k, in exact rational arithmetic."""
    if not (math.isfinite(k) and k > 0):
        raise ValueError(f"k must be positive, got {k!r}")
    return BoundaryParams(*(float(v) for v in _coefficients_exact(hp, k)))


def build_slp(hp: HeleShawParams, k: float) -> SLProblem:
    """Problem with p = mu0, q = k^2 mu0, r = k^2 mu0' for the linear
    profile.  The constant profile has r = 0 and is handled by the closed
    forms in :mod:`sturmspec.specfun`."""
    if hp.profile != "linear":
        raise RegimeError("constant viscosity gives a zero weight r; use "
                          "specfun.constant_profile_spectrum instead")
    a, b = hp.slope, hp.intercept
    k2 = k * k
    coeffs = CoefficientSet(
        p=LinearFunction(a, b), q=LinearFunction(k2 * a, k2 * b),
        r=ConstantFunction(k2 * a), L=hp.L, increasing_p=True,
        dp=ConstantFunction(a), dr=ConstantFunction(0.0))
    return make_problem(coeffs, physics_coefficients(hp, k))


def regime_bounds(hp: HeleShawParams) -> RegimeBounds:
    """k_lo, k_hi with alpha1 < 0 < beta1 below k_lo and the reverse above
    k_hi."""
    J1, J2 = hp._jumps_exact()
    if not (J1 > 0 and J2 > 0):
        raise RegimeError("regime bounds need positive viscosity jumps")
    U, S, T = _exact(hp.U), _exact(hp.S), _exact(hp.T)
    left, right = U / S * J1, U / T * J2
    return RegimeBounds(math.sqrt(float(min(left, right))),
                        math.sqrt(float(max(left, right))))


def growth_rates(rows, U: float) -> list:
    """Attach sigma_n = U / lam_n for every present eigenvalue."""
    out = []
    for row in rows:
        sigma = {lab: U / lam for lab, lam in row.eigenvalues.items()
                 if lam is not None and lam != 0}
        out.append(replace(row, sigma=sigma))
    return out


def _row(hp, k, n_max, settings):
    bc = physics_coefficients(hp, k)
    labels = ("-1", "-0") + tuple(str(n) for n in range(n_max + 1))
    try:
        if hp.profile == "constant":
            found = constant_profile_spectrum(hp.mu, k, hp.L, bc)
            counts = {lab: abs(int(lab)) for lab in found}
        else:
            recs = full_spectrum(build_slp(hp, k), n_max, settings)
            found = {r.index.label: r.lam for r in recs}
            counts = {r.index.label: r.zero_count for r in recs}
    except SturmSpecError as exc:
        return ScanRow(k, bc.alpha1, bc.beta1, classify_case(bc),
                       error=f"{type(exc).__name__}: {exc}")
    if hp.profile == "constant":
        flags = constant_profile_existence(bc)
        labels = tuple(flags)
    eig = {lab: found.get(lab) for lab in labels}
    return ScanRow(k, bc.alpha1, bc.beta1, classify_case(bc), eig, counts)


def _row_star(args):
    return _row(*args)


def scan(hp: HeleShawParams, k_values, n_max: int = 2,
         settings: SolverSettings | None = None, *, workers: int = 1) -> list:
    """One ScanRow per k, in input order, with growth rates attached.

    ``workers > 1`` spreads the rows over processes; every row is an
    independent computation, so the output does not depend on ``workers``.
    """
    ks = [float(k) for k in k_values]
    for k in ks:
        if not (math.isfinite(k) and k > 0):
            raise ValueError(f"wave numbers must be positive, got {k!r}")
    jobs = [(hp, k, n_max, settings) for k in ks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_star, jobs))
    else:
        rows = [_row_star(j) for j in jobs]
    return growth_rates(rows, hp.U)


# Table presets.  The coefficient columns only fix the jumps and U, S, T;
# the eigenvalue columns are reproduced with a unit middle layer, so L = 1
# (a = 0.8, b = 1.1) here.
TABLE1 = HeleShawParams(mu1=1.0, mu2=2.0, S=1.0, T=1.0, U=1.0, L=1.0,
                        J1=0.1, J2=0.1)
TABLE2 = replace(TABLE1, U=10.0)

# reference rows: k -> (alpha1, beta1, lam_-1, lam_-0, lam_0, lam_1, lam_2)
TABLE1_REPORTED = {
    1: (0.9, -0.9, -6.46019, -3.27535, 14.4968, 68.1856, 158.906),
    2: (15.6, -15.6, -0.51684, -0.29893, 6.11938, 19.6737, 42.3671),
    3: (80.1, -80.1, -0.143895, -0.084287, 3.81799, 9.86499, 19.9527),
    4: (254.4, -254.4, -0.0601436, -0.0347156, 2.96087, 6.3777, 12.0525),
    5: (622.5, -622.5, -0.0307741, -0.0175412, 2.55349, 4.75521, 8.38692),
    6: (1292.4, -1292.4, -0.017825, -0.010068, 2.32709, 3.87244, 6.39387),
    7: (2396.1, -2396.1, -0.0112375, -0.00630497, 2.18659, 3.34028, 5.19194),
    8: (4089.6, -4089.6, -0.007536, -0.0042069, 2.09175, 2.99538, 4.4122),
    9: (6552.9, -6552.9, -0.0052976, -0.00294567, 2.0233, 2.75939, 3.87815),
}
TABLE2_REPORTED = {
    1: (0.0, 0.0, None, None, 4.96968, 26.7236, 81.7087),
    2: (1.2, -1.2, -10.5131, -6.14168, 4.38068, 16.2001, 38.3316),
    3: (7.2, -7.2, -1.84609, -1.06909, 3.51446, 9.30549, 19.3001),
    4: (24.0, -24.0, -0.677423, -0.38866, 2.88683, 6.22874, 11.8694),
    5: (60.0, -60.0, -0.329265, -0.187139, 2.5302, 4.70374, 8.31946),
    6: (126.0, -126.0, -0.186085, -0.104951, 2.31824, 3.85155, 6.36463),
    7: (235.2, -235.2, -0.115748, -0.0648894, 2.18267, 3.33682, 5.17781),
    8: (403.2, -403.2, -0.076998, -0.049627, 2.08979, 2.99072, 4.40481),
    9: (648.0, -648.0, -0.0538465, -0.0299318, 2.02221, 2.75694, 3.87404),
}
