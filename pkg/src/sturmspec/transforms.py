"""Crum-Darboux and Liouville transforms, and the verifiers built on them.

Given an eigenvalue lam0 whose eigenfunction y0 is positive on [0, L], put
phi0 = p y0' / y0.  For any solution f at lam the function

    g = p f' - phi0 f

satisfies g' = (lam0 - lam) r f - (phi0 / p) g and solves the regular
problem

    ((1/r) g')' - (q~ - lam / p) g = 0,
    q~ = 2 lam0 / p - q / (p r) + 2 phi0^2 / (p^2 r) + phi0 (p r)' / (p r)^2,
    g'(0) = -alpha~ g(0),   alpha~ = r(0)/alpha1 + phi0(0)/p(0),
    g'(L) = -beta~ g(L),    beta~  = r(L)/beta1  + phi0(L)/p(L),

whose boundary rows no longer contain lam.  Every eigenvalue lam != lam0 of
the original problem is an eigenvalue of the regular one; the map back is

    w = y0 (int_0^x g / (y0 p) ds + C),   C = g(0) / (alpha1 (lam - lam0)).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .core import (SLProblem, SolverSettings, _initial_state, derivative,
                   integrate_state, terminal_state)
from .errors import DomainError, RegimeError, SearchError, TransformError
from .spectrum import Branch, h1

__all__ = [
    "TransformContext", "RegularSLP", "LiouvilleForm", "ConditioningWarning",
    "make_context", "crum_darboux", "build_regular_slp", "regular_residual",
    "regular_eigenvalue", "regular_eigenvalues", "regular_eigenfunction",
    "liouville_normalize", "liouville_eigenvalues", "asymptotic_check",
    "AsymptoticReport", "separation_check", "SeparationReport", "inverse_map",
    "InverseReport", "monotonicity_probe", "MonotonicityReport",
    "robin_eigenvalue", "GRID_POINTS",
]

GRID_POINTS = 2 ** 12 + 1


class ConditioningWarning(UserWarning):
    """Finite-difference estimates of a coefficient derivative disagree."""


# ----------------------------------------------------------------- context

@dataclass(frozen=True)
class TransformContext:
    """Ground eigenvalue lam0 and its eigenfunction y0 > 0.

    ``x``, ``y0`` and ``py0`` sample y0 and p y0' on a uniform grid; the
    dense interpolant ``solution`` evaluates them anywhere in [0, L].
    """

    lambda0: float
    x: np.ndarray = field(repr=False)
    y0: np.ndarray = field(repr=False)
    py0: np.ndarray = field(repr=False)
    solution: object = field(repr=False, compare=False)
    L: float = 1.0

    def phi0(self, x):
        """p y0' / y0 at x (scalar or array)."""
        s = self.solution(x)
        return s[1] / s[0]

    def ground(self, x):
        """y0 at x."""
        return self.solution(x)[0]


def make_context(problem: SLProblem, lam0: float,
                 settings: SolverSettings | None = None, *,
                 n_grid: int = GRID_POINTS) -> TransformContext:
    settings = settings or SolverSettings()
    c = problem.coefficients
    y_init = _initial_state(problem, lam0)
    _, sol, _, _ = integrate_state(c.p, c.q, c.r, c.L, float(lam0), y_init,
                                   settings, dense=True)
    x = np.linspace(0.0, c.L, n_grid)
    states = sol(x)
    y0, py0 = states[0].copy(), states[1].copy()
    y0[0], py0[0] = y_init[0], y_init[1]
    if np.any(y0 <= 0):
        bad = float(x[np.argmax(y0 <= 0)])
        raise TransformError(f"ground function f(.; {lam0}) is not positive "
                             f"(first failure at x={bad:.6g})")
    return TransformContext(float(lam0), x, y0, py0, sol, c.L)


# ------------------------------------------------------------ Crum-Darboux

def _fsamples(f_samples):
    arr = np.asarray(f_samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DomainError("f_samples must be rows (x, f, p f')")
    return arr[:, 0], arr[:, 1], arr[:, 2]


def crum_darboux(ctx: TransformContext, problem: SLProblem, lam: float,
                 f_samples):
    """(x, g, g') from rows (x, f, p f') of a solution at ``lam``."""
    x, f, pf = _fsamples(f_samples)
    y0 = ctx.ground(x)
    if np.any(y0 <= 0):
        raise TransformError("ground function vanishes on the sample grid")
    c = problem.coefficients
    phi = ctx.phi0(x)
    p = np.array([c.p(float(t)) for t in x])
    r = np.array([c.r(float(t)) for t in x])
    g = pf - phi * f
    dg = (ctx.lambda0 - lam) * r * f - phi / p * g
    return x, g, dg


@dataclass(frozen=True)
class RegularSLP:
    """((p~ g')' - (q~ - lam r~) g = 0 with g'(0) = -alpha~ g(0) and
    g'(L) = -beta~ g(L)."""

    p: Callable
    q: Callable
    r: Callable
    alpha: float
    beta: float
    L: float


class _Reciprocal:
    def __init__(self, fn):
        self.fn = fn

    def __call__(self, x):
        return 1.0 / self.fn(x)


class _QTilde:
    def __init__(self, ctx, problem):
        self.ctx = ctx
        self.c = problem.coefficients

    def __call__(self, x):
        c = self.c
        p, q, r = c.p(x), c.q(x), c.r(x)
        phi = float(self.ctx.phi0(x))
        dpr = (derivative(c.p, x, c.L, c.dp) * r
               + p * derivative(c.r, x, c.L, c.dr))
        pr = p * r
        return (2 * self.ctx.lambda0 / p - q / pr + 2 * phi * phi / (p * pr)
                + phi * dpr / (pr * pr))


def build_regular_slp(ctx: TransformContext, problem: SLProblem) -> RegularSLP:
    bc = problem.boundary
    if bc.alpha1 == 0 or bc.beta1 == 0:
        raise RegimeError("the transform needs alpha1 != 0 and beta1 != 0")
    c = problem.coefficients
    L = c.L
    alpha = c.r(0.0) / bc.alpha1 + float(ctx.phi0(0.0)) / c.p(0.0)
    beta = c.r(L) / bc.beta1 + float(ctx.phi0(L)) / c.p(L)
    return RegularSLP(_Reciprocal(c.r), _QTilde(ctx, problem),
                      _Reciprocal(c.p), alpha, beta, L)


def _d1(v, h):
    """Fourth-order first derivative on a uniform grid (one-sided at the
    two points nearest each end)."""
    v = np.asarray(v, float)
    d = np.empty_like(v)
    d[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    d[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
    d[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h)
    d[-1] = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4]
             + 3 * v[-5]) / (12 * h)
    d[-2] = (3 * v[-1] + 10 * v[-2] - 18 * v[-3] + 6 * v[-4] - v[-5]) / (12 * h)
    return d


@dataclass(frozen=True)
class RegularResidual:
    ode: float        # max pointwise relative ODE residual
    left: float       # relative residual of g'(0) + alpha~ g(0)
    right: float      # relative residual of g'(L) + beta~ g(L)

    @property
    def worst(self):
        return max(self.ode, self.left, self.right)


def regular_residual(reg: RegularSLP, lam: float, x, g, dg) -> RegularResidual:
    """Residual of (g, g') in the regular problem at ``lam``.

    p~ g' is differentiated by fourth-order differences on the (uniform)
    grid and compared with (q~ - lam r~) g; the pointwise error is scaled by
    the sup norm of both sides.
    """
    x = np.asarray(x, float)
    h = x[1] - x[0]
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0):
        raise DomainError("regular_residual needs a uniform grid")
    w = np.array([reg.p(float(t)) for t in x]) * dg
    lhs = _d1(w, h)
    rhs = np.array([reg.q(float(t)) - lam * reg.r(float(t)) for t in x]) * g
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs))) or 1.0
    ode = float(np.max(np.abs(lhs - rhs)) / scale)

    def rel(a, b):
        s = abs(a) + abs(b)
        return float(abs(a + b) / s) if s else 0.0
    return RegularResidual(ode, rel(dg[0], reg.alpha * g[0]),
                           rel(dg[-1], reg.beta * g[-1]))


# ----------------------------------------------- Robin eigenvalue solver

def _robin_phase(p, q, r, L, a, lam, settings):
    """Terminal Prüfer angle for the start p g'(0) = -p(0) a g(0)."""
    y0 = (1.0, -p(0.0) * a, math.atan2(1.0, -p(0.0) * a))
    y = terminal_state(p, q, r, L, lam, y0, settings)
    return y[2]


def robin_eigenvalue(p, q, r, L, a, b, m, settings=None, *, guess=1.0):
    """m-th eigenvalue of (p g')' - (q - lam r) g = 0, g'(0) = -a g(0),
    g'(L) = -b g(L), with r > 0 (so the angle at L increases with lam).

    The m-th eigenfunction has m interior zeros and its terminal angle is
    omega + m pi, omega = atan2(1, -p(L) b) in ]0, pi[.
    """
    settings = settings or SolverSettings()
    target = math.atan2(1.0, -p(L) * b) + m * math.pi

    def F(lam):
        return _robin_phase(p, q, r, L, a, lam, settings) - target

    step = max(1.0, abs(guess))
    lo = hi = float(guess)
    flo = fhi = F(lo)
    for _ in range(80):
        if flo < 0:
            break
        hi, fhi = lo, flo
        lo -= step
        step *= 2
        flo = F(lo)
    step = max(1.0, abs(guess))
    for _ in range(80):
        if fhi > 0:
            break
        lo, flo = hi, fhi
        hi += step
        step *= 2
        fhi = F(hi)
    if not (flo < 0 < fhi):
        raise SearchError(f"no bracket for Robin eigenvalue {m}",
                          diagnostics={"lo": lo, "hi": hi})
    return brentq(F, lo, hi, xtol=1e-14, rtol=settings.root_tol * 1e-2)


def regular_eigenvalue(reg: RegularSLP, m: int, settings=None, *, guess=1.0):
    return robin_eigenvalue(reg.p, reg.q, reg.r, reg.L, reg.alpha, reg.beta,
                            m, settings, guess=guess)


def regular_eigenvalues(reg: RegularSLP, m_max: int, settings=None) -> list:
    """The eigenvalues with index 0..m_max, ascending."""
    out = []
    guess = 0.0
    for m in range(m_max + 1):
        lam = regular_eigenvalue(reg, m, settings, guess=guess)
        out.append(lam)
        guess = lam + (lam - out[-2] if m else 1.0)
    return out


def regular_eigenfunction(reg: RegularSLP, lam: float, x, settings=None):
    """(g, g') on the grid ``x`` with g(0) = 1, g'(0) = -alpha~."""
    settings = settings or SolverSettings()
    p0 = reg.p(0.0)
    y0 = (1.0, -p0 * reg.alpha, math.atan2(1.0, -p0 * reg.alpha))
    _, sol, _, _ = integrate_state(reg.p, reg.q, reg.r, reg.L, float(lam), y0,
                                   settings, dense=True)
    x = np.asarray(x, float)
    st = sol(x)
    g, pg = st[0].copy(), st[1].copy()
    at0 = x == 0.0
    g[at0], pg[at0] = 1.0, y0[1]
    dg = pg / np.array([reg.p(float(t)) for t in x])
    return g, dg


# --------------------------------------------------------------- Liouville

@dataclass(frozen=True)
class LiouvilleForm:
    """z'' + (lam - Q(t)) z = 0 on [0, t1], z'(0) = -kappa0 z(0),
    z'(t1) = -kappa1 z(t1), where g = G z and t = int_0^x sqrt(r~/p~)."""

    t1: float
    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    Q: np.ndarray = field(repr=False)
    G: np.ndarray = field(repr=False)
    kappa0: float = 0.0
    kappa1: float = 0.0
    potential: Callable = field(default=None, repr=False, compare=False)


def _fd_derivatives(fn, x, L, h):
    """First and second derivative of fn at x by central differences that
    stay inside [0, L] (one-sided at the ends)."""
    if x - 2 * h < 0:
        v = [fn(x + j * h) for j in range(5)]
        d1 = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
        d2 = (35 * v[0] - 104 * v[1] + 114 * v[2] - 56 * v[3] + 11 * v[4]) / (12 * h * h)
    elif x + 2 * h > L:
        v = [fn(x - j * h) for j in range(5)]
        d1 = -(-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
        d2 = (35 * v[0] - 104 * v[1] + 114 * v[2] - 56 * v[3] + 11 * v[4]) / (12 * h * h)
    else:
        v = [fn(x + j * h) for j in (-2, -1, 0, 1, 2)]
        d1 = (v[0] - 8 * v[1] + 8 * v[3] - v[4]) / (12 * h)
        d2 = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h)
    return d1, d2


def liouville_normalize(reg: RegularSLP, *, n_grid: int = GRID_POINTS,
                        check_tol: float = 1e-4) -> LiouvilleForm:
    """Liouville normal form of a regular problem.

    With m = (p~ r~)^(1/4), G = 1/m and P = sqrt(r~/p~):
    Q = q~/r~ + m_tt / m, kappa = (robin constant + G'/G) / P at each end.
    Derivatives of m in x come from finite differences with two step sizes;
    disagreement above ``check_tol`` raises a ConditioningWarning.
    """
    L = reg.L
    x = np.linspace(0.0, L, n_grid)
    pt = np.array([reg.p(float(s)) for s in x])
    rt = np.array([reg.r(float(s)) for s in x])
    qt = np.array([reg.q(float(s)) for s in x])
    P = np.sqrt(rt / pt)
    t = np.concatenate(([0.0], cumulative_simpson(P, x=x)))
    if not np.all(np.diff(t) > 0):
        raise TransformError("Liouville variable is not increasing")

    def m(s):
        return (reg.p(s) * reg.r(s)) ** 0.25

    def Pf(s):
        return math.sqrt(reg.r(s) / reg.p(s))

    h = 1e-3 * L
    mx = np.empty_like(x)
    mxx = np.empty_like(x)
    Px = np.empty_like(x)
    worst = 0.0
    for i, s in enumerate(x):
        d1, d2 = _fd_derivatives(m, float(s), L, h)
        e1, e2 = _fd_derivatives(m, float(s), L, h / 2)
        scale1 = abs(e1) + 1e-12 * abs(m(float(s))) / L
        scale2 = abs(e2) + 1e-12 * abs(m(float(s))) / L ** 2
        worst = max(worst, abs(d1 - e1) / scale1, abs(d2 - e2) / scale2)
        mx[i], mxx[i] = e1, e2
        Px[i] = _fd_derivatives(Pf, float(s), L, h / 2)[0]
    if worst > check_tol:
        warnings.warn(f"coefficient derivatives are poorly resolved "
                      f"(relative step disagreement {worst:.2e})",
                      ConditioningWarning, stacklevel=2)
    mv = (pt * rt) ** 0.25
    # d/dt = (1/P) d/dx
    m_tt = (mxx / P - mx * Px / P ** 2) / P
    Q = qt / rt + m_tt / mv
    G = 1.0 / mv
    dlogG = -mx / mv
    kappa0 = (reg.alpha + dlogG[0]) / P[0]
    kappa1 = (reg.beta + dlogG[-1]) / P[-1]
    spline = CubicSpline(t, Q)

    def potential(tt):
        return float(spline(tt))
    return LiouvilleForm(float(t[-1]), t, x, Q, G, float(kappa0),
                         float(kappa1), potential)


def liouville_eigenvalues(form: LiouvilleForm, m_max: int, settings=None):
    one = _One()
    out = []
    guess = 0.0
    for m in range(m_max + 1):
        lam = robin_eigenvalue(one, form.potential, one, form.t1, form.kappa0,
                               form.kappa1, m, settings, guess=guess)
        out.append(lam)
        guess = lam + (lam - out[-2] if m else 1.0)
    return out


class _One:
    def __call__(self, x):
        return 1.0


# -------------------------------------------------------------- asymptotics

@dataclass(frozen=True)
class AsymptoticReport:
    ns: tuple
    residuals: tuple
    max_residual: float
    slope: float
    flags: tuple
    t1: float | None = None

    @property
    def flagged(self):
        return bool(self.flags)

    def as_dict(self):
        return {"n": list(self.ns), "residuals": list(self.residuals),
                "max_residual": self.max_residual, "slope": self.slope,
                "flags": list(self.flags), "t1": self.t1}


def asymptotic_check(spec, L: float, n_range, *, slope_tol: float = 0.02,
                     offset: int = 0, t1: float | None = None):
    """rho_n = n |sqrt(lam_n) - (n + offset) pi / L| over ``n_range``.

    ``spec`` is a list of EigenvalueRecord (matched by index label) or a
    plain sequence of values aligned with ``n_range``.  Flags: "trend"
    (least-squares slope of rho_n against n at or above ``slope_tol``),
    "order" (values not increasing with n), "nonfinite".
    """
    ns = list(n_range)
    if spec and hasattr(spec[0], "index"):
        by = {r.index.label: r.lam for r in spec}
        lams = [by[str(n)] for n in ns]
    else:
        lams = [float(v) for v in spec]
        if len(lams) != len(ns):
            raise ValueError("spec and n_range differ in length")
    rho = [n * abs(math.sqrt(lam) - (n + offset) * math.pi / L)
           if lam > 0 else math.inf for n, lam in zip(ns, lams)]
    flags = []
    if not all(math.isfinite(v) for v in rho):
        flags.append("nonfinite")
        slope = math.inf
    else:
        slope = float(np.polyfit(ns, rho, 1)[0]) if len(ns) > 1 else 0.0
        if slope >= slope_tol:
            flags.append("trend")
    if any(b <= a for a, b in zip(lams, lams[1:])):
        flags.append("order")
    return AsymptoticReport(tuple(ns), tuple(rho), float(max(rho)), slope,
                            tuple(flags), t1)


# -------------------------------------------------------------- separation

@dataclass(frozen=True)
class SeparationReport:
    # (left, right, zeros of the other list strictly inside, holds)
    at_least_one: tuple
    exactly_one: tuple
    strict: bool

    @property
    def ok(self):
        return (self.strict and all(r[3] for r in self.at_least_one)
                and all(r[3] for r in self.exactly_one))

    def as_dict(self):
        return {"ok": self.ok, "strict": self.strict,
                "at_least_one": [list(r) for r in self.at_least_one],
                "exactly_one": [list(r) for r in self.exactly_one]}


def separation_check(zeros_a, zeros_b, tol: float = 1e-8) -> SeparationReport:
    """Sturm separation between the zeros of f_n (``zeros_a``) and f_{n+1}
    (``zeros_b``).

    Every interval between consecutive zeros of f_n must contain at least
    one zero of f_{n+1}; every interval between consecutive zeros of
    f_{n+1} must contain exactly one zero of f_n.  ``strict`` fails when a
    zero of one list lies within ``tol`` of a zero of the other.
    """
    a = sorted(float(v) for v in zeros_a)
    b = sorted(float(v) for v in zeros_b)

    def inside(lo, hi, pts):
        return sum(1 for v in pts if lo + tol < v < hi - tol)

    first = tuple((lo, hi, inside(lo, hi, b), inside(lo, hi, b) >= 1)
                  for lo, hi in zip(a, a[1:]))
    second = tuple((lo, hi, inside(lo, hi, a), inside(lo, hi, a) == 1)
                   for lo, hi in zip(b, b[1:]))
    strict = all(abs(u - v) > tol for u in a for v in b)
    return SeparationReport(first, second, strict)


# ------------------------------------------------------------- inverse map

@dataclass(frozen=True)
class InverseReport:
    x: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    pw: np.ndarray = field(repr=False)
    left: float = 0.0     # relative residual of the boundary row at 0
    right: float = 0.0    # relative residual of the boundary row at L
    ode: float = 0.0      # max relative ODE residual


def inverse_map(lam: float, x, g, ctx: TransformContext, problem: SLProblem,
                *, C: float | None = None) -> InverseReport:
    """w = y0 (int_0^x g/(y0 p) ds + C) from a regular eigenpair (lam, g).

    C defaults to g(0) / (alpha1 (lam - lam0)), the value that makes w
    satisfy the left boundary row.  The report carries w, p w' = phi0 w + g
    and the residuals of both boundary rows and of the ODE (fourth-order
    differences of p w' on the uniform grid).
    """
    x = np.asarray(x, float)
    g = np.asarray(g, float)
    bc = problem.boundary
    c = problem.coefficients
    if C is None:
        if math.isclose(lam, ctx.lambda0, rel_tol=1e-14, abs_tol=1e-300):
            raise RegimeError("inverse map undefined at lam = lam0")
        if bc.alpha1 == 0:
            raise RegimeError("inverse map needs alpha1 != 0")
        C = g[0] / (bc.alpha1 * (lam - ctx.lambda0))
    y0 = ctx.ground(x)
    phi = ctx.phi0(x)
    p = np.array([c.p(float(s)) for s in x])
    integral = np.concatenate(([0.0], cumulative_simpson(g / (y0 * p), x=x)))
    w = y0 * (integral + C)
    pw = phi * w + g

    def rel(a, b):
        s = abs(a) + abs(b)
        return float(abs(a - b) / s) if s else 0.0
    left = rel(pw[0], (bc.alpha1 * lam + bc.alpha2) * w[0])
    right = rel(pw[-1], (bc.beta1 * lam - bc.beta2) * w[-1])
    h = x[1] - x[0]
    lhs = _d1(pw, h)
    rhs = np.array([c.q(float(s)) - lam * c.r(float(s)) for s in x]) * w
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs))) or 1.0
    ode = float(np.max(np.abs(lhs - rhs)) / scale)
    return InverseReport(x, w, pw, left, right, ode)


# ------------------------------------------------------------ monotonicity

@dataclass(frozen=True)
class MonotonicityReport:
    lams: tuple
    values: tuple
    violations: int

    @property
    def ok(self):
        return self.violations == 0


def monotonicity_probe(problem: SLProblem, branch: Branch, n_probe: int = 50,
                       settings=None, *, h1_fn=None) -> MonotonicityReport:
    """h1 at ``n_probe`` interior points of a bounded branch.

    ``h1_fn(lam)`` replaces the numeric h1 (e.g. a closed form).  Points are
    equally spaced strictly inside the branch; a violation is any
    non-decreasing adjacent pair.
    """
    if not branch.bounded:
        raise DomainError("monotonicity_probe needs a bounded branch")
    if n_probe < 2:
        raise ValueError("n_probe must be >= 2")
    lams = [branch.lo + (branch.hi - branch.lo) * (i + 1) / (n_probe + 1)
            for i in range(n_probe)]
    fn = h1_fn or (lambda lam: h1(problem, lam, settings))
    vals = [fn(lam) for lam in lams]
    bad = sum(1 for a, b in zip(vals, vals[1:]) if not b < a)
    return MonotonicityReport(tuple(lams), tuple(vals), bad)
