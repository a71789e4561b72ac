"""Problem data model and the initial value shoot.

The problem is

    (p f')' - (q - lam r) f = 0                 on ]0, L[
    p(0) f'(0) = (alpha1 lam + alpha2) f(0)
    p(L) f'(L) = (beta1 lam - beta2) f(L)

and every solver in the package works from the solution of the initial
value problem f(0) = 1, p(0) f'(0) = alpha1 lam + alpha2.  The state carried
by the integrator is ``(f, p f', theta)`` where ``theta`` is the Prüfer
angle defined by f = rho sin(theta), p f' = rho cos(theta).  theta increases
through every multiple of pi exactly at the zeros of f, which makes zero
counting independent of how finely the solution is sampled.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import DOP853, OdeSolution, ode
from scipy.optimize import brentq

from .errors import (DomainError, EvaluationError, IntegrationError,
                     ValidationError)

__all__ = [
    "ConstantFunction", "LinearFunction", "CoefficientSet", "BoundaryParams",
    "SLProblem", "ShotResult", "SolverSettings", "make_problem", "shoot",
    "eigenfunction_samples", "count_zeros", "derivative", "integrate_state",
    "terminal_state",
    "VALIDATION_POINTS",
]

VALIDATION_POINTS = 257
# theta within this distance of a multiple of pi at x=L counts as a
# terminal zero, not an interior one
_PHASE_SLACK = 1e-9


class ConstantFunction:
    """Picklable constant coefficient ``x -> value``."""

    def __init__(self, value):
        self.value = float(value)

    def __call__(self, x):
        return self.value

    def derivative(self):
        return ConstantFunction(0.0)

    def __repr__(self):
        return f"ConstantFunction({self.value!r})"


class LinearFunction:
    """Picklable affine coefficient ``x -> slope*x + intercept``."""

    def __init__(self, slope, intercept):
        self.slope = float(slope)
        self.intercept = float(intercept)

    def __call__(self, x):
        return self.slope * x + self.intercept

    def derivative(self):
        return ConstantFunction(self.slope)

    def __repr__(self):
        return f"LinearFunction({self.slope!r}, {self.intercept!r})"


def derivative(fn, x, L, dfn=None):
    """First derivative of a coefficient at ``x`` in [0, L].

    Uses ``dfn`` when given, else ``fn.derivative()`` when the callable
    provides one, else a second-order difference that stays inside [0, L].
    """
    if dfn is not None:
        return dfn(x)
    if hasattr(fn, "derivative"):
        return fn.derivative()(x)
    h = 1e-5 * L
    if x - h < 0.0:
        return (-3.0 * fn(x) + 4.0 * fn(x + h) - fn(x + 2 * h)) / (2 * h)
    if x + h > L:
        return (3.0 * fn(x) - 4.0 * fn(x - h) + fn(x - 2 * h)) / (2 * h)
    return (fn(x + h) - fn(x - h)) / (2 * h)


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficients p (stiffness), q (potential), r (weight) on [0, L].

    ``dp``/``dr`` are optional exact derivatives of p and r; the transforms
    module needs them and falls back to finite differences otherwise.
    """

    p: Callable[[float], float]
    q: Callable[[float], float]
    r: Callable[[float], float]
    L: float
    increasing_p: bool = False
    dp: Callable[[float], float] | None = None
    dr: Callable[[float], float] | None = None


@dataclass(frozen=True)
class BoundaryParams:
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v!r}",
                                      function=name)
        if not self.alpha2 > 0:
            raise ValidationError(f"alpha2 must be positive, got {self.alpha2}",
                                  function="alpha2")
        if not self.beta2 > 0:
            raise ValidationError(f"beta2 must be positive, got {self.beta2}",
                                  function="beta2")

    def as_tuple(self):
        return (self.alpha1, self.alpha2, self.beta1, self.beta2)


@dataclass(frozen=True)
class SLProblem:
    coefficients: CoefficientSet
    boundary: BoundaryParams

    @property
    def L(self):
        return self.coefficients.L


@dataclass(frozen=True)
class SolverSettings:
    """Integration and root-refinement tolerances."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    root_tol: float = 1e-10
    max_steps: int = 100_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "root_tol"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"{name} must be positive, got {v!r}",
                                      function=name)
        if int(self.max_steps) < 1:
            raise ValidationError("max_steps must be >= 1", function="max_steps")


@dataclass(frozen=True)
class ShotResult:
    """Terminal data and zero information of the normalized IVP solution."""

    lam: float
    f_end: float
    pfprime_end: float
    zero_count: int
    zeros: tuple = ()
    phase_end: float = 0.0
    est_error: float = 0.0
    n_steps: int = field(default=0, compare=False)


def make_problem(coeffs: CoefficientSet, bc: BoundaryParams, *,
                 require_positive="pqr") -> SLProblem:
    """Validate coefficients on a uniform grid and bundle them with ``bc``.

    ``require_positive`` lists the coefficients that must be strictly
    positive.  The constant-viscosity Hele-Shaw profile has r == 0 and is
    built with ``require_positive="pq"``.
    """
    L = coeffs.L
    if not (isinstance(L, (int, float)) and math.isfinite(L) and L > 0):
        raise DomainError(f"domain length L must be positive, got {L!r}")
    xs = np.linspace(0.0, L, VALIDATION_POINTS)
    previous = None
    for x in xs:
        for name in "pqr":
            v = getattr(coeffs, name)(float(x))
            if not math.isfinite(v):
                raise ValidationError(f"{name}({x:.6g}) is not finite",
                                      function=name, x=float(x))
            if name in require_positive and not v > 0:
                raise ValidationError(
                    f"{name}({x:.6g}) = {v:.6g} is not positive",
                    function=name, x=float(x))
        if coeffs.increasing_p:
            pv = coeffs.p(float(x))
            if previous is not None and pv < previous:
                raise ValidationError(
                    f"p is flagged increasing but decreases at x={x:.6g}",
                    function="p", x=float(x))
            previous = pv
    return SLProblem(coeffs, bc)


def _initial_state(problem, lam):
    bc = problem.boundary
    g0 = bc.alpha1 * lam + bc.alpha2
    return (1.0, g0, math.atan2(1.0, g0))


def integrate_state(p, q, r, L, lam, y0, settings, dense=False):
    """Integrate ``(f, p f', theta)`` from 0 to L.

    Low-level entry point shared with the transforms module, where the
    coefficients need not satisfy the positivity assumptions.  Returns
    ``(y_end, solution_or_None, est_error, n_steps)``.
    """
    sin, cos = math.sin, math.cos

    def rhs(x, y):
        px = p(x)
        c = q(x) - lam * r(x)
        s = sin(y[2])
        co = cos(y[2])
        return np.array((y[1] / px, c * y[0], co * co / px - c * s * s))

    solver = DOP853(rhs, 0.0, np.asarray(y0, dtype=float), L,
                    rtol=settings.rel_tol, atol=settings.abs_tol)
    ts = [0.0]
    interpolants = []
    est = 0.0
    n = 0
    while solver.status == "running":
        if n >= settings.max_steps:
            raise IntegrationError(
                f"step budget of {settings.max_steps} exhausted at "
                f"x={solver.t:.6g} for lambda={lam!r}", reach=solver.t)
        msg = solver.step()
        n += 1
        if solver.status == "failed":
            raise IntegrationError(f"integrator failed at x={solver.t:.6g}: "
                                   f"{msg}", reach=solver.t)
        y = solver.y
        if not np.all(np.isfinite(y)):
            raise EvaluationError(
                f"non-finite state at x={solver.t:.6g} for lambda={lam!r}")
        est += settings.abs_tol + settings.rel_tol * abs(y[0])
        if dense:
            ts.append(solver.t)
            interpolants.append(solver.dense_output())
    sol = OdeSolution(ts, interpolants) if dense else None
    return solver.y.copy(), sol, est, n


# the Fortran dop853 wrapper keeps module-level state and is not re-entrant
_FORTRAN_LOCK = threading.Lock()


def terminal_state(p, q, r, L, lam, y0, settings):
    """``(f, p f', theta)`` at x = L without dense output.

    Same Dormand-Prince 8(5,3) scheme as :func:`integrate_state`, run through
    the compiled driver; the eigenvalue searches spend nearly all their time
    here.
    """
    sin, cos = math.sin, math.cos

    def rhs(x, y):
        px = p(x)
        c = q(x) - lam * r(x)
        s = sin(y[2])
        co = cos(y[2])
        return [y[1] / px, c * y[0], co * co / px - c * s * s]

    with _FORTRAN_LOCK:
        solver = ode(rhs).set_integrator(
            "dop853", rtol=settings.rel_tol, atol=settings.abs_tol,
            nsteps=int(settings.max_steps))
        solver.set_initial_value(np.asarray(y0, dtype=float), 0.0)
        y = solver.integrate(L)
        ok = solver.successful()
        reach = solver.t
    if not ok:
        raise IntegrationError(f"integration stopped at x={reach:.6g} for "
                               f"lambda={lam!r}", reach=reach)
    if not np.all(np.isfinite(y)):
        raise EvaluationError(f"non-finite terminal state for lambda={lam!r}")
    return np.array(y, dtype=float)


def _interior_count(theta_end):
    return max(0, math.ceil(theta_end / math.pi - _PHASE_SLACK) - 1)


def _locate_zeros(sol, L, count, root_tol):
    """Zeros of f from the dense solution, one per crossing theta = j*pi."""
    def theta(x):
        return sol(x)[2]

    crossings = []
    for j in range(1, count + 1):
        target = j * math.pi
        crossings.append(brentq(lambda x: theta(x) - target, 0.0, L,
                                xtol=root_tol * 1e-2, rtol=4 * np.finfo(float).eps))

    def fval(x):
        return sol(x)[0]

    zeros = []
    for j, xc in enumerate(crossings):
        lo = 0.5 * (crossings[j - 1] + xc) if j > 0 else 0.5 * xc
        hi = 0.5 * (xc + crossings[j + 1]) if j + 1 < count else 0.5 * (xc + L)
        flo, fhi = fval(lo), fval(hi)
        if flo * fhi < 0:
            z = brentq(fval, lo, hi, xtol=root_tol * 1e-2,
                       rtol=4 * np.finfo(float).eps)
        else:
            z = xc
        zeros.append(z)
    return tuple(zeros)


def shoot(problem: SLProblem, lam: float,
          settings: SolverSettings | None = None, *, locate=True) -> ShotResult:
    """Solve the normalized IVP at ``lam`` and return terminal data.

    With ``locate=False`` only the zero count is produced (no dense output,
    no zero locations, and ``est_error`` is a single-step bound), which is
    what the eigenvalue searches use.
    """
    settings = settings or SolverSettings()
    lam = float(lam)
    if not math.isfinite(lam):
        raise DomainError(f"lambda must be finite, got {lam!r}")
    c = problem.coefficients
    y0 = _initial_state(problem, lam)
    if locate:
        y, sol, est, n = integrate_state(c.p, c.q, c.r, c.L, lam, y0,
                                         settings, dense=True)
    else:
        y = terminal_state(c.p, c.q, c.r, c.L, lam, y0, settings)
        sol, est, n = None, settings.rel_tol * abs(y[0]) + settings.abs_tol, 0
    count = _interior_count(y[2])
    zeros = _locate_zeros(sol, c.L, count, settings.root_tol) if locate else ()
    return ShotResult(lam=lam, f_end=float(y[0]), pfprime_end=float(y[1]),
                      zero_count=count, zeros=zeros, phase_end=float(y[2]),
                      est_error=est, n_steps=n)


def eigenfunction_samples(problem: SLProblem, lam: float, grid,
                          settings: SolverSettings | None = None) -> np.ndarray:
    """Rows ``(x, f, p f')`` of the normalized solution on a sorted grid."""
    settings = settings or SolverSettings()
    grid = np.asarray(grid, dtype=float)
    L = problem.L
    if grid.ndim != 1 or np.any(np.diff(grid) < 0):
        raise DomainError("grid must be a sorted one-dimensional sequence")
    if grid.size and (grid[0] < 0 or grid[-1] > L):
        raise DomainError(f"grid must lie in [0, {L}]")
    c = problem.coefficients
    y0 = _initial_state(problem, lam)
    _, sol, _, _ = integrate_state(c.p, c.q, c.r, L, float(lam), y0, settings,
                                   dense=True)
    out = np.empty((grid.size, 3))
    out[:, 0] = grid
    if grid.size:
        states = sol(grid)
        out[:, 1] = states[0]
        out[:, 2] = states[1]
        # the interpolant reproduces the initial state only to rounding
        at0 = grid == 0.0
        out[at0, 1] = y0[0]
        out[at0, 2] = y0[1]
    return out


def count_zeros(problem: SLProblem, lam: float,
                settings: SolverSettings | None = None) -> int:
    """Number of zeros of f(., lam) in ]0, L[, read off the Prüfer angle."""
    return shoot(problem, lam, settings, locate=False).zero_count
