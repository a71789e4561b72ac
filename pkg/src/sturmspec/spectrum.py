"""Auxiliary spectrum, branches and eigenvalue location.

Eigenvalues are the roots of the pole-free characteristic function

    G(lam) = p(L) f'(L; lam) - (beta1 lam - beta2) f(L; lam),

which equals ``lam * f(L; lam) * (h1(lam) - h2(lam))`` away from the poles
of h1.  The auxiliary eigenvalues eta (where f(L; eta) = 0) split the real
line into branches; each bounded branch carries exactly one root of G and
G keeps a fixed, alternating sign at the branch endpoints, so every search
below is a bracketed one.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .core import BoundaryParams, SLProblem, SolverSettings, shoot
from .errors import PoleError, SearchError

__all__ = [
    "BranchIndex", "Branch", "AuxSpectrum", "EigenvalueRecord", "RegimeCase",
    "InterlacingReport", "aux_spectrum", "branches", "h1", "h2",
    "characteristic", "find_in_branch", "full_spectrum", "classify_case",
    "verify_interlacing", "NEG_BEYOND", "NEG_ZERO",
]

_EXPANSIONS = 60
_FLOOR = -1e12


@dataclass(frozen=True, order=True)
class BranchIndex:
    """Eigenvalue / branch label: -1, -0 or a non-negative integer.

    ``rank`` orders the labels along the real line (-1 < -0 < 0 < 1 ...);
    the paper's "-0" has no integer representation, hence the explicit tag.
    """

    rank: int

    @classmethod
    def nonneg(cls, n):
        if n < 0:
            raise ValueError("non-negative index expected")
        return cls(n)

    @property
    def label(self):
        if self.rank == -2:
            return "-1"
        if self.rank == -1:
            return "-0"
        return str(self.rank)

    @property
    def zeros(self):
        """|l|: the number of interior zeros of the eigenfunction."""
        if self.rank == -2:
            return 1
        if self.rank == -1:
            return 0
        return self.rank

    @classmethod
    def from_label(cls, label):
        label = str(label).strip()
        if label == "-1":
            return NEG_BEYOND
        if label == "-0":
            return NEG_ZERO
        return cls.nonneg(int(label))

    def __str__(self):
        return self.label


NEG_BEYOND = BranchIndex(-2)
NEG_ZERO = BranchIndex(-1)


@dataclass(frozen=True)
class Branch:
    index: BranchIndex
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty branch ]{self.lo}, {self.hi}[")

    @property
    def bounded(self):
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def __contains__(self, lam):
        return self.lo < lam < self.hi


@dataclass(frozen=True)
class AuxSpectrum:
    """Eigenvalues of the problem with f(L) = 0 replacing the right condition."""

    eta_neg0: float | None
    etas: tuple
    zero_counts: tuple
    residuals: tuple = field(default=(), compare=False)
    eta_neg0_residual: float | None = field(default=None, compare=False)


@dataclass(frozen=True)
class EigenvalueRecord:
    lam: float
    index: BranchIndex
    zero_count: int
    branch: Branch
    char_residual: float

    def as_dict(self):
        return {
            "lambda": self.lam,
            "index": self.index.label,
            "zero_count": self.zero_count,
            "branch": [self.branch.lo, self.branch.hi],
            "char_residual": self.char_residual,
        }


class RegimeCase(enum.Enum):
    I = "I"
    II = "II"
    III = "III"


def classify_case(bc: BoundaryParams) -> RegimeCase:
    a, b = bc.alpha1, bc.beta1
    if a < 0 and b > 0:
        return RegimeCase.I
    if a > 0 and b < 0:
        return RegimeCase.III
    return RegimeCase.II


def h2(bc: BoundaryParams, lam: float) -> float:
    if lam == 0:
        raise PoleError("h2 has a pole at lambda=0", which="lambda=0")
    return bc.beta1 - bc.beta2 / lam


def h1(problem: SLProblem, lam: float, settings: SolverSettings | None = None):
    """p(L) f'(L; lam) / (lam f(L; lam))."""
    if lam == 0:
        raise PoleError("h1 has a pole at lambda=0", which="lambda=0")
    s = shoot(problem, lam, settings, locate=False)
    if s.f_end == 0 or abs(s.f_end) <= 1e-14 * abs(s.pfprime_end):
        raise PoleError(f"f(L; {lam}) vanishes: lambda is an auxiliary "
                        "eigenvalue", which="f(L)=0")
    return s.pfprime_end / (lam * s.f_end)


class _ShotCache(dict):
    """Terminal shots keyed by lambda, shared across one spectrum run."""

    def get_shot(self, problem, lam, settings):
        lam = float(lam)
        s = self.get(lam)
        if s is None:
            s = self[lam] = shoot(problem, lam, settings, locate=False)
        return s


def _shot(problem, lam, settings, cache):
    if cache is None:
        return shoot(problem, lam, settings, locate=False)
    return cache.get_shot(problem, lam, settings)


def _char(problem, lam, settings, cache=None):
    s = _shot(problem, lam, settings, cache)
    bc = problem.boundary
    tail = (bc.beta1 * lam - bc.beta2) * s.f_end
    return s.pfprime_end - tail, abs(s.pfprime_end) + abs(tail), s


def characteristic(problem: SLProblem, lam: float,
                   settings: SolverSettings | None = None) -> float:
    """G(lam); smooth in lam, zero exactly at the eigenvalues."""
    return _char(problem, lam, settings)[0]


def _phase(problem, lam, settings, cache=None):
    return _shot(problem, lam, settings, cache).phase_end


def _solve_eta(problem, target, lo, hi, settings, cache):
    def fn(lam):
        return _phase(problem, lam, settings, cache) - target
    return brentq(fn, lo, hi, xtol=1e-14, rtol=settings.root_tol * 1e-2)


def aux_spectrum(problem: SLProblem, n_max: int,
                 settings: SolverSettings | None = None, *,
                 _cache=None) -> AuxSpectrum:
    """Auxiliary eigenvalues eta_-0 (when alpha1 > 0) and eta_0..eta_n_max.

    eta_l is the unique lambda where the terminal Prüfer angle equals
    (|l| + 1) pi, i.e. f(L) = 0 with |l| interior zeros.  Brackets come from
    the zero count (the angle sits below/above the target) and are expanded
    geometrically.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    settings = settings or SolverSettings()
    cache = _cache if _cache is not None else _ShotCache()
    bc = problem.boundary

    eta_neg0 = None
    neg_res = None
    if bc.alpha1 > 0:
        # lam <= -alpha2/alpha1 makes f'(0) <= 0; keep doubling until f
        # picks up its single zero
        width = max(1.0, 2 * bc.alpha2 / bc.alpha1)
        lo = -width
        for _ in range(_EXPANSIONS):
            if _phase(problem, lo, settings, cache) > math.pi:
                break
            width *= 2
            lo = -width
            if lo < _FLOOR:
                break
        else:
            lo = None
        if lo is None or lo < _FLOOR or _phase(problem, lo, settings, cache) <= math.pi:
            raise SearchError("no bracket for eta_-0",
                              diagnostics={"last_lambda": lo})
        eta_neg0 = _solve_eta(problem, math.pi, lo, 0.0, settings, cache)
        s = _shot(problem, eta_neg0, settings, cache)
        neg_res = abs(s.f_end) / math.hypot(s.f_end, s.pfprime_end)

    etas, counts, residuals = [], [], []
    lo = 0.0
    step = 1.0
    for n in range(n_max + 1):
        target = (n + 1) * math.pi
        hi = lo + step
        for _ in range(_EXPANSIONS):
            if _phase(problem, hi, settings, cache) > target:
                break
            step *= 2
            lo_candidate = hi
            hi = hi + step
            lo = lo_candidate
        else:
            raise SearchError(f"no bracket for eta_{n}",
                              diagnostics={"last_lambda": hi})
        eta = _solve_eta(problem, target, lo, hi, settings, cache)
        s = _shot(problem, eta, settings, cache)
        # f(L) = 0 puts the angle on a multiple of pi, where the ceiling rule
        # is ill-conditioned; the endpoint is not an interior zero
        count = round(s.phase_end / math.pi) - 1
        if count != n:
            raise SearchError(f"eta_{n} certificate failed: {count} "
                              f"interior zeros", diagnostics={"eta": eta})
        etas.append(eta)
        counts.append(count)
        residuals.append(abs(s.f_end) / math.hypot(s.f_end, s.pfprime_end))
        lo = eta
        step = max(step, eta - (etas[-2] if len(etas) > 1 else 0.0))
    return AuxSpectrum(eta_neg0, tuple(etas), tuple(counts), tuple(residuals),
                       neg_res)


def branches(aux: AuxSpectrum, n_max: int) -> list:
    """B_-1, B_-0, B_0, ..., B_n_max; B_-1 only when eta_-0 exists."""
    if n_max + 1 > len(aux.etas):
        raise ValueError(f"aux spectrum holds {len(aux.etas)} etas, "
                         f"n_max={n_max} needs {n_max + 1}")
    out = []
    if aux.eta_neg0 is not None:
        out.append(Branch(NEG_BEYOND, -math.inf, aux.eta_neg0))
        out.append(Branch(NEG_ZERO, aux.eta_neg0, 0.0))
    else:
        out.append(Branch(NEG_ZERO, -math.inf, 0.0))
    out.append(Branch(BranchIndex(0), 0.0, aux.etas[0]))
    for n in range(1, n_max + 1):
        out.append(Branch(BranchIndex(n), aux.etas[n - 1], aux.etas[n]))
    return out


def _record(problem, branch, lam, settings, cache):
    g, scale, s = _char(problem, lam, settings, cache)
    if s.zero_count != branch.index.zeros:
        raise SearchError(
            f"eigenvalue {lam} on branch {branch.index} has {s.zero_count} "
            f"zeros, expected {branch.index.zeros}",
            diagnostics={"lambda": lam, "zero_count": s.zero_count})
    return EigenvalueRecord(lam, branch.index, s.zero_count, branch,
                            abs(g) / scale if scale else abs(g))


def _root(problem, lo, hi, settings, cache):
    return brentq(lambda lam: _char(problem, lam, settings, cache)[0], lo, hi,
                  xtol=1e-14, rtol=settings.root_tol * 1e-2)


def find_in_branch(problem: SLProblem, branch: Branch,
                   settings: SolverSettings | None = None, *, _cache=None):
    """The eigenvalue on ``branch``, or None where the regime excludes one.

    Unbounded branches (B_-1, or B_-0 when there is no eta_-0) hold a root
    iff beta1 < 0: h1 decays like |lam|^(-1/2) while h2 tends to beta1.
    """
    settings = settings or SolverSettings()
    cache = _cache if _cache is not None else _ShotCache()
    bc = problem.boundary

    def G(lam):
        return _char(problem, lam, settings, cache)[0]

    if branch.bounded:
        glo = G(branch.lo)
        ghi = G(branch.hi)
        if glo == 0:
            return _record(problem, branch, branch.lo, settings, cache)
        if glo * ghi > 0:
            raise SearchError(
                f"characteristic keeps its sign on branch {branch.index}",
                diagnostics={"lo": branch.lo, "hi": branch.hi,
                             "G_lo": glo, "G_hi": ghi})
        lam = _root(problem, branch.lo, branch.hi, settings, cache)
        return _record(problem, branch, lam, settings, cache)

    if not bc.beta1 < 0:
        return None
    hi = branch.hi
    ghi = G(hi)
    width = max(1.0, abs(hi))
    lo = hi - width
    for _ in range(_EXPANSIONS):
        glo = G(lo)
        if glo * ghi <= 0:
            break
        hi, ghi = lo, glo
        width *= 2
        lo = branch.hi - width
        if lo < _FLOOR:
            raise SearchError(f"bracket expansion on {branch.index} passed "
                              f"{_FLOOR:g}", diagnostics={"lo": lo})
    else:
        raise SearchError(f"bracket expansion on {branch.index} exhausted",
                          diagnostics={"lo": lo})
    lam = _root(problem, lo, hi, settings, cache)
    return _record(problem, branch, lam, settings, cache)


def full_spectrum(problem: SLProblem, n_max: int,
                  settings: SolverSettings | None = None, *, aux=None) -> list:
    """Every eigenvalue with index in {-1, -0, 0, ..., n_max}, ordered."""
    settings = settings or SolverSettings()
    cache = _ShotCache()
    aux = aux or aux_spectrum(problem, n_max, settings, _cache=cache)
    out = []
    for br in branches(aux, n_max):
        rec = find_in_branch(problem, br, settings, _cache=cache)
        if rec is not None:
            out.append(rec)
    lams = [r.lam for r in out]
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise SearchError("eigenvalues are not strictly ordered",
                          diagnostics={"lambdas": lams})
    return out


@dataclass(frozen=True)
class InterlacingReport:
    """Adjacent pairs of the chain lam_-1 < eta_-0 < lam_-0 < 0 < lam_0 < ..."""

    pairs: tuple  # (left_label, right_label, holds, margin)

    @property
    def ok(self):
        return all(p[2] for p in self.pairs)

    def as_dict(self):
        return {"ok": self.ok,
                "pairs": [{"left": a, "right": b, "holds": h, "margin": m}
                          for a, b, h, m in self.pairs]}


def verify_interlacing(spec, aux: AuxSpectrum) -> InterlacingReport:
    """Check the bounding chain between eigenvalues and auxiliary values.

    ``spec`` is a sequence of EigenvalueRecord in the order they are claimed
    to appear; the chain is assembled from that order, so a swapped input
    produces a reported violation.
    """
    chain = []
    recs = list(spec)
    by_rank = {}
    for r in recs:
        by_rank.setdefault(r.index.rank, r)
    if NEG_BEYOND.rank in by_rank:
        chain.append(("lambda_-1", by_rank[NEG_BEYOND.rank].lam))
    if aux.eta_neg0 is not None:
        chain.append(("eta_-0", aux.eta_neg0))
    if NEG_ZERO.rank in by_rank:
        chain.append(("lambda_-0", by_rank[NEG_ZERO.rank].lam))
    chain.append(("0", 0.0))
    n = 0
    while True:
        added = False
        if n in by_rank:
            chain.append((f"lambda_{n}", by_rank[n].lam))
            added = True
        if n < len(aux.etas) and (n in by_rank or n + 1 in by_rank):
            chain.append((f"eta_{n}", aux.etas[n]))
            added = True
        if not added:
            break
        n += 1
    # records may also be given in a (wrong) order that differs from their
    # labels: compare the given sequence as well
    seq = [(f"lambda_{r.index.label}", r.lam) for r in recs]
    pairs = []
    for (la, va), (lb, vb) in zip(chain, chain[1:]):
        pairs.append((la, lb, bool(va < vb), float(vb - va)))
    for (la, va), (lb, vb) in zip(seq, seq[1:]):
        pairs.append((la, lb, bool(va < vb), float(vb - va)))
    return InterlacingReport(tuple(pairs))
