"""Closed-form oracles: confluent hypergeometric series and constant profiles.

The linear viscosity profile mu0(x) = a x + b turns the Hele-Shaw ODE

    (mu0 f')' - k^2 mu0 f + lam k^2 a f = 0

into Kummer's equation  z g'' + (1 - z) g' - alpha g = 0  with

    z = 2 k (a x + b) / a,   f = exp(-z/2) g(z),   alpha = (1 - lam k) / 2.

The parameter alpha does not depend on the slope a: the factor a cancels
between the stretch of the variable and the weight r = k^2 a.  Phi and Psi
below are the regular and logarithmic solutions for b = 1.

For the constant profile mu0 = mu the ODE is f'' = k^2 f, and everything
(h1, the auxiliary eigenvalue, the characteristic equation) is elementary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, getcontext, localcontext

import numpy as np

from .errors import (DomainError, PoleError, RegimeError, SearchError,
                     SeriesError)

__all__ = [
    "SeriesSettings", "LinearProfile", "kummer_phi", "kummer_phi_prime",
    "tricomi_psi", "tricomi_psi_prime", "kummer_log_solution", "digamma", "kummer_residual",
    "linear_profile_solution", "constant_profile_solution",
    "constant_profile_h1", "constant_profile_eta",
    "constant_profile_existence", "constant_profile_spectrum",
    "EXISTENCE_LABELS",
]

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class SeriesSettings:
    """Truncation tolerance, term budget and working decimal digits."""

    tol: float = 1e-25
    max_terms: int = 2000
    digits: int = 50

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.digits < 17:
            raise ValueError("digits must be >= 17")


@dataclass(frozen=True)
class LinearProfile:
    """mu0(x) = a x + b with a, b > 0."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"linear profile needs a > 0 and b > 0, got "
                             f"a={self.a}, b={self.b}")

    def __call__(self, x):
        return self.a * x + self.b


# ---------------------------------------------------------------- digamma

# B_2n / (2n) for n = 1..8
_ASYM = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760,
         1 / 12, -3617 / 8160)


def digamma(x: float) -> float:
    """psi(x) = Gamma'(x)/Gamma(x) for real x off the poles 0, -1, -2, ..."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"digamma needs a finite argument, got {x}")
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"digamma has a pole at {x:g}")
    if x < 0.5:
        # reflection keeps the recurrence away from the poles
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    shift = []
    while x < 12.0:
        shift.append(1.0 / x)
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for c in _ASYM:
        series += c * power
        power *= inv2
    return math.log(x) - 0.5 / x - series - math.fsum(shift)


# ------------------------------------------------------- Kummer and Tricomi
#
# Psi decays like z^(-alpha) while its series terms grow like e^z, so the
# sums are accumulated in decimal arithmetic with ``SeriesSettings.digits``
# significant digits and rounded to float once at the end.

_EULER_DEC = "0.57721566490153286060651209008240243104215933593992"
# B_2n / (2n) for n = 1..10, with the sign of the asymptotic correction
_ASYM_EXACT = ((1, 12), (-1, 120), (1, 252), (-1, 240), (1, 132),
               (-691, 32760), (1, 12), (-3617, 8160), (43867, 14364),
               (-174611, 6600))


def _digamma_dec(x):
    """psi at a Decimal argument (off the poles), in the active context."""
    shift = Decimal(0)
    # the truncated asymptotic series is good to about x^(-22)
    floor = max(40, getcontext().prec + 10)
    while x < floor:
        shift += 1 / x
        x += 1
    inv2 = 1 / (x * x)
    power = inv2
    series = Decimal(0)
    for num, den in _ASYM_EXACT:
        series += Decimal(num) / Decimal(den) * power
        power *= inv2
    return x.ln() - 1 / (2 * x) - series - shift


def _check_psi_args(alpha, z):
    if not (math.isfinite(z) and z > 0):
        raise DomainError(f"Psi(alpha, 1; z) needs z > 0, got {z}")
    if alpha <= 0 and alpha == math.floor(alpha):
        raise DomainError(f"Gamma has a pole at alpha={alpha:g}")


def _series(alpha, z, s, kind, form="standard"):
    """sum_l c_l F_l with c_l = (alpha)_l z^l / (l!)^2.

    ``kind`` selects F_l: "phi" (1), "dphi" (l/z), "psi" (ln z + d_l) or
    "dpsi" ((l (ln z + d_l) + 1)/z), where d_l = psi(alpha+l) - 2 psi(1+l)
    for the standard form and psi(alpha+l) for the displayed one.  The
    "frobenius" form uses d_l = psi(alpha+l) - psi(alpha) - 2 H_l, a finite
    sum of reciprocals that stays defined when alpha is a non-positive
    integer.
    """
    s = s or SeriesSettings()
    if not (math.isfinite(alpha) and math.isfinite(z)):
        raise DomainError("alpha and z must be finite")
    log_kind = kind in ("psi", "dpsi")
    if form not in ("standard", "displayed", "frobenius"):
        raise ValueError(f"unknown form {form!r}")
    hump = max(abs(alpha), abs(z)) + 2
    with localcontext() as ctx:
        ctx.prec = s.digits
        A = Decimal(alpha)
        Z = Decimal(z)
        tol = Decimal(s.tol)
        c = Decimal(1)
        total = Decimal(0)
        if log_kind:
            lz = Z.ln()
            if form == "frobenius":
                psi_a = Decimal(0)
                psi_1 = Decimal(0)
            else:
                psi_a = _digamma_dec(A)
                psi_1 = -Decimal(_EULER_DEC)
        # past l = n at alpha = -n, c_l d_l tends to c~_l, the product that
        # skips the vanishing factor (alpha + n); c_l itself is zero there
        tail = False
        for l in range(s.max_terms):
            if kind == "phi":
                t = c
            elif kind == "dphi":
                t = c * l / Z
            elif tail:
                t = c if kind == "psi" else c * l / Z
            else:
                d = psi_a if form == "displayed" else psi_a - 2 * psi_1
                if kind == "psi":
                    t = c * (lz + d)
                else:
                    t = c * (l * (lz + d) + 1) / Z
            total += t
            if l > hump and abs(t) <= tol * abs(total):
                return float(total)
            if A + l == 0:
                if not (log_kind and form == "frobenius"):
                    return float(total)
                tail = True
                c = c * Z / ((l + 1) ** 2)
                continue
            c = c * (A + l) * Z / ((l + 1) ** 2)
            if log_kind and not tail:
                psi_a += 1 / (A + l)
                psi_1 += Decimal(1) / (l + 1)
    raise SeriesError(f"series did not converge in {s.max_terms} terms "
                      f"(alpha={alpha}, z={z})")


def kummer_phi(alpha: float, z: float, s: SeriesSettings | None = None):
    """Phi(alpha, 1; z) = sum_{l>=0} (alpha)_l z^l / (l!)^2."""
    if z == 0:
        return 1.0
    return _series(alpha, z, s, "phi")


def kummer_phi_prime(alpha: float, z: float, s: SeriesSettings | None = None):
    """d/dz Phi(alpha, 1; z)."""
    if z == 0:
        return float(alpha)
    return _series(alpha, z, s, "dphi")


def _psi_prefactor(alpha, form):
    sign = -1.0 if form == "standard" else 1.0
    return sign / math.gamma(alpha)


def tricomi_psi(alpha: float, z: float, s: SeriesSettings | None = None, *,
                form: str = "standard"):
    """Logarithmic solution Psi(alpha, 1; z) of Kummer's equation.

    ``form="standard"`` is Tricomi's function

        Psi = -(1/Gamma(alpha)) sum (alpha)_l z^l/(l!)^2
              * (ln z + psi(alpha + l) - 2 psi(1 + l)).

    ``form="displayed"`` drops the ``-2 psi(1 + l)`` term and the leading
    sign.  That variant does not solve Kummer's equation; it is kept so the
    residual gate can demonstrate the difference.
    """
    _check_psi_args(alpha, z)
    return _psi_prefactor(alpha, form) * _series(alpha, z, s, "psi", form)


def tricomi_psi_prime(alpha: float, z: float, s: SeriesSettings | None = None,
                      *, form: str = "standard"):
    """d/dz Psi(alpha, 1; z), same ``form`` switch as :func:`tricomi_psi`."""
    _check_psi_args(alpha, z)
    return _psi_prefactor(alpha, form) * _series(alpha, z, s, "dpsi", form)


def kummer_log_solution(alpha: float, z: float,
                        s: SeriesSettings | None = None):
    """Y = Phi ln z + sum c_l (psi(alpha+l) - psi(alpha) - 2 H_l) z^l.

    For alpha off the Gamma poles, Y = -Gamma(alpha) Psi - (psi(alpha) +
    2 gamma) Phi; unlike Psi it stays a second solution when alpha is a
    non-positive integer.  Returns (Y, dY/dz).
    """
    if not (math.isfinite(z) and z > 0):
        raise DomainError(f"the log solution needs z > 0, got {z}")
    return (_series(alpha, z, s, "psi", "frobenius"),
            _series(alpha, z, s, "dpsi", "frobenius"))


def kummer_residual(fn, dfn, alpha, zs, h=1e-3):
    """Max |z g'' + (1 - z) g' - alpha g| / scale over ``zs``.

    ``dfn`` is the analytic first derivative; g'' comes from a fourth-order
    central difference of it with step ``h * min(1, z)`` (Psi has a log
    singularity at 0).  The scale is the largest of the three terms.
    """
    out = 0.0
    for z in zs:
        hz = h * min(1.0, z)
        d = [dfn(z + j * hz) for j in (-2, -1, 1, 2)]
        d2 = (d[0] - 8 * d[1] + 8 * d[2] - d[3]) / (12 * hz)
        g, d1 = fn(z), dfn(z)
        terms = (z * d2, (1 - z) * d1, -alpha * g)
        scale = max(abs(t) for t in terms) or 1.0
        out = max(out, abs(sum(terms)) / scale)
    return out


# ------------------------------------------------------ linear viscosity

def _initial_data(bc):
    if hasattr(bc, "alpha1"):
        return bc.alpha1, bc.alpha2
    a1, a2 = bc[0], bc[1]
    return a1, a2


def linear_profile_solution(profile: LinearProfile, k: float, lam: float, x,
                            bc, s: SeriesSettings | None = None, *,
                            second: str = "auto"):
    """(f, f') of the linear-viscosity ODE via Kummer functions.

    The two constants are fixed by f(0) = 1 and mu0(0) f'(0) = alpha1 lam +
    alpha2, with ``bc`` a BoundaryParams or an (alpha1, alpha2, ...) tuple.
    ``x`` may be a scalar or an array; f' is the derivative in x.

    ``second`` picks the log solution paired with Phi: "standard" (Tricomi
    Psi), "displayed" (the variant without the -2 psi(1+l) term),
    "frobenius" (:func:`kummer_log_solution`) or "auto", which uses Psi
    except at the Gamma poles alpha = 0, -1, -2, ...
    """
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")
    a1, a2 = _initial_data(bc)
    a, b = profile.a, profile.b
    alpha = 0.5 * (1.0 - lam * k)
    dzdx = 2.0 * k
    if second == "auto":
        pole = alpha <= 0 and alpha == math.floor(alpha)
        second = "frobenius" if pole else "standard"
    if second not in ("standard", "displayed", "frobenius"):
        raise ValueError(f"unknown second solution {second!r}")

    def basis(z):
        e = math.exp(-0.5 * z)
        ph = kummer_phi(alpha, z, s)
        dph = kummer_phi_prime(alpha, z, s)
        if second == "frobenius":
            ps, dps = kummer_log_solution(alpha, z, s)
        else:
            ps = tricomi_psi(alpha, z, s, form=second)
            dps = tricomi_psi_prime(alpha, z, s, form=second)
        return (e * ph, e * ps, dzdx * e * (dph - 0.5 * ph),
                dzdx * e * (dps - 0.5 * ps))

    u0, v0, du0, dv0 = basis(2.0 * k * b / a)
    slope0 = (a1 * lam + a2) / b
    det = u0 * dv0 - v0 * du0
    if det == 0:
        raise SeriesError("Kummer basis is degenerate at x=0")
    c1 = (dv0 - v0 * slope0) / det
    c2 = (u0 * slope0 - du0) / det

    xs = np.atleast_1d(np.asarray(x, dtype=float))
    f = np.empty_like(xs)
    df = np.empty_like(xs)
    for i, xi in enumerate(xs):
        if xi == 0.0:
            f[i], df[i] = 1.0, slope0
            continue
        u, v, du, dv = basis(2.0 * k * (a * xi + b) / a)
        f[i] = c1 * u + c2 * v
        df[i] = c1 * du + c2 * dv
    if np.ndim(x) == 0:
        return float(f[0]), float(df[0])
    return f, df


# -------------------------------------------------------- constant profile

def constant_profile_solution(mu, k, lam, x, alpha1, alpha2):
    """mu cosh(kx) + ((alpha1 lam + alpha2)/k) sinh(kx) and its x-derivative.

    This is mu times the solution normalized by f(0) = 1 under the weighted
    condition mu f'(0) = (alpha1 lam + alpha2) f(0).
    """
    A = alpha1 * lam + alpha2
    x = np.asarray(x, dtype=float)
    f = mu * np.cosh(k * x) + A / k * np.sinh(k * x)
    df = mu * k * np.sinh(k * x) + A * np.cosh(k * x)
    return f, df


def constant_profile_h1(mu, k, L, bc, lam):
    """p(L) f'(L) / (lam f(L)) for mu0 = mu, in closed form.

    Equals mu times (k/lam) [k mu sinh(kL) + A cosh(kL)] /
    [k mu cosh(kL) + A sinh(kL)] with A = alpha1 lam + alpha2.
    """
    if lam == 0:
        raise PoleError("h1 has a pole at lambda=0", which="lambda=0")
    a1, a2 = _initial_data(bc)
    A = a1 * lam + a2
    ch, sh = math.cosh(k * L), math.sinh(k * L)
    den = k * mu * ch + A * sh
    num = k * mu * sh + A * ch
    if den == 0 or abs(den) <= 1e-15 * (abs(k * mu * ch) + abs(A * sh)):
        raise PoleError(f"f(L; {lam}) vanishes", which="f(L)=0")
    return mu * (k / lam) * num / den


def constant_profile_eta(mu, k, L, alpha1, alpha2):
    """The single auxiliary eigenvalue; its sign is opposite to alpha1."""
    if alpha1 == 0:
        raise RegimeError("no auxiliary eigenvalue when alpha1 = 0")
    return -(mu * k / math.tanh(k * L) + alpha2) / alpha1


EXISTENCE_LABELS = ("-1", "-0", "0", "1")

# (sign alpha1, sign beta1) -> existence of lambda_-1, lambda_-0, lambda_0,
# lambda_1 for the constant profile
_EXISTENCE = {
    (-1, 1): (False, False, True, True),
    (-1, 0): (False, False, True, False),
    (-1, -1): (False, True, True, False),
    (1, 1): (False, True, True, False),
    (1, 0): (False, True, False, False),
    (1, -1): (True, True, False, False),
    (0, 1): (False, False, True, False),
    (0, 0): (False, False, False, False),
    (0, -1): (False, True, False, False),
}


def _sign(v):
    return (v > 0) - (v < 0)


def constant_profile_existence(bc) -> dict:
    """Which of lambda_-1, lambda_-0, lambda_0, lambda_1 exist.

    Depends on the signs of alpha1 and beta1 only.  No entry has a zero
    eigenvalue, so a wave with vanishing growth rate never appears.
    """
    if hasattr(bc, "alpha1"):
        a1, b1 = bc.alpha1, bc.beta1
    else:
        a1, b1 = bc
    flags = _EXISTENCE[(_sign(a1), _sign(b1))]
    return dict(zip(EXISTENCE_LABELS, flags))


def constant_profile_spectrum(mu, k, L, bc) -> dict:
    """Eigenvalues of the constant-profile problem, keyed by label.

    Clearing denominators in mu f'(L) = (beta1 lam - beta2) f(L) gives a
    polynomial of degree at most two in lam; each real root is labelled by
    the branch it falls on (relative to 0 and the auxiliary eigenvalue).
    """
    a1, a2, b1, b2 = bc.alpha1, bc.alpha2, bc.beta1, bc.beta2
    ch, sh = math.cosh(k * L), math.sinh(k * L)
    # mu f'(L) = mu^2 k sh + mu A ch,  f(L) = mu ch + A sh / k,  A = a1 l + a2
    # G(l) = mu^2 k sh + mu (a1 l + a2) ch
    #        - (b1 l - b2)(mu ch + (a1 l + a2) sh / k)
    c2 = -b1 * a1 * sh / k
    c1 = mu * a1 * ch - b1 * (mu * ch + a2 * sh / k) + b2 * a1 * sh / k
    c0 = mu * mu * k * sh + mu * a2 * ch + b2 * (mu * ch + a2 * sh / k)
    if c2 != 0:
        roots = np.roots([c2, c1, c0])
        roots = [float(r.real) for r in roots if abs(r.imag) <= 1e-12 * abs(r)]
    elif c1 != 0:
        roots = [-c0 / c1]
    else:
        roots = []
    eta = constant_profile_eta(mu, k, L, a1, a2) if a1 != 0 else None
    out = {}
    for lam in sorted(roots):
        if lam < 0:
            label = "-1" if eta is not None and eta < 0 and lam < eta else "-0"
        else:
            label = "1" if eta is not None and eta > 0 and lam > eta else "0"
        if label in out:
            raise SearchError(f"two roots on branch {label}",
                              diagnostics={"lambda": lam})
        out[label] = lam
    return out

