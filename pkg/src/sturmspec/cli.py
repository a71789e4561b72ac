"""Command line front end: JSON configs in, CSV or JSON out.

    sturmspec <cmd> --config path.json [--nmax N] [--tol X]
              [--format csv|json] [--out path] [--oracle] [--k K]

Commands: aux-spectrum, spectrum, scan, eigenfunction, verify, table.
A config describes either one problem::

    {"L": 1, "coefficients": {"kind": "constant", "p": 1, "q": 1, "r": 1},
     "boundary": {"alpha1": 1, "alpha2": 1, "beta1": -1, "beta2": 1}}

or a Hele-Shaw family::

    {"heleshaw": {"mu1": 1, "mu2": 2, "S": 1, "T": 1, "U": 1, "L": 1,
                  "J1": 0.1, "J2": 0.1, "profile": "linear",
                  "k_values": [1, 2, 3]}}

Coefficient kinds: constant, expression (strings in x), linear-viscosity
(k, mu0_slope, mu0_intercept) and tabulated (x, p, q, r arrays, cubic
spline).  An optional "settings" object overrides solver tolerances.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from . import heleshaw, specfun, spectrum, transforms
from .core import (BoundaryParams, CoefficientSet, ConstantFunction,
                   LinearFunction, SLProblem, SolverSettings,
                   eigenfunction_samples, make_problem, shoot)
from .errors import ConfigError, SturmSpecError
from .expr import ExprSyntaxError, parse_expression

__all__ = ["ProblemConfig", "HeleShawConfig", "parse_config", "serialize",
           "run_command", "main", "COMMANDS", "TabulatedFunction"]

COMMANDS = ("aux-spectrum", "spectrum", "scan", "eigenfunction", "verify",
            "table")
_SETTINGS_KEYS = ("rel_tol", "abs_tol", "root_tol", "max_steps")
_BOUNDARY_KEYS = ("alpha1", "alpha2", "beta1", "beta2")
ASYMPTOTIC_NMAX = 20
_HS_KEYS = ("mu1", "mu2", "S", "T", "U", "L", "J1", "J2", "mu", "profile",
            "k_values")


class TabulatedFunction:
    """Cubic spline through tabulated samples; picklable."""

    def __init__(self, xs, ys):
        self.xs = tuple(float(v) for v in xs)
        self.ys = tuple(float(v) for v in ys)
        self._spline = CubicSpline(self.xs, self.ys)

    def __call__(self, x):
        return float(self._spline(x))

    def derivative(self):
        d = self._spline.derivative()
        return lambda x: float(d(x))

    def __getstate__(self):
        return {"xs": self.xs, "ys": self.ys}

    def __setstate__(self, state):
        self.__init__(state["xs"], state["ys"])


@dataclass(frozen=True)
class ProblemConfig:
    L: float
    coefficients: dict
    boundary: dict
    settings: dict = field(default_factory=dict)

    def solver_settings(self):
        return SolverSettings(**self.settings)

    def to_problem(self) -> SLProblem:
        c = self.coefficients
        kind = c["kind"]
        dp = dr = None
        if kind == "constant":
            p, q, r = (ConstantFunction(c[n]) for n in "pqr")
        elif kind == "expression":
            p, q, r = (parse_expression(c[n]) for n in "pqr")
        elif kind == "linear-viscosity":
            k2 = c["k"] ** 2
            a, b = c["mu0_slope"], c["mu0_intercept"]
            p, q, r = (LinearFunction(a, b), LinearFunction(k2 * a, k2 * b),
                       ConstantFunction(k2 * a))
            dp, dr = ConstantFunction(a), ConstantFunction(0.0)
        else:
            p, q, r = (TabulatedFunction(c["x"], c[n]) for n in "pqr")
        coeffs = CoefficientSet(p, q, r, self.L, dp=dp, dr=dr)
        return make_problem(coeffs, BoundaryParams(**self.boundary))

    def linear_profile(self):
        c = self.coefficients
        if c["kind"] != "linear-viscosity":
            return None
        return specfun.LinearProfile(c["mu0_slope"], c["mu0_intercept"]), c["k"]


@dataclass(frozen=True)
class HeleShawConfig:
    params: heleshaw.HeleShawParams
    k_values: tuple
    settings: dict = field(default_factory=dict)

    def solver_settings(self):
        return SolverSettings(**self.settings)


# ------------------------------------------------------------------ parsing

def _line_of(text, key):
    """1-based line of the first occurrence of ``"key"`` in the text."""
    idx = text.find(f'"{key}"')
    return text.count("\n", 0, idx) + 1 if idx >= 0 else None


def _num(obj, key, path, text, *, positive=False, integer=False):
    if key not in obj:
        raise ConfigError(f"missing field {key!r}", path=f"{path}.{key}",
                          line=_line_of(text, path.rsplit(".", 1)[-1]))
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key!r} must be a number, got {type(v).__name__}",
                          path=f"{path}.{key}", line=_line_of(text, key))
    if integer and int(v) != v:
        raise ConfigError(f"{key!r} must be an integer", path=f"{path}.{key}",
                          line=_line_of(text, key))
    if not math.isfinite(v) or (positive and not v > 0):
        raise ConfigError(f"{key!r} must be {'positive' if positive else 'finite'}"
                          f", got {v!r}", path=f"{path}.{key}",
                          line=_line_of(text, key))
    return int(v) if integer else float(v)


def _check_keys(obj, allowed, path, text):
    if not isinstance(obj, dict):
        raise ConfigError("expected an object", path=path,
                          line=_line_of(text, path.rsplit(".", 1)[-1]))
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r}", path=f"{path}.{key}",
                              line=_line_of(text, key))


def _parse_settings(obj, text):
    if obj is None:
        return {}
    _check_keys(obj, _SETTINGS_KEYS, "$.settings", text)
    out = {}
    for key in obj:
        out[key] = _num(obj, key, "$.settings", text, positive=True,
                        integer=key == "max_steps")
    try:
        SolverSettings(**out)
    except SturmSpecError as exc:
        raise ConfigError(str(exc), path="$.settings") from exc
    return out


def _parse_coefficients(obj, L, text):
    path = "$.coefficients"
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("coefficients need a 'kind'", path=path,
                          line=_line_of(text, "coefficients"))
    kind = obj["kind"]
    allowed = {"constant": ("p", "q", "r"), "expression": ("p", "q", "r"),
               "linear-viscosity": ("k", "mu0_slope", "mu0_intercept"),
               "tabulated": ("x", "p", "q", "r")}
    if kind not in allowed:
        raise ConfigError(f"unknown coefficient kind {kind!r}",
                          path=f"{path}.kind", line=_line_of(text, "kind"))
    _check_keys(obj, ("kind",) + allowed[kind], path, text)
    out = {"kind": kind}
    if kind in ("constant", "linear-viscosity"):
        for key in allowed[kind]:
            out[key] = _num(obj, key, path, text,
                            positive=key in ("k", "mu0_slope"))
    elif kind == "expression":
        for key in "pqr":
            if not isinstance(obj.get(key), str):
                raise ConfigError(f"{key!r} must be an expression string",
                                  path=f"{path}.{key}", line=_line_of(text, key))
            try:
                parse_expression(obj[key])
            except ExprSyntaxError as exc:
                raise ConfigError(str(exc), path=f"{path}.{key}",
                                  line=_line_of(text, key)) from exc
            out[key] = obj[key]
    else:
        n = None
        for key in ("x", "p", "q", "r"):
            arr = obj.get(key)
            if (not isinstance(arr, list) or len(arr) < 4 or not all(
                    isinstance(v, (int, float)) and not isinstance(v, bool)
                    and math.isfinite(v) for v in arr)):
                raise ConfigError(f"{key!r} must be a list of at least four "
                                  "numbers", path=f"{path}.{key}",
                                  line=_line_of(text, key))
            if n is not None and len(arr) != n:
                raise ConfigError("tabulated arrays differ in length",
                                  path=f"{path}.{key}", line=_line_of(text, key))
            n = len(arr)
            out[key] = [float(v) for v in arr]
        xs = out["x"]
        if any(b <= a for a, b in zip(xs, xs[1:])) or xs[0] > 0 or xs[-1] < L:
            raise ConfigError("tabulated x must increase and cover [0, L]",
                              path=f"{path}.x", line=_line_of(text, "x"))
    return out


def parse_config(text: str):
    """ProblemConfig or HeleShawConfig from JSON text, validated."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", path="$",
                          line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise ConfigError("top level must be an object", path="$", line=1)
    settings = _parse_settings(data.get("settings"), text)
    if "heleshaw" in data:
        _check_keys(data, ("heleshaw", "settings"), "$", text)
        return _parse_heleshaw(data["heleshaw"], settings, text)
    _check_keys(data, ("L", "coefficients", "boundary", "settings"), "$", text)
    L = _num(data, "L", "$", text, positive=True)
    if "coefficients" not in data:
        raise ConfigError("missing field 'coefficients'", path="$.coefficients")
    coeffs = _parse_coefficients(data["coefficients"], L, text)
    b = data.get("boundary")
    if b is None:
        raise ConfigError("missing field 'boundary'", path="$.boundary")
    _check_keys(b, _BOUNDARY_KEYS, "$.boundary", text)
    boundary = {k: _num(b, k, "$.boundary", text) for k in _BOUNDARY_KEYS}
    cfg = ProblemConfig(L, coeffs, boundary, settings)
    try:
        cfg.to_problem()
    except SturmSpecError as exc:
        fn = getattr(exc, "function", None)
        path = (f"$.coefficients.{fn}" if fn in ("p", "q", "r") else
                f"$.boundary.{fn}" if fn in _BOUNDARY_KEYS else "$")
        raise ConfigError(str(exc), path=path,
                          line=_line_of(text, fn) if fn else None) from exc
    return cfg


def _parse_heleshaw(obj, settings, text):
    path = "$.heleshaw"
    _check_keys(obj, _HS_KEYS, path, text)
    profile = obj.get("profile", "linear")
    if profile not in ("linear", "constant"):
        raise ConfigError(f"unknown profile {profile!r}",
                          path=f"{path}.profile", line=_line_of(text, "profile"))
    vals = {k: _num(obj, k, path, text, positive=True)
            for k in ("mu1", "mu2", "S", "T", "U", "L")}
    if profile == "linear":
        for k in ("J1", "J2"):
            vals[k] = _num(obj, k, path, text)
    else:
        vals["mu"] = _num(obj, "mu", path, text, positive=True)
    ks = obj.get("k_values", [])
    if not isinstance(ks, list):
        raise ConfigError("'k_values' must be a list", path=f"{path}.k_values",
                          line=_line_of(text, "k_values"))
    kv = tuple(_num({"k": v}, "k", f"{path}.k_values", text, positive=True)
               for v in ks)
    try:
        hp = heleshaw.HeleShawParams(profile=profile, **vals)
    except ValueError as exc:
        raise ConfigError(str(exc), path=path,
                          line=_line_of(text, "heleshaw")) from exc
    return HeleShawConfig(hp, kv, settings)


def serialize(cfg) -> str:
    """Canonical JSON for a parsed config; parse(serialize(c)) == c."""
    if isinstance(cfg, HeleShawConfig):
        hp = asdict(cfg.params)
        if hp["profile"] == "linear":
            hp.pop("mu")
        else:
            hp.pop("J1")
            hp.pop("J2")
        hp["k_values"] = list(cfg.k_values)
        data = {"heleshaw": hp}
    else:
        data = {"L": cfg.L, "coefficients": cfg.coefficients,
                "boundary": cfg.boundary}
    if cfg.settings:
        data["settings"] = cfg.settings
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# ----------------------------------------------------------------- output

def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        return format(v, ".6g")
    return str(v)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _finite(obj):
    """Replace infinite floats by "inf"/"-inf" strings (strict JSON)."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _finite(obj.tolist())
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    return obj


def _json(obj):
    return json.dumps(_finite(obj), indent=2, default=_jsonable,
                      allow_nan=False) + "\n"


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"not serializable: {type(v).__name__}")


# --------------------------------------------------------------- commands

def _problem_of(cfg, flags):
    """SLProblem and an optional (LinearProfile, k) oracle description."""
    if isinstance(cfg, ProblemConfig):
        return cfg.to_problem(), cfg.linear_profile()
    hp = cfg.params
    k = flags.get("k") or (cfg.k_values[0] if cfg.k_values else None)
    if k is None:
        raise ConfigError("this command needs --k or a non-empty k_values",
                          path="$.heleshaw.k_values")
    prob = heleshaw.build_slp(hp, k)
    return prob, (specfun.LinearProfile(hp.slope, hp.intercept), k)


def _oracle_diff(oracle, problem, lam, settings):
    """Relative gap between shoot and the Kummer solution at x = L."""
    prof, k = oracle
    tight = SolverSettings(rel_tol=1e-13, abs_tol=1e-15)
    s = shoot(problem, lam, tight, locate=False)
    f, _ = specfun.linear_profile_solution(prof, k, lam, problem.L,
                                           problem.boundary)
    return abs(f - s.f_end) / max(abs(s.f_end), abs(s.pfprime_end) / prof(problem.L))


def _cmd_aux(cfg, flags, settings):
    prob, _ = _problem_of(cfg, flags)
    aux = spectrum.aux_spectrum(prob, flags["nmax"], settings)
    rows = []
    if aux.eta_neg0 is not None:
        rows.append(("-0", aux.eta_neg0, 0, aux.eta_neg0_residual))
    rows += [(str(n), e, c, r) for n, (e, c, r) in
             enumerate(zip(aux.etas, aux.zero_counts, aux.residuals))]
    header = ["index", "eta", "zero_count", "residual"]
    if flags["format"] == "json":
        return _json([dict(zip(header, r)) for r in rows])
    return _csv(header, rows)


def _cmd_spectrum(cfg, flags, settings):
    prob, oracle = _problem_of(cfg, flags)
    recs = spectrum.full_spectrum(prob, flags["nmax"], settings)
    out = [r.as_dict() for r in recs]
    if flags["oracle"] and oracle is not None:
        for d, r in zip(out, recs):
            d["oracle_rel_diff"] = _oracle_diff(oracle, prob, r.lam, settings)
    if flags["format"] == "json":
        return _json(out)
    header = ["index", "lambda", "zero_count", "branch_lo", "branch_hi",
              "char_residual"]
    if flags["oracle"] and oracle is not None:
        header.append("oracle_rel_diff")
    rows = [[d["index"], d["lambda"], d["zero_count"], d["branch"][0],
             d["branch"][1], d["char_residual"]]
            + ([d["oracle_rel_diff"]] if "oracle_rel_diff" in d else [])
            for d in out]
    return _csv(header, rows)


def _need_heleshaw(cfg, cmd):
    if not isinstance(cfg, HeleShawConfig):
        raise ConfigError(f"'{cmd}' needs a heleshaw config", path="$.heleshaw")


def _cmd_scan(cfg, flags, settings):
    _need_heleshaw(cfg, "scan")
    rows = heleshaw.scan(cfg.params, cfg.k_values, flags["nmax"], settings)
    if flags["format"] == "json":
        return _json([r.as_dict() for r in rows])
    labels = ["-1", "-0"] + [str(n) for n in range(flags["nmax"] + 1)]
    header = (["k", "alpha1", "beta1", "case"]
              + [f"lambda_{lab}" for lab in labels] + ["sigma_0", "error"])
    out = []
    for r in rows:
        out.append([r.k, r.alpha1, r.beta1, r.case.value if r.case else None]
                   + [r.eigenvalues.get(lab) for lab in labels]
                   + [r.sigma0, r.error or ""])
    return _csv(header, out)


def _cmd_table(cfg, flags, settings):
    _need_heleshaw(cfg, "table")
    rows = heleshaw.scan(cfg.params, cfg.k_values, 2, settings)
    header = ["k", "alpha1", "beta1"] + [f"lambda_{lab}"
                                         for lab in heleshaw.TABLE_LABELS]
    table = [[r.k, r.alpha1, r.beta1] + [r.eigenvalues.get(lab)
                                         for lab in heleshaw.TABLE_LABELS]
             for r in rows]
    if flags["oracle"] and cfg.params.profile == "linear":
        header.append("oracle_max_rel_diff")
        for row, r in zip(table, rows):
            prob = heleshaw.build_slp(cfg.params, r.k)
            orc = (specfun.LinearProfile(cfg.params.slope,
                                         cfg.params.intercept), r.k)
            diffs = [_oracle_diff(orc, prob, v, settings)
                     for v in r.eigenvalues.values() if v is not None]
            row.append(max(diffs) if diffs else None)
    if flags["format"] == "json":
        return _json([dict(zip(header, row)) for row in table])
    return _csv(header, table)


def _cmd_eigenfunction(cfg, flags, settings):
    prob, _ = _problem_of(cfg, flags)
    label = flags.get("index") or "0"
    idx = spectrum.BranchIndex.from_label(label)
    n_max = max(idx.rank, 0)
    recs = spectrum.full_spectrum(prob, n_max, settings)
    match = [r for r in recs if r.index == idx]
    if not match:
        raise SturmSpecError(f"no eigenvalue with index {label} in this regime")
    lam = match[0].lam
    grid = np.linspace(0.0, prob.L, flags.get("points") or 101)
    samples = eigenfunction_samples(prob, lam, grid, settings)
    if flags["format"] == "json":
        return _json({"index": label, "lambda": lam,
                      "samples": samples.tolist()})
    return _csv(["x", "f", "pfprime"], samples.tolist())


def verify_report(prob: SLProblem, n_max: int, settings=None) -> dict:
    """Transform-based checks on one problem, as a JSON-ready dict."""
    settings = settings or SolverSettings()
    n_max = max(n_max, 2)
    aux = spectrum.aux_spectrum(prob, n_max, settings)
    recs = spectrum.full_spectrum(prob, n_max, settings, aux=aux)
    lam = {r.index.label: r.lam for r in recs}
    rep = {}
    inter = spectrum.verify_interlacing(recs, aux)
    rep["interlacing"] = {"pass": inter.ok, **inter.as_dict()}

    z1 = shoot(prob, lam["1"], settings).zeros
    z2 = shoot(prob, lam["2"], settings).zeros
    sep = transforms.separation_check(z1, z2)
    rep["separation"] = {"pass": sep.ok, **sep.as_dict()}

    bc = prob.boundary
    if bc.alpha1 == 0 or bc.beta1 == 0:
        rep["crum_darboux"] = {"pass": None,
                               "skipped": "needs alpha1 != 0 and beta1 != 0"}
        t1 = None
    else:
        ctx = transforms.make_context(prob, lam["0"], settings)
        reg = transforms.build_regular_slp(ctx, prob)
        cd = {}
        ok = True
        for lab in ("1", "2"):
            fs = eigenfunction_samples(prob, lam[lab], ctx.x, settings)
            x, g, dg = transforms.crum_darboux(ctx, prob, lam[lab], fs)
            res = transforms.regular_residual(reg, lam[lab], x, g, dg)
            cd[f"lambda_{lab}"] = {"ode": res.ode, "left": res.left,
                                   "right": res.right}
            ok = ok and res.worst < 1e-6
        rep["crum_darboux"] = {"pass": ok, "tolerance": 1e-6, **cd}
        t1 = transforms.liouville_normalize(reg).t1

    L = prob.L
    n_asym = max(n_max, ASYMPTOTIC_NMAX)
    if n_asym > n_max:
        recs_asym = spectrum.full_spectrum(prob, n_asym, settings)
    else:
        recs_asym = recs
    ns = range(5, n_asym + 1)
    literal = transforms.asymptotic_check(recs_asym, L, ns)
    length = L if t1 is None else t1
    shifted = transforms.asymptotic_check(recs_asym, length, ns, offset=1,
                                          t1=t1)
    rep["asymptotic"] = {
        "L": L, "t1": t1,
        # the constant in the law is the Liouville length; it equals L only
        # for special coefficient sets
        "asserted": t1 is None or math.isclose(t1, L, rel_tol=1e-6),
        "index_n_against_n_pi": literal.as_dict(),
        "index_n_against_n_plus_1_pi": shifted.as_dict(),
        "pass": not shifted.flagged,
    }

    mono = {}
    ok = True
    for br in spectrum.branches(aux, 1):
        if br.bounded:
            m = transforms.monotonicity_probe(prob, br, 50, settings)
            mono[br.index.label] = m.violations
            ok = ok and m.ok
    rep["monotonicity"] = {"pass": ok, "violations": mono}
    checked = [v["pass"] for v in rep.values() if v["pass"] is not None]
    rep["pass"] = all(checked)
    return rep


def _cmd_verify(cfg, flags, settings):
    prob, _ = _problem_of(cfg, flags)
    rep = verify_report(prob, flags["nmax"], settings)
    if flags["format"] == "csv":
        rows = [(name, sec["pass"]) for name, sec in rep.items()
                if isinstance(sec, dict)]
        return _csv(["section", "pass"], rows), rep["pass"]
    return _json(rep), rep["pass"]


_DISPATCH = {"aux-spectrum": _cmd_aux, "spectrum": _cmd_spectrum,
             "scan": _cmd_scan, "table": _cmd_table,
             "eigenfunction": _cmd_eigenfunction, "verify": _cmd_verify}


def run_command(cmd: str, config, flags: dict | None = None):
    """Run ``cmd`` on a parsed config; returns (exit_status, text).

    Status 0 on success, 1 when ``verify`` reports a failed section.
    Solver and configuration errors propagate as exceptions; :func:`main`
    maps them to exit codes.
    """
    if cmd not in _DISPATCH:
        raise ValueError(f"unknown command {cmd!r}")
    f = {"nmax": 2, "format": "csv", "oracle": False, "tol": None}
    f.update(flags or {})
    settings = config.solver_settings()
    if f["tol"] is not None:
        tol = float(f["tol"])
        settings = SolverSettings(rel_tol=tol, abs_tol=tol * 1e-2,
                                  root_tol=tol, max_steps=settings.max_steps)
    out = _DISPATCH[cmd](config, f, settings)
    if isinstance(out, tuple):
        text, ok = out
        return (0 if ok else 1), text
    return 0, out


def _build_parser():
    ap = argparse.ArgumentParser(prog="sturmspec",
                                 description="Eigenvalues of Sturm-Liouville "
                                 "problems with the spectral parameter in "
                                 "both boundary conditions.")
    ap.add_argument("cmd", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON config file")
    ap.add_argument("--nmax", type=int, default=2)
    ap.add_argument("--tol", type=float, default=None)
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--out", default=None, help="output file (default stdout)")
    ap.add_argument("--oracle", action="store_true",
                    help="cross-check against the closed-form oracles")
    ap.add_argument("--k", type=float, default=None,
                    help="wave number for single-problem commands on a "
                    "heleshaw config")
    ap.add_argument("--index", default=None,
                    help="eigenvalue label for 'eigenfunction' (-1, -0, 0, ...)")
    ap.add_argument("--points", type=int, default=101)
    ap.add_argument("--error-json", action="store_true",
                    help="print failures as a JSON object on stderr")
    return ap


def _report_error(args, code, exc):
    if args.error_json:
        payload = {"error": type(exc).__name__, "message": str(exc),
                   "exit_status": code}
        for attr in ("path", "line", "reach", "which", "diagnostics"):
            if getattr(exc, attr, None) is not None:
                payload[attr] = getattr(exc, attr)
        sys.stderr.write(json.dumps(payload, default=_jsonable) + "\n")
    else:
        sys.stderr.write(f"sturmspec: {type(exc).__name__}: {exc}\n")
    return code


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.nmax < 0:
        sys.stderr.write("sturmspec: --nmax must be >= 0\n")
        return 2
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
    except OSError as exc:
        return _report_error(args, 2, exc)
    except ConfigError as exc:
        return _report_error(args, 2, exc)
    flags = {"nmax": args.nmax, "tol": args.tol, "format": args.format,
             "oracle": args.oracle, "k": args.k, "index": args.index,
             "points": args.points}
    try:
        status, text = run_command(args.cmd, cfg, flags)
    except ConfigError as exc:
        return _report_error(args, 2, exc)
    except SturmSpecError as exc:
        return _report_error(args, 3, exc)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
