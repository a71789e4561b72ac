"""Acceptance criteria 1-11.  Each test prints one PASS/FAIL line (also
collected into the "acceptance criteria" section of the pytest summary)
and asserts the criterion with its pinned tolerance."""
import math
import random
import time

import numpy as np
import pytest

from sturmspec import (BoundaryParams, CoefficientSet, ConstantFunction,
                       SolverSettings, aux_spectrum, branches, count_zeros,
                       eigenfunction_samples, full_spectrum, h1, make_problem,
                       shoot, verify_interlacing)
from sturmspec import heleshaw, specfun, transforms

from _acceptance_log import LINES as ACCEPTANCE_LINES
from conftest import constant_problem

# reference values, transcribed independently of the package presets:
# k -> (alpha1, beta1, lam_-1, lam_-0, lam_0, lam_1, lam_2)
REFERENCE_T1 = {
    1: (0.9, -0.9, -6.46019, -3.27535, 14.4968, 68.1856, 158.906),
    2: (15.6, -15.6, -0.51684, -0.29893, 6.11938, 19.6737, 42.3671),
    3: (80.1, -80.1), 4: (254.4, -254.4),
    5: (622.5, -622.5, -0.0307741, -0.0175412, 2.55349, 4.75521, 8.38692),
    6: (1292.4, -1292.4), 7: (2396.1, -2396.1), 8: (4089.6, -4089.6),
    9: (6552.9, -6552.9, -0.0052976, -0.00294567, 2.0233, 2.75939, 3.87815),
}
REFERENCE_T2 = {
    1: (0.0, 0.0, None, None, 4.96968, 26.7236, 81.7087),
    2: (1.2, -1.2, -10.5131, -6.14168, 4.38068, 16.2001, 38.3316),
    3: (7.2, -7.2), 4: (24.0, -24.0), 5: (60.0, -60.0),
    6: (126.0, -126.0, -0.186085, -0.104951, 2.31824, 3.85155, 6.36463),
    7: (235.2, -235.2), 8: (403.2, -403.2), 9: (648.0, -648.0),
}
LABELS = ("-1", "-0", "0", "1", "2")
REL_TOL = 1e-2
REL_TARGET = 1e-3


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def table1_rows():
    t0 = time.perf_counter()
    rows = heleshaw.scan(heleshaw.TABLE1, range(1, 10), 2)
    return {r.k: r for r in rows}, time.perf_counter() - t0


@pytest.fixture(scope="module")
def table2_rows():
    rows = heleshaw.scan(heleshaw.TABLE2, range(1, 10), 2)
    return {r.k: r for r in rows}


def _table_gaps(rows, reference, ks):
    worst = 0.0
    missing = []
    for k in ks:
        row = rows[float(k)]
        for lab, ref in zip(LABELS, reference[k][2:]):
            got = row.eigenvalues.get(lab)
            if ref is None:
                if got is not None:
                    missing.append(f"k={k} {lab} should be absent")
                continue
            if got is None:
                missing.append(f"k={k} {lab} missing")
                continue
            worst = max(worst, abs(got - ref) / abs(ref))
    return worst, missing


def test_criterion_01_table1(table1_rows):
    rows, elapsed = table1_rows
    worst, missing = _table_gaps(rows, REFERENCE_T1, (1, 2, 5, 9))
    ok = worst < REL_TOL and not missing and elapsed < 60.0
    record(1, ok, f"max rel gap {worst:.2e} (tol {REL_TOL:g}, target "
                  f"{REL_TARGET:g} {'met' if worst < REL_TARGET else 'missed'})"
                  f", 9-row table {elapsed:.1f}s (limit 60s) {missing or ''}")
    assert ok


def test_criterion_02_table2(table2_rows):
    worst, missing = _table_gaps(table2_rows, REFERENCE_T2, (1, 2, 6))
    row1 = table2_rows[1.0]
    dashes = row1.eigenvalues["-1"] is None and row1.eigenvalues["-0"] is None
    ok = worst < REL_TOL and not missing and dashes
    record(2, ok, f"max rel gap {worst:.2e} (tol {REL_TOL:g}), k=1 dashes "
                  f"{dashes} {missing or ''}")
    assert ok


def _sig6(v):
    return float(f"{v:.6g}")


def test_criterion_03_coefficient_columns():
    bad = []
    for hp, pub in ((heleshaw.TABLE1, REFERENCE_T1),
                    (heleshaw.TABLE2, REFERENCE_T2)):
        for k in range(1, 10):
            bc = heleshaw.physics_coefficients(hp, k)
            if (_sig6(bc.alpha1), _sig6(bc.beta1)) != pub[k][:2]:
                bad.append((hp.U, k, bc.alpha1, bc.beta1))
    record(3, not bad, f"18 rows compared at 6 significant digits, "
                       f"{len(bad)} mismatches {bad or ''}")
    assert not bad


def test_criterion_04_oscillation(table1_rows, table2_rows, settings):
    failures = []
    n = 0
    for hp, rows, ks in ((heleshaw.TABLE1, table1_rows[0], (1, 2, 5, 9)),
                         (heleshaw.TABLE2, table2_rows, (1, 2, 6))):
        for k in ks:
            prob = heleshaw.build_slp(hp, k)
            for lab, lam in rows[float(k)].eigenvalues.items():
                if lam is None:
                    continue
                n += 1
                zeros = count_zeros(prob, lam, settings)
                if zeros != abs(int(lab)):
                    failures.append((hp.U, k, lab, zeros))
    record(4, not failures, f"{n} eigenvalues, {len(failures)} zero-count "
                            f"failures {failures or ''}")
    assert not failures


def test_criterion_05_interlacing(settings):
    failed = []
    for k in range(1, 10):
        prob = heleshaw.build_slp(heleshaw.TABLE1, k)
        bc = prob.boundary
        assert bc.alpha1 > 0 and bc.beta1 < 0
        aux = aux_spectrum(prob, 2, settings)
        recs = full_spectrum(prob, 2, settings, aux=aux)
        if not verify_interlacing(recs, aux).ok:
            failed.append(k)
    record(5, not failed, f"9 Table-1 rows, chain fails for k={failed or 'none'}")
    assert not failed


def test_criterion_06_separation(table1_k1, settings):
    recs = full_spectrum(table1_k1, 2, settings)
    lam = {r.index.label: r.lam for r in recs}
    z1 = shoot(table1_k1, lam["1"], settings).zeros
    z2 = shoot(table1_k1, lam["2"], settings).zeros
    rep = transforms.separation_check(z1, z2, tol=1e-8)
    record(6, rep.ok, f"zeros f1={np.round(z1, 6).tolist()} "
                      f"f2={np.round(z2, 6).tolist()}")
    assert rep.ok


def test_criterion_07_asymptotics(settings):
    prob = constant_problem(1.0, 1.0, 1.0, 1.0, (1.0, 1.0, -1.0, 1.0))
    t0 = time.perf_counter()
    recs = full_spectrum(prob, 40, settings)
    elapsed = time.perf_counter() - t0
    ns = range(5, 41)
    literal = transforms.asymptotic_check(recs, 1.0, ns, slope_tol=0.02)
    shifted = transforms.asymptotic_check(recs, 1.0, ns, slope_tol=0.02,
                                          offset=1)
    ok = (not literal.flagged and math.isfinite(literal.max_residual)
          and elapsed < 30.0)
    record(7, ok, f"n|sqrt(lam_n) - n pi| slope {literal.slope:.3g} "
                  f"(limit 0.02), max {literal.max_residual:.3g}, "
                  f"{elapsed:.1f}s; with (n+1) pi: slope {shifted.slope:.2g}, "
                  f"max {shifted.max_residual:.3g}")
    assert ok


def test_criterion_08_crum_darboux(table1_k1, settings):
    recs = full_spectrum(table1_k1, 2, settings)
    lam = {r.index.label: r.lam for r in recs}
    ctx = transforms.make_context(table1_k1, lam["0"], settings)
    reg = transforms.build_regular_slp(ctx, table1_k1)
    worst_res = worst_inv = 0.0
    for lab in ("1", "2"):
        fs = eigenfunction_samples(table1_k1, lam[lab], ctx.x, settings)
        x, g, dg = transforms.crum_darboux(ctx, table1_k1, lam[lab], fs)
        worst_res = max(worst_res, transforms.regular_residual(
            reg, lam[lab], x, g, dg).worst)
        inv = transforms.inverse_map(lam[lab], x, g, ctx, table1_k1)
        c = np.dot(inv.w, fs[:, 1]) / np.dot(inv.w, inv.w)
        worst_inv = max(worst_inv, float(np.max(np.abs(c * inv.w - fs[:, 1]))
                                         / np.max(np.abs(fs[:, 1]))))
    ok = worst_res < 1e-6 and worst_inv < 1e-5
    record(8, ok, f"regular-SLP residual {worst_res:.2e} (tol 1e-6), inverse "
                  f"map deviation {worst_inv:.2e} (tol 1e-5)")
    assert ok


# (sign alpha1, sign beta1) -> lam_-1, lam_-0, lam_0, lam_1 exist
REFERENCE_EXISTENCE = {
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


def test_criterion_09_existence_matrix():
    mismatched = []
    for (sa, sb), flags in REFERENCE_EXISTENCE.items():
        got = specfun.constant_profile_existence((0.7 * sa, 1.3 * sb))
        if tuple(got[lab] for lab in specfun.EXISTENCE_LABELS) != flags:
            mismatched.append((sa, sb))
    # the flags must also describe the actual roots, and none is zero
    rng = random.Random(11)
    contradictions = zero_roots = 0
    for _ in range(400):
        signs = (rng.choice((-1, 0, 1)), rng.choice((-1, 0, 1)))
        bc = BoundaryParams(signs[0] * rng.uniform(0.05, 50),
                            rng.uniform(0.1, 5), signs[1] * rng.uniform(0.05, 50),
                            rng.uniform(0.1, 5))
        mu, k, L = rng.uniform(0.5, 3), rng.uniform(0.1, 5), rng.uniform(0.1, 2)
        roots = specfun.constant_profile_spectrum(mu, k, L, bc)
        want = {lab for lab, v in zip(specfun.EXISTENCE_LABELS,
                                      REFERENCE_EXISTENCE[signs]) if v}
        contradictions += set(roots) != want
        zero_roots += any(v == 0 for v in roots.values())
    ok = not mismatched and not contradictions and not zero_roots
    matrix = "; ".join(f"{a:+d},{b:+d}:" + "".join("T" if f else "F" for f in v)
                       for (a, b), v in REFERENCE_EXISTENCE.items())
    record(9, ok, f"9 sign rows exact ({matrix}); 400 random cases, "
                  f"{contradictions} contradictions, {zero_roots} zero "
                  f"eigenvalues (no neutral wave)")
    assert ok


def test_criterion_10_oracles(tight):
    mu, k, L = 1.5, 1.0, 1.0
    bc = BoundaryParams(0.9, 1.0, -0.9, 2.0)
    prob = make_problem(
        CoefficientSet(ConstantFunction(mu), ConstantFunction(k * k * mu),
                       ConstantFunction(0.0), L), bc, require_positive="pq")
    eta = specfun.constant_profile_eta(mu, k, L, bc.alpha1, bc.alpha2)
    grid = [lam for lam in np.linspace(-20.0, 20.0, 102)
            if abs(lam) > 1e-3 and abs(lam - eta) > 1e-3][:100]
    h1_gap = max(abs(h1(prob, lam, tight)
                     - specfun.constant_profile_h1(mu, k, L, bc, lam))
                 / abs(specfun.constant_profile_h1(mu, k, L, bc, lam))
                 for lam in grid)
    xs = np.linspace(0.0, L, 41)
    sol_gap = 0.0
    for lam in (-7.0, -1.0, 2.5, 9.0):
        s = eigenfunction_samples(prob, lam, xs, tight)
        f, df = specfun.constant_profile_solution(mu, k, lam, xs, bc.alpha1,
                                                  bc.alpha2)
        sol_gap = max(sol_gap, float(np.max(np.abs(mu * s[:, 1] - f)
                                            / np.max(np.abs(f)))))
    # hypergeometric path: ODE residual gate on the Table-1 k=1 range
    hp = heleshaw.TABLE1
    prof = specfun.LinearProfile(hp.slope, hp.intercept)
    z_lo = 2 * 1.0 * prof.b / prof.a
    zs = np.linspace(z_lo, z_lo + 2 * 1.0 * hp.L, 9)
    gate = 0.0
    for lam in REFERENCE_T1[1][2:]:
        alpha = 0.5 * (1 - lam)
        for fn, dfn in ((specfun.kummer_phi, specfun.kummer_phi_prime),
                        (specfun.tricomi_psi, specfun.tricomi_psi_prime)):
            gate = max(gate, specfun.kummer_residual(
                lambda z: fn(alpha, z), lambda z: dfn(alpha, z), alpha, zs))
    ok = h1_gap < 1e-8 and sol_gap < 1e-8
    record(10, ok, f"h1 vs closed form {h1_gap:.2e} on {len(grid)} points, "
                   f"shoot vs closed-form solution {sol_gap:.2e} (tol 1e-8); "
                   f"hypergeometric residual gate {gate:.2e} "
                   f"({'accepted' if gate < 1e-7 else 'reported only'})")
    assert ok


def test_criterion_11_monotonicity(table1_k1, settings):
    aux = aux_spectrum(table1_k1, 1, settings)
    counts = {}
    for br in branches(aux, 1):
        if br.index.label in ("-0", "0", "1"):
            counts[br.index.label] = transforms.monotonicity_probe(
                table1_k1, br, 50, settings).violations
    ok = set(counts) == {"-0", "0", "1"} and not any(counts.values())
    record(11, ok, f"violations per branch {counts}")
    assert ok
