"""End-to-end acceptance checks.

Each test prints a single PASS/FAIL line (visible live, outside pytest's
capture) and then asserts. Criterion 8 encodes literal numeric thresholds
that the defining formula for the influence function cannot attain (its
centered form tends to a nonzero constant at the support ends, and the
unbounded component grows only linearly); it is expected to FAIL while the
substantive boundedness property is verified elsewhere in the suite.
"""

import numpy as np
import pytest
from scipy.integrate import quad

from gefit.asymptotics import (are, influence_function, j_matrix,
                               sandwich_sigma)
from gefit.diagnostics import (acf_pacf, flag_outliers_adjusted_boxplot,
                               ks_bootstrap_test, ks_statistic, trend_pvalue)
from gefit.estimators import fit_ml
from gefit.cli import load_dataset
from gefit.datasets import annual_path, monthly_path
from gefit.gedist import GEParams, ge_quantile, ge_sample
from gefit.mdpde import (density_power, estimating_equations, fit_mdpde,
                         h_objective, integral_fpow, score_vector,
                         select_alpha_cvm, xi_integral)
from gefit.sample import Sample
from gefit.simharness import (ContaminationSpec, MethodSpec,
                              run_contamination_study)

TRUTH = GEParams(1.0, 1.5)


def _report(capsys, num: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n[criterion {num:02d}] {'PASS' if ok else 'FAIL'} - {detail}")


# ---------------------------------------------------------------- criterion 1

def test_criterion_01_quantile_anchors(capsys):
    q999 = float(ge_quantile(0.999, TRUTH))
    q1m6 = float(ge_quantile(1.0 - 1e-6, TRUTH))
    ok = round(q999, 2) == 7.31 and round(q1m6, 2) == 14.22
    _report(capsys, 1, ok,
            f"quantile anchors q(0.999)={q999:.4f}, q(1-1e-6)={q1m6:.4f}")
    assert ok


# ---------------------------------------------------------------- criterion 2

def _quad_upper(params):
    return float(ge_quantile(1.0 - 1e-14, params))


def _oracle_fpow(params, alpha):
    val, _ = quad(lambda t: density_power(t, params, 1.0 + alpha),
                  1e-300, _quad_upper(params), limit=200)
    return val


def _oracle_xi(params, alpha):
    up = _quad_upper(params)
    return np.array([quad(lambda t: score_vector(t, params)[k]
                          * density_power(t, params, 1.0 + alpha),
                          1e-300, up, limit=200)[0] for k in range(2)])


def _oracle_j(params, alpha):
    up = _quad_upper(params)
    J = np.empty((2, 2))
    for i in range(2):
        for j in range(i, 2):
            J[i, j], _ = quad(
                lambda t: (score_vector(t, params)[i]
                           * score_vector(t, params)[j]
                           * density_power(t, params, 1.0 + alpha)),
                1e-300, up, limit=200)
            J[j, i] = J[i, j]
    return J


def test_criterion_02_closed_forms_vs_quadrature(capsys):
    worst = 0.0
    checked = 0
    for lam in [0.5, 1.0, 2.0]:
        for nu in [1.2, 1.5, 3.0]:
            for alpha in [0.1, 0.2, 0.5, 1.0]:
                if abs(nu - (2.0 + alpha) / (1.0 + alpha)) < 1e-9:
                    continue  # removable singularity line is excluded
                p = GEParams(lam, nu)
                pairs = [
                    (integral_fpow(p, alpha), _oracle_fpow(p, alpha)),
                    (xi_integral(p, alpha), _oracle_xi(p, alpha)),
                    (j_matrix(p, alpha), _oracle_j(p, alpha)),
                ]
                # K = J_{2a} - xi xi', closed vs full-quadrature oracle
                k_closed = (j_matrix(p, 2.0 * alpha)
                            - np.outer(xi_integral(p, alpha),
                                       xi_integral(p, alpha)))
                k_oracle = (_oracle_j(p, 2.0 * alpha)
                            - np.outer(_oracle_xi(p, alpha),
                                       _oracle_xi(p, alpha)))
                pairs.append((k_closed, k_oracle))
                for got, want in pairs:
                    got, want = np.asarray(got), np.asarray(want)
                    rel = np.max(np.abs(got - want)
                                 / np.maximum(np.abs(want), 1e-10))
                    worst = max(worst, rel)
                checked += 1
    ok = worst < 1e-8
    _report(capsys, 2, ok,
            f"closed forms vs quadrature on {checked} grid points, "
            f"worst relative error {worst:.2e}")
    assert ok


# ---------------------------------------------------------------- criterion 3

def test_criterion_03_gradient_check(capsys):
    s = ge_sample(50, TRUTH, seed=314)
    worst = 0.0
    for lam in [0.7, 1.0, 1.4]:
        for nu in [1.2, 1.6, 2.5]:
            for alpha in [0.1, 0.5, 1.0]:
                u = estimating_equations(s, GEParams(lam, nu), alpha)
                grad = -(1.0 + alpha) * u
                for k, (dl, dn) in enumerate([(1e-6, 0.0), (0.0, 1e-6)]):
                    fd = (h_objective(s, GEParams(lam + dl, nu + dn), alpha)
                          - h_objective(s, GEParams(lam - dl, nu - dn), alpha)
                          ) / (2e-6)
                    rel = abs(fd - grad[k]) / max(1.0, abs(grad[k]))
                    worst = max(worst, rel)
    ok = worst < 1e-5
    _report(capsys, 3, ok,
            f"objective gradient vs estimating equations on 27 points, "
            f"worst relative error {worst:.2e}")
    assert ok


# ---------------------------------------------------------------- criterion 4

def test_criterion_04_mle_equivalence(capsys):
    worst = 0.0
    for seed in range(20):
        s = ge_sample(100, TRUTH, seed=1000 + seed)
        a = fit_mdpde(s, 0.0).params.as_array()
        b = fit_ml(s).params.as_array()
        worst = max(worst, float(np.max(np.abs(a - b))))
    ok = worst < 1e-4
    _report(capsys, 4, ok,
            f"alpha=0 fit vs maximum likelihood over 20 samples, "
            f"worst per-parameter gap {worst:.2e}")
    assert ok


# ------------------------------------------------------------- criteria 5 & 6

REPS = 1000
N_SIM = 100


def _bias_tolerance(row):
    mc_sd = np.sqrt(max(row.mse - row.bias**2, 0.0))
    return max(0.02, 2.0 * mc_sd / np.sqrt(REPS))


def test_criterion_05_moderate_outlier_study(capsys):
    outlier = float(ge_quantile(0.999, TRUTH))  # 7.31
    clean = run_contamination_study(
        TRUTH, N_SIM, REPS, ContaminationSpec(0.0, outlier),
        [MethodSpec("ML")], seed=501)
    contam = run_contamination_study(
        TRUTH, N_SIM, REPS, ContaminationSpec(0.10, outlier),
        [MethodSpec("ML"), MethodSpec("MDPDE", 1.0)], seed=502)

    def row(table, method, param):
        return next(r for r in table.rows
                    if r.method == method and r.parameter == param)

    targets = [
        (row(clean, "ML", "lambda"), 0.021, 0.016),
        (row(clean, "ML", "nu"), 0.045, 0.058),
        (row(contam, "ML", "lambda"), -0.445, None),
        (row(contam, "ML", "nu"), -0.427, None),
        (row(contam, "MDPDE", "lambda"), -0.085, None),
        (row(contam, "MDPDE", "nu"), -0.020, None),
    ]
    msgs, ok = [], True
    for r, bias_t, mse_t in targets:
        b_ok = abs(r.bias - bias_t) <= _bias_tolerance(r)
        m_ok = mse_t is None or abs(r.mse - mse_t) <= 0.25 * mse_t
        ok = ok and b_ok and m_ok
        msgs.append(f"{r.method}/{r.parameter}@{r.outlier_pct:g}% "
                    f"bias {r.bias:+.3f} (target {bias_t:+.3f})")
    _report(capsys, 5, ok, "moderate-outlier study: " + "; ".join(msgs))
    assert ok


def test_criterion_06_extreme_outlier_study(capsys):
    outlier = float(ge_quantile(1.0 - 1e-6, TRUTH))  # 14.22
    table = run_contamination_study(
        TRUTH, N_SIM, REPS, ContaminationSpec(0.10, outlier),
        [MethodSpec("MDPDE", 0.5)], seed=601)
    by_param = {r.parameter: r for r in table.rows}
    targets = {"lambda": (-0.045, 0.026), "nu": (0.002, 0.062)}
    msgs, ok = [], True
    for param, (bias_t, mse_t) in targets.items():
        r = by_param[param]
        b_ok = abs(r.bias - bias_t) <= _bias_tolerance(r)
        m_ok = abs(r.mse - mse_t) <= 0.25 * mse_t
        ok = ok and b_ok and m_ok
        msgs.append(f"{param}: bias {r.bias:+.3f} (target {bias_t:+.3f}), "
                    f"mse {r.mse:.3f} (target {mse_t:.3f})")
    _report(capsys, 6, ok, "extreme-outlier study: " + "; ".join(msgs))
    assert ok


# ---------------------------------------------------------------- criterion 7

def test_criterion_07_scaling_laws(capsys):
    worst = 0.0
    alpha = 0.5
    base = sandwich_sigma(GEParams(1.0, 1.5), alpha).Sigma
    for c in [0.5, 3.0]:
        s = sandwich_sigma(GEParams(c, 1.5), alpha).Sigma
        worst = max(worst,
                    abs(s[0, 0] / (c**2 * base[0, 0]) - 1.0),
                    abs(s[0, 1] / (c * base[0, 1]) - 1.0),
                    abs(s[1, 1] / base[1, 1] - 1.0))
    ref = are(GEParams(0.5, 1.5), alpha)
    for lam in [1.0, 5.0]:
        worst = max(worst, float(np.max(np.abs(
            are(GEParams(lam, 1.5), alpha) / ref - 1.0))))
    ok = worst < 1e-10
    _report(capsys, 7, ok,
            f"covariance rate-scaling and rate-free efficiency, "
            f"worst relative deviation {worst:.2e}")
    assert ok


# ---------------------------------------------------------------- criterion 8

def test_criterion_08_influence_thresholds(capsys):
    """Literal numeric thresholds; see the module docstring for why the
    endpoint and ratio clauses cannot hold for this influence function."""
    msgs, ok = [], True
    xs = np.linspace(1e-4, 50.0, 2000)
    for alpha in [0.1, 0.2, 0.5]:
        vals = influence_function(xs, TRUTH, alpha)
        finite = bool(np.all(np.isfinite(vals)))
        end_mag = float(max(np.max(np.abs(vals[:, 0])),
                            np.max(np.abs(vals[:, -1]))))
        clause = finite and end_mag < 1e-4
        ok = ok and clause
        msgs.append(f"alpha={alpha}: finite={finite}, "
                    f"endpoint magnitude {end_mag:.3f} (< 1e-4 required)")
    v10 = abs(influence_function(10.0, TRUTH, 0.0)[0])
    v50 = abs(influence_function(50.0, TRUTH, 0.0)[0])
    ratio_ok = v50 > 10.0 * v10
    ok = ok and ratio_ok
    msgs.append(f"alpha=0 rate-component ratio |IF(50)|/|IF(10)| = "
                f"{v50 / v10:.2f} (> 10 required)")
    _report(capsys, 8, ok, "influence thresholds: " + "; ".join(msgs))
    assert ok


# ---------------------------------------------------------------- criterion 9

def test_criterion_09_sandwich_monte_carlo(capsys):
    reps, n, alpha = 5000, 2000, 0.5
    sigma = sandwich_sigma(TRUTH, alpha).Sigma
    errs = np.empty((reps, 2))
    for rep in range(reps):
        rng = np.random.default_rng([901, rep])
        u = rng.uniform(size=n)
        u = np.clip(u, np.finfo(float).tiny, 1.0 - np.finfo(float).epsneg)
        s = Sample(np.atleast_1d(ge_quantile(u, TRUTH)))
        fit = fit_mdpde(s, alpha)
        errs[rep] = np.sqrt(n) * (fit.params.as_array() - TRUTH.as_array())
    mc_cov = np.cov(errs, rowvar=False)
    se = np.array([
        [sigma[0, 0] * np.sqrt(2.0 / (reps - 1)),
         np.sqrt((sigma[0, 0] * sigma[1, 1] + sigma[0, 1] ** 2) / (reps - 1))],
        [0.0, sigma[1, 1] * np.sqrt(2.0 / (reps - 1))]])
    se[1, 0] = se[0, 1]
    dev = np.abs(mc_cov - sigma) / se
    ok = bool(np.all(dev <= 3.0))
    _report(capsys, 9, ok,
            f"Monte Carlo vs sandwich covariance, entrywise deviations "
            f"{dev[0, 0]:.2f}/{dev[0, 1]:.2f}/{dev[1, 1]:.2f} MC-SEs (<= 3)")
    assert ok


# --------------------------------------------------------------- criterion 10

def test_criterion_10_efficiency_monotone(capsys):
    ok = True
    worst = ""
    for nu in [1.5, 3.0]:
        grid = np.arange(0.0, 1.0 + 1e-9, 0.1)
        vals = np.array([are(GEParams(1.0, nu), a) for a in grid])
        starts_at_one = np.allclose(vals[0], [1.0, 1.0], atol=1e-10)
        decreasing = bool(np.all(np.diff(vals[:, 0]) < 0.0)
                          and np.all(np.diff(vals[:, 1]) < 0.0))
        if not (starts_at_one and decreasing):
            ok = False
            worst = f" (violated at shape {nu})"
    _report(capsys, 10, ok,
            "relative efficiency equals 1 at alpha=0 and strictly "
            "decreases on both components" + worst)
    assert ok


# --------------------------------------------------------------- criterion 11

def test_criterion_11_full_pipeline_bundled_data(capsys):
    msgs, ok = [], True

    # contaminated series: diagnose -> tune -> fit -> goodness of fit
    times, values, _ = load_dataset(monthly_path())
    s = Sample(values)
    p_trend = trend_pvalue(s, times)
    acf, pacf = acf_pacf(s, 10)
    rep = flag_outliers_adjusted_boxplot(s)
    ok &= p_trend > 0.05 and max(abs(a) for a in acf) < 0.35
    ok &= len(rep.flagged_indices) >= 1
    grid = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
    curve = select_alpha_cvm(s, grid)
    ok &= curve.optimal_alpha > 0.0
    fit = fit_mdpde(s, curve.optimal_alpha)
    ok &= fit.optim.converged and ks_statistic(s.values, fit.params) < 0.2
    keep = np.setdiff1d(np.arange(len(s)), rep.flagged_indices)
    gof = ks_bootstrap_test(Sample(s.values[keep]), "ml", B=199, seed=11)
    ok &= gof.p_value > 0.05
    msgs.append(f"contaminated series: trend p={p_trend:.2f}, "
                f"{len(rep.flagged_indices)} outlier(s), "
                f"alpha_opt={curve.optimal_alpha:g}, gof p={gof.p_value:.3f}")

    # clean series: same pipeline, nothing should trip
    times2, values2, _ = load_dataset(annual_path())
    s2 = Sample(values2)
    ok &= trend_pvalue(s2, times2) > 0.05
    gof2 = ks_bootstrap_test(s2, "ml", B=199, seed=12)
    ok &= gof2.p_value > 0.05
    msgs.append(f"clean series: gof p={gof2.p_value:.3f}")

    _report(capsys, 11, ok, "end-to-end pipeline: " + "; ".join(msgs))
    assert ok


# --------------------------------------------------------------- criterion 12

def test_criterion_12_bootstrap_calibration(capsys):
    trials, B, n = 500, 499, 100
    rejections = 0
    for t in range(trials):
        s = ge_sample(n, TRUTH, seed=120000 + t)
        gof = ks_bootstrap_test(s, "ml", B=B, seed=130000 + t)
        rejections += gof.p_value <= 0.05
    rate = rejections / trials
    ok = 0.03 <= rate <= 0.07
    _report(capsys, 12, ok,
            f"null rejection rate {100 * rate:.1f}% at nominal 5% "
            f"over {trials} trials (required 3-7%)")
    assert ok
