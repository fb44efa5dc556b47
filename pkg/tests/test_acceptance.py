"""Acceptance suite: one test per headline claim, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
PASS/FAIL lines.  The Hodgkin's-disease and COVID reproductions use locally
supplied datasets when present (CVBAYES_DATA_DIR); otherwise the documented
substitute properties are exercised.
"""

import math
import time

import numpy as np
from scipy import stats

from cvbayes import (
    GateThresholds,
    Sample,
    StudyGrid,
    bootstrap_cv_test,
    convergence_gate,
    discrepancy_from_draws,
    load_grid,
    reproduce_example,
    run_consistency_study,
    run_fncr_study,
    run_uniformity_check,
)
from cvbayes.datasets import bundled_path, resolve_data_dir
from cvbayes.models import (
    cv_skewnormal,
    get_model,
    invgauss_log_posterior,
    invgauss_log_posterior_grad,
    negbin_log_posterior,
    negbin_log_posterior_grad,
    normal_gamma_logpdf,
    normal_gamma_logpdf_grad,
    normal_posterior_params,
    skewnormal_log_posterior,
    skewnormal_log_posterior_grad,
)
from cvbayes.rng import rng_stream
from conftest import finite_difference, trigamma_series

PUBLISHED_ANTHROPOMETRIC = {
    "Weight": 0.812,
    "Cephalic breadth": 0.550,
    "Elbow breadth": 0.355,
    "Midarm relaxed circumference": 0.831,
    "Midarm tensed circumference": 0.388,
    "Biceps skinfold": 0.420,
    "Triceps skinfold": 0.996,
    "Subscapular skinfold": 0.213,
    "Suprailiac skinfold": 0.507,
    "Abdominal skinfold": 0.848,
}

PUBLISHED_FNCR_10_10 = {0.90: 0.096, 0.95: 0.047, 0.99: 0.009}


def verdict(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def three_se(p, n):
    return 3.0 * math.sqrt(p * (1.0 - p) / n)


def _local_file(name):
    directory = resolve_data_dir(None)
    if directory is not None and (directory / name).is_file():
        return directory / name
    return None


def test_anthropometric_table_reproduction():
    """All ten published discrepancy values within +-0.02 at 1e5 draws/pop."""
    t0 = time.time()
    rows = reproduce_example("anthropometric", seed=0, n_draws=100_000)
    elapsed = time.time() - t0
    errors = {
        name: abs(report.discrepancy - PUBLISHED_ANTHROPOMETRIC[name])
        for name, report in rows
    }
    worst = max(errors, key=errors.get)
    verdict(
        "anthropometric table (10 rows, +-0.02)",
        all(e <= 0.02 for e in errors.values()) and elapsed < 30.0,
        f"worst row {worst} off by {errors[worst]:.4f}; runtime {elapsed:.1f}s (< 30s)",
    )


def test_fncr_desk_scale():
    """Equal-CV false non-conformity rates match the published (10,10) cell."""
    t0 = time.time()
    grid = load_grid(bundled_path("fncr_normal_grid.toml"))
    grid = StudyGrid(
        model=grid.model, params1=grid.params1, params2=grid.params2,
        sample_sizes=((10, 10),), thresholds=grid.thresholds,
        n_replications=grid.n_replications, n_posterior_draws=grid.n_posterior_draws,
        master_seed=grid.master_seed,
    )
    result = run_fncr_study(grid)
    elapsed = time.time() - t0
    checks = []
    for cell in result.cells:
        target = PUBLISHED_FNCR_10_10[cell.threshold]
        tol = three_se(target, grid.n_replications)
        checks.append((cell.threshold, cell.rate, target, tol, abs(cell.rate - target) <= tol))
    detail = "; ".join(
        f"thr {t}: {r:.4f} vs {tgt} +-{tol:.4f}" for t, r, tgt, tol, _ in checks
    )
    ok = all(c[-1] for c in checks) and elapsed < 600.0
    verdict("FNCR desk scale (5000 reps, 2000 draws)", ok, f"{detail}; runtime {elapsed:.0f}s (< 600s)")
    # the full published scale stays available behind the flag
    full = load_grid(bundled_path("fncr_normal_grid.toml"), full_scale=True)
    assert (full.n_replications, full.n_posterior_draws) == (50_000, 10_000)


def test_uniformity_property():
    """Replicated discrepancies are Uniform(0,1) under a true equal-CV null."""
    grid = StudyGrid(
        model="normal", params1={"mean": 3.0, "sd": 1.0}, params2={"mean": 3.0, "sd": 1.0},
        sample_sizes=((50, 50),), thresholds=(0.5,),
        n_replications=5_000, n_posterior_draws=2_000, master_seed=7,
    )
    ks_stat, p_value = run_uniformity_check(grid)
    verdict("uniformity under the null (5000 reps)", p_value > 0.01,
            f"KS stat {ks_stat:.4f}, p {p_value:.4f} (> 0.01)")


def test_consistency_property():
    """Median discrepancy exceeds 0.99 for well-separated CVs at n = 1000."""
    grid = StudyGrid(
        model="normal", params1={"mean": 3.0, "sd": 1.0}, params2={"mean": 6.0, "sd": 1.0},
        sample_sizes=((1_000, 1_000),), thresholds=(0.5,),
        n_replications=200, n_posterior_draws=2_000, master_seed=11,
    )
    result = run_consistency_study(grid)
    median = result.cells[0].rate
    verdict("consistency (cv 1/3 vs 1/6, n=1000)", median > 0.99,
            f"median discrepancy {median:.4f} (> 0.99)")


def test_hodgkin_reproduction_or_substitute():
    """Published inverse-Gaussian comparison, or equal-CV uniformity."""
    active = _local_file("hodgkin_active.csv")
    inactive = _local_file("hodgkin_inactive.csv")
    if active and inactive:
        rows = reproduce_example("hodgkin", seed=1)
        delta = rows[0][1].discrepancy
        verdict("hodgkin reproduction (local data)", abs(delta - 0.2532) <= 0.03,
                f"discrepancy {delta:.4f} vs 0.2532 +-0.03")
        return
    grid = StudyGrid(
        model="invgauss", params1={"mu": 2.0, "lam": 8.0}, params2={"mu": 2.0, "lam": 8.0},
        sample_sizes=((50, 50),), thresholds=(0.5,),
        n_replications=2_000, n_posterior_draws=1_250, master_seed=314,
        sampler={"n_iterations": 2_900, "burn_in": 400, "thin": 2},
    )
    ks_stat, p_value = run_uniformity_check(grid)
    verdict("hodgkin substitute: IG equal-CV uniformity (2000 reps)", p_value > 0.01,
            f"KS stat {ks_stat:.4f}, p {p_value:.4f} (> 0.01); local fixture absent")


def test_covid_reproduction_or_substitute():
    """Published Negative Binomial comparison, or uniformity + chain health."""
    india = _local_file("covid_india.csv")
    hong_kong = _local_file("covid_hong_kong.csv")
    if india and hong_kong:
        rows = reproduce_example("covid", seed=1)
        delta = rows[0][1].discrepancy
        verdict("covid reproduction (local data)", abs(delta - 0.0097) <= 0.01,
                f"discrepancy {delta:.4f} vs 0.0097 +-0.01")
        return

    # chain health at the default run length on synthetic data
    model = get_model("negbin")
    gate = GateThresholds(acceptance_band=(0.15, 0.45), min_ess=400.0)
    gates = []
    for index in (0, 1):
        data = model.simulate({"alpha": 2.0, "beta": 1.0}, 500, rng_stream(606, index))
        _, report = model.cv_draws(Sample.from_values(data), seed=607 + index)
        gates.append((convergence_gate(report, gate), report.acceptance_rate, report.min_ess))
    gate_ok = all(g[0] for g in gates)
    gate_detail = ", ".join(f"acc {a:.3f} ess {e:.0f}" for _, a, e in gates)

    grid = StudyGrid(
        model="negbin", params1={"alpha": 2.0, "beta": 1.0}, params2={"alpha": 2.0, "beta": 1.0},
        sample_sizes=((200, 200),), thresholds=(0.5,),
        n_replications=2_000, n_posterior_draws=1_200, master_seed=2718,
        sampler={"n_iterations": 4_200, "burn_in": 600, "thin": 3},
    )
    ks_stat, p_value = run_uniformity_check(grid)
    verdict(
        "covid substitute: NB equal-CV uniformity + convergence gate",
        p_value > 0.01 and gate_ok,
        f"KS p {p_value:.4f} (> 0.01); gates [{gate_detail}]; local data absent",
    )


def test_skewnormal_substitutes():
    """(a) zero-shape reduction, (b) Gibbs CV recovery, (c) gradient checks."""
    # (a) algebraic reduction of the skew-Normal CV at lam = 0
    exact = all(
        cv_skewnormal(mu, sigma, 0.0) == sigma / abs(mu)
        for mu in (-3.0, 1.5, 2.0, 67.22)
        for sigma in (0.5, 1.0, 1.5, 3.25)
    )

    # (b) posterior CV mean within 10% of the truth
    model = get_model("skewnormal")
    true_cv = cv_skewnormal(3.0, 1.0, 2.0)
    data = model.simulate({"mu": 3.0, "sigma": 1.0, "lam": 2.0}, 1_000, np.random.default_rng(79))
    sample = Sample.from_values(data)
    config = model.default_config(sample).override(n_iterations=18_000, burn_in=3_000, thin=3)
    draws, _ = model.cv_draws(sample, seed=3, config=config)
    rel_err = abs(draws.values.mean() - true_cv) / true_cv

    # (c) every log posterior's gradient against central finite differences
    grad_ok = _all_gradients_match()

    verdict(
        "skew-normal substitutes (a, b, c)",
        exact and rel_err < 0.10 and grad_ok,
        f"zero-shape reduction exact: {exact}; CV rel err {rel_err:.3%} (< 10%); "
        f"gradients at 1e-5: {grad_ok}",
    )


def _all_gradients_match(tol=1e-5):
    rng = np.random.default_rng(555)
    normal_sample = Sample.from_summary(20, 1.5, 0.5)
    ng = normal_posterior_params(normal_sample)
    ig_sample = Sample.from_values(rng.wald(2.0, 8.0, 60))
    sn_model = get_model("skewnormal")
    sn_sample = Sample.from_values(
        sn_model.simulate({"mu": 1.0, "sigma": 2.0, "lam": 3.0}, 80, rng)
    )
    nb_sample = Sample.from_values(rng.negative_binomial(2, 0.5, 80).astype(float))
    cases = []
    for _ in range(20):
        cases.extend(
            [
                (
                    lambda v: normal_gamma_logpdf(v[0], v[1], ng),
                    lambda v: normal_gamma_logpdf_grad(v[0], v[1], ng),
                    [rng.normal(1.5, 0.3), rng.uniform(1.0, 8.0)],
                ),
                (
                    lambda v: invgauss_log_posterior(v[0], v[1], ig_sample),
                    lambda v: invgauss_log_posterior_grad(v[0], v[1], ig_sample),
                    [rng.uniform(1.0, 4.0), rng.uniform(2.0, 20.0)],
                ),
                (
                    lambda v: skewnormal_log_posterior(v[0], v[1], v[2], sn_sample),
                    lambda v: skewnormal_log_posterior_grad(v[0], v[1], v[2], sn_sample),
                    [rng.normal(1.0, 0.5), rng.uniform(1.2, 3.0), rng.normal(0.0, 2.0)],
                ),
                (
                    lambda v: negbin_log_posterior(v[0], v[1], nb_sample),
                    lambda v: negbin_log_posterior_grad(v[0], v[1], nb_sample),
                    [rng.uniform(0.8, 5.0), rng.uniform(0.3, 3.0)],
                ),
            ]
        )
    for f, g, point in cases:
        point = np.asarray(point, dtype=float)
        analytic = g(point)
        fd = finite_difference(f, point)
        if not np.all(np.abs(analytic - fd) <= tol * np.maximum(1.0, np.abs(analytic))):
            return False
    return True


def test_oracle_equivalence():
    """Log posteriors match independent oracles; the Monte Carlo discrepancy
    matches the closed-form Normal tail."""
    rng = np.random.default_rng(910)
    worst = 0.0

    ng = normal_posterior_params(Sample.from_summary(30, 2.5, 0.8))
    diffs = []
    for mu in np.linspace(2.2, 2.8, 4):
        for phi in np.linspace(0.8, 2.4, 4):
            diffs.append(
                normal_gamma_logpdf(mu, phi, ng)
                - stats.gamma.logpdf(phi, a=ng.shape, scale=1 / ng.rate)
                - stats.norm.logpdf(mu, loc=ng.location, scale=1 / np.sqrt(ng.precision_scale * phi))
            )
    worst = max(worst, np.ptp(diffs))

    ig_sample = Sample.from_values(rng.wald(2.0, 8.0, 60))
    diffs = []
    for mu in np.linspace(1.6, 2.4, 4):
        for lam in np.linspace(5.0, 12.0, 4):
            diffs.append(
                invgauss_log_posterior(mu, lam, ig_sample)
                - stats.invgauss.logpdf(ig_sample.values, mu / lam, scale=lam).sum()
                + 1.5 * np.log(mu)
                + 0.5 * np.log(lam)
            )
    worst = max(worst, np.ptp(diffs))

    sn_model = get_model("skewnormal")
    sn_sample = Sample.from_values(
        sn_model.simulate({"mu": 1.0, "sigma": 2.0, "lam": 3.0}, 60, rng)
    )
    diffs = []
    for mu in np.linspace(0.5, 1.5, 3):
        for sigma in np.linspace(1.5, 2.5, 3):
            for lam in (-1.0, 0.5, 2.0):
                oracle = (
                    stats.skewnorm.logpdf(sn_sample.values, a=lam, loc=mu, scale=sigma).sum()
                    + stats.t.logpdf(lam * np.sqrt(np.pi / 2.0), df=0.5)
                    + 0.5 * np.log(np.pi / 2.0)
                    - np.log(sigma)
                    - sn_sample.n * np.log(2.0)
                )
                diffs.append(skewnormal_log_posterior(mu, sigma, lam, sn_sample) - oracle)
    worst = max(worst, np.ptp(diffs))

    nb_sample = Sample.from_values(rng.negative_binomial(2, 0.5, 80).astype(float))
    x_int = nb_sample.values.astype(int)
    diffs = []
    for alpha in np.linspace(1.2, 3.0, 4):
        for beta in np.linspace(0.5, 1.8, 4):
            diffs.append(
                negbin_log_posterior(alpha, beta, nb_sample)
                - stats.nbinom.logpmf(x_int, alpha, beta / (beta + 1.0)).sum()
                - 0.5 * np.log(alpha * trigamma_series(alpha) - 1.0)
                + np.log(beta)
            )
    worst = max(worst, np.ptp(diffs))

    expected = 1.0 - 2.0 * stats.norm.sf(1.6449)
    mc = discrepancy_from_draws(np.random.default_rng(101).standard_normal(1_000_000), 1.6449)
    mc_err = abs(mc.discrepancy - expected)

    verdict(
        "oracle equivalence (4 log posteriors + Normal tail)",
        worst < 1e-8 and mc_err < 0.002,
        f"worst grid constant-drift {worst:.2e} (< 1e-8); Monte Carlo vs "
        f"closed form off by {mc_err:.5f} (< 0.002)",
    )


def test_bootstrap_baseline_table():
    """Frequentist bootstrap baseline matches its published false positive
    rates; the published 0.980 cell is treated as a typo for 0.098."""
    model = get_model("normal")
    n_reps, n = 5_000, 100
    p_values = np.empty(n_reps)
    for rep in range(n_reps):
        d1 = model.simulate({"mean": 3.0, "sd": 1.0}, n, rng_stream(99, 0, rep, 0))
        d2 = model.simulate({"mean": 3.0, "sd": 1.0}, n, rng_stream(99, 0, rep, 1))
        p_values[rep] = bootstrap_cv_test(
            Sample.from_values(d1), Sample.from_values(d2),
            n_boot=500, seed=rng_stream(99, 0, rep, 2),
        )
    fpr_05 = float(np.mean(p_values <= 0.05))
    fpr_10 = float(np.mean(p_values <= 0.10))
    tol_05 = three_se(0.053, n_reps)
    tol_10 = three_se(0.098, n_reps)
    ok = abs(fpr_05 - 0.053) <= tol_05 and abs(fpr_10 - 0.098) <= tol_10
    print(
        "[NOTE] published level-0.10 cell reads 0.980, inconsistent with every "
        f"neighbouring value; checked against 0.098 instead (observed {fpr_10:.4f})"
    )
    assert abs(fpr_10 - 0.980) > 0.5, "observed rate should be nowhere near the 0.980 misprint"
    verdict(
        "bootstrap baseline (n1=n2=100, 500 resamples, 5000 reps)",
        ok,
        f"FPR@0.05 {fpr_05:.4f} vs 0.053 +-{tol_05:.4f}; "
        f"FPR@0.10 {fpr_10:.4f} vs 0.098 +-{tol_10:.4f}",
    )
