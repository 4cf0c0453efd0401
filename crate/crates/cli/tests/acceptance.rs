//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line before asserting.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qmbp::bounds::{bounds_report, compare_bounds};
use qmbp::ctmc::{estimate_decay_uniformization, DecayOptions};
use qmbp::hardy::{hardy_index, Profile, DEFAULT_REL_TOL};
use qmbp::law::{birth_death_rates, skip2_rates, validate_law};
use qmbp::quadrature::integrate;
use qmbp::sl_eigen::{assemble_with, refine, smallest_eig, Grid, DEFAULT_TARGET_REL_TOL};
use qmbp::Law;

fn report(id: u32, title: &str, ok: bool, detail: String) {
    println!(
        "{} [{id}] {title}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({title}) failed: {detail}");
}

/// Random subcritical law with `J_max ≤ 6`.
fn random_law(rng: &mut ChaCha8Rng) -> Law {
    let jmax = rng.gen_range(2..=6);
    let mut births: Vec<f64> = (2..=jmax).map(|_| rng.gen_range(0.0..1.0)).collect();
    if births.len() > 1 && rng.gen_bool(0.3) {
        let k = rng.gen_range(0..births.len() - 1);
        births[k] = 0.0;
    }
    let m_b: f64 = births
        .iter()
        .enumerate()
        .map(|(k, b)| (k + 1) as f64 * b)
        .sum();
    let b0 = m_b + rng.gen_range(0.05..2.0);
    let mut rates = vec![b0, -(b0 + births.iter().sum::<f64>())];
    rates.extend(births);
    validate_law(&rates).unwrap()
}

fn fifty_laws() -> Vec<Law> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..50).map(|_| random_law(&mut rng)).collect()
}

#[test]
fn c1_birth_death_closed_form() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let a: f64 = rng.gen_range(1e-3..=10.0);
        let b = a * rng.gen_range(1e-6..1.0);
        let law = validate_law(&birth_death_rates(a, b)).unwrap();
        let d2 = hardy_index(&law, DEFAULT_REL_TOL).unwrap().d2;
        let exact = (1.0 + (1.0 - b / a).sqrt()).ln().powi(2) / (a - b);
        worst = worst.max((d2 - exact).abs() / exact);
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "birth-death closed form",
        worst <= 1e-8,
        format!("200 laws, max rel err {worst:.2e}, {secs:.2} s"),
    );
}

#[test]
fn c2_eigenvalue_sandwich() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for law in fifty_laws() {
        let ell0 = refine(&law, DEFAULT_TARGET_REL_TOL).unwrap().ell0;
        let h = hardy_index(&law, DEFAULT_REL_TOL).unwrap();
        if ell0 < h.lambda_lo * (1.0 - 1e-6) || ell0 > h.lambda_hi * (1.0 + 1e-6) {
            bad.push((law.b.clone(), ell0, h.lambda_lo, h.lambda_hi));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        2,
        "eigenvalue in Hardy interval",
        bad.is_empty(),
        format!("50 laws, {} violations {bad:?}, {secs:.1} s", bad.len()),
    );
}

#[test]
fn c3_bracket_containment() {
    let mut bad = Vec::new();
    let mut applicable = 0;
    for law in fifty_laws() {
        let d2 = hardy_index(&law, DEFAULT_REL_TOL).unwrap().d2;
        let rep = bounds_report(&law, DEFAULT_REL_TOL).unwrap();
        for e in rep.entries.iter().filter(|e| e.applicable) {
            applicable += 1;
            if !e.contains_d2(d2, 1e-9) {
                bad.push(format!("{} on {:?}", e.name, law.b));
            }
        }
        let cmp = compare_bounds(&rep, &law);
        for p in cmp.pairs.iter().filter(|p| !p.overlap) {
            bad.push(format!("{}/{} disjoint on {:?}", p.first, p.second, law.b));
        }
    }
    report(
        3,
        "brackets contain the Hardy index",
        bad.is_empty(),
        format!("{applicable} applicable brackets, violations {bad:?}"),
    );
}

#[test]
fn c4_ctmc_matches_eigenvalue() {
    let mut lines = Vec::new();
    let mut ok = true;
    for rates in [vec![2.0, -3.0, 1.0], vec![1.0, -1.6, 0.3, 0.3]] {
        let law = validate_law(&rates).unwrap();
        let ell0 = refine(&law, DEFAULT_TARGET_REL_TOL).unwrap().ell0;
        let opts = DecayOptions {
            t_max: 10.0 / ell0,
            n_max: 2048,
            ..DecayOptions::default()
        };
        let est = estimate_decay_uniformization(&law, &opts).unwrap();
        let rel = (est.lambda_hat - ell0).abs() / ell0;
        ok &= rel <= 0.05;
        lines.push(format!(
            "{rates:?}: lambda_hat {:.6} vs ell0 {ell0:.6} (rel {rel:.1e}, N {:?})",
            est.lambda_hat, est.n_states
        ));
    }
    report(
        4,
        "CTMC decay rate matches eigenvalue",
        ok,
        lines.join("; "),
    );
}

#[test]
fn c5_critical_limit() {
    let mut lines = Vec::new();
    let mut ok = true;
    for k in 2..=4 {
        let eps = 10f64.powi(-k);
        let law = validate_law(&birth_death_rates(1.0, 1.0 - eps)).unwrap();
        let d2 = hardy_index(&law, DEFAULT_REL_TOL).unwrap().d2;
        let gap = (0.25 / d2 - 0.25).abs();
        ok &= gap <= 10.0 * eps;
        lines.push(format!(
            "k={k}: |1/(4D^2) - 1/4| = {gap:.3e} vs {:.0e}",
            10.0 * eps
        ));
    }
    report(5, "lower bound tends to a/4", ok, lines.join("; "));
}

#[test]
fn c6_inequality_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = [0usize; 6];

    for _ in 0..1000 {
        let sigma: f64 = rng.gen_range(1e-9..=10.0);
        let t: f64 = rng.gen_range(1e-9..=100.0);
        if (sigma * t).ln_1p() * (sigma / t).ln_1p() > sigma.ln_1p().powi(2) + 1e-6 {
            violations[0] += 1;
        }
    }
    for _ in 0..1000 {
        let x = rng.gen_range(-10.0f64..10.0).exp();
        if x != 1.0 && x.ln() / (x - 1.0) > (1.0 + x) / (2.0 * x) + 1e-6 {
            violations[1] += 1;
        }
    }
    for _ in 0..1000 {
        let x = rng.gen_range(0.0..1.0);
        let p = rng.gen_range(-1.0..1.0);
        if p * (1.0 - p) * x * x - 4.0 * p * x + p - 1.0 >= 1e-6 {
            violations[2] += 1;
        }
    }

    let f = |x: f64, p: f64| -x.ln() * ((1.0 + p * x) / (1.0 - x)).ln();
    let h = 1e-4;
    for i in 0..100 {
        let x = 0.01 + 0.98 * i as f64 / 99.0;
        for j in 0..100 {
            let p = -0.99 + 1.98 * j as f64 / 99.0;
            if (f(x + h, p) - 2.0 * f(x, p) + f(x - h, p)) / (h * h) > 1e-6 {
                violations[3] += 1;
            }
        }
    }

    for _ in 0..50 {
        let b3 = rng.gen_range(0.05..1.05);
        let b2 = rng.gen_range(0.0..1.0);
        let b0 = (b2 + 2.0 * b3) * rng.gen_range(1.05..3.05);
        let law = validate_law(&skip2_rates(b0, b2, b3)).unwrap();
        let prof = Profile::of_law(&law).unwrap();
        let v = |x: f64| prof.phi(x, 1e-13).unwrap();
        let h = 1e-3;
        for i in 0..=98 {
            let s = 0.01 + 0.98 * i as f64 / 98.0;
            if (v(s + h) - 2.0 * v(s) + v(s - h)) / (h * h) > 1e-6 {
                violations[4] += 1;
            }
        }
    }

    // ∫ f²/(s log² s) ≤ 4 ∫ s f'² for piecewise-linear f vanishing at both ends
    for _ in 0..50 {
        let alpha = rng.gen_range(1e-3..0.9);
        let beta = alpha + (0.999 - alpha) * rng.gen_range(0.01..1.0);
        let k = rng.gen_range(2..=8);
        let knots: Vec<f64> = (0..=k)
            .map(|i| alpha + (beta - alpha) * i as f64 / k as f64)
            .collect();
        let mut vals = vec![0.0];
        vals.extend((1..k).map(|_| rng.gen_range(-2.0..2.0)));
        vals.push(0.0);
        let (mut lhs, mut rhs) = (0.0, 0.0);
        for i in 0..k {
            let (x0, x1, y0, y1) = (knots[i], knots[i + 1], vals[i], vals[i + 1]);
            let slope = (y1 - y0) / (x1 - x0);
            let g = |s: f64| y0 + slope * (s - x0);
            lhs += integrate(
                |s: f64| g(s).powi(2) / (s * s.ln().powi(2)),
                x0,
                x1,
                1e-12,
                0.0,
            )
            .unwrap()
            .value;
            rhs += slope * slope * (x1 * x1 - x0 * x0) / 2.0;
        }
        if lhs > 4.0 * rhs * (1.0 + 1e-6) {
            violations[5] += 1;
        }
    }

    let names = [
        "log product",
        "log ratio",
        "quadratic",
        "kernel concavity",
        "skip-2 phi concavity",
        "log-weighted Hardy",
    ];
    let detail: Vec<String> = names
        .iter()
        .zip(violations)
        .map(|(n, v)| format!("{n} {v}"))
        .collect();
    report(
        6,
        "inequality suites",
        violations.iter().all(|&v| v == 0),
        format!("violations: {}", detail.join(", ")),
    );
}

#[test]
fn c7_a_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = 0;
    for _ in 0..200 {
        let law = random_law(&mut rng);
        let b0 = law.b0();
        let mut ok =
            law.eval_a(0.0, 0) == b0 && (law.eval_a(1.0, 0) - (b0 - law.m_b)).abs() < 1e-12;
        for i in 0..=200 {
            let s = i as f64 / 200.0;
            let a = law.eval_a(s, 0);
            ok &= law.eval_a(s, 1) < 0.0 && law.eval_a(s, 2) <= 0.0;
            if i > 0 && i < 200 {
                ok &= a > b0 - law.m_b && a < b0;
            }
        }
        if !ok {
            bad += 1;
        }
    }
    report(
        7,
        "A(s) decreasing, concave, pinned",
        bad == 0,
        format!("200 laws, {bad} violations"),
    );
}

fn run_cli(config: &Path, out: &Path) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_qmbp"))
        .args([
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            "99",
        ])
        .status()
        .unwrap();
    assert!(status.code().is_some());
    std::fs::read(out.join("report.json")).unwrap()
}

#[test]
fn c8_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"rates": [1, -1.6, 0.3, 0.3], "pipelines": ["all"], "ctmc": {"mc_paths": 5000}}"#,
    )
    .unwrap();
    let a = run_cli(&cfg, &dir.path().join("a"));
    let b = run_cli(&cfg, &dir.path().join("b"));
    report(
        8,
        "byte-identical reports",
        a == b,
        format!("{} and {} bytes", a.len(), b.len()),
    );
}

#[test]
fn c9_discretizer_order() {
    let pi2 = std::f64::consts::PI.powi(2);
    let errs: Vec<f64> = [16, 32, 64, 128, 256]
        .iter()
        .map(|&n| {
            let p = assemble_with(&Grid::<f64>::uniform(n), |_| 1.0, |_, _| 1.0);
            smallest_eig(&p).unwrap().value - pi2
        })
        .collect();
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let ok = orders.iter().all(|&o| o >= 1.9);
    report(
        9,
        "Dirichlet Laplacian order",
        ok,
        format!("observed orders {orders:.4?}"),
    );
}
