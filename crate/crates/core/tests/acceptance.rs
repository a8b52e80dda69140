//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Lines are written straight to the stderr handle so they show up without
//! `--nocapture`. Criteria that cannot hold as stated are listed in
//! `KNOWN_FAILING`; the test asserts they still fail, so a change in either
//! direction is noticed.

mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twoloop::cft::{classify_minimizer, make_character_trivialization, make_zeta_trivialization, Classification};
use twoloop::loops::{apply_moebius, make_circle_pair};
use twoloop::potentials::{grunsky, lpot_circles, lpot_two, lpot_two_via_lk};
use twoloop::specfun::log_euler_phi_sum;
use twoloop::variation::{variation_check, BeltramiBump};
use twoloop::zetadet::{
    conformal_anomaly, det_disk, polyakov_alvarez, ConformalFactorField, FlatAnnulus, FlatDisk, FlatDomain,
};

/// (c, h) = (0.3, 0.2) has h > c/24, so log g → −∞ as τ → 0 and no
/// interior minimum exists.
const KNOWN_FAILING: &[&str] = &["8a"];

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: &'static str, budget: Duration, check: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = check();
    let elapsed = start.elapsed();
    let pass = ok && elapsed <= budget;
    let line = format!(
        "{} [{id}] {detail} ({:.2}s, budget {}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    let _ = writeln!(std::io::stderr(), "{line}");
    Outcome { id, pass, detail, elapsed }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn circle_curve() -> (bool, String) {
    let oracle = -2f64.ln() - 2.0 * (log_euler_phi_sum((-8.0 * PI).exp()).unwrap() - log_euler_phi_sum((-4.0 * PI).exp()).unwrap());
    let diff = lpot_circles(2.0).unwrap() - lpot_circles(1.0).unwrap();
    let grid: Vec<f64> = (0..=200).map(|i| 0.05 + (5.0 - 0.05) * i as f64 / 200.0).collect();
    let values: Vec<f64> = grid.iter().map(|&t| lpot_circles(t).unwrap()).collect();
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    let drop = lpot_circles(0.05).unwrap() - lpot_circles(0.5).unwrap();
    let ok = decreasing && (diff - oracle).abs() < 1e-6 && drop > 4.0;
    (
        ok,
        format!(
            "circle curve: decreasing={decreasing}, lpot(2)-lpot(1)={diff:.10} (oracle {oracle:.10}, stated literal -0.693140 differs by {:.1e}), lpot(0.05)-lpot(0.5)={drop:.4}",
            (diff + 0.693140).abs()
        ),
    )
}

fn uniformizer_exactness() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_tau, mut worst_res) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let tau = rng.gen_range(0.15..0.8);
        let m = random_moebius(&mut rng);
        let cfg = match apply_moebius(&m, &make_circle_pair(tau).unwrap()) {
            Ok(cfg) => cfg,
            Err(e) => return (false, format!("Möbius image rejected: {e}")),
        };
        let (c1, s1) = image_circle(&m, c(0.0, 0.0), (-2.0 * PI * tau).exp());
        let (c2, s2) = image_circle(&m, c(0.0, 0.0), 1.0);
        let exact = two_circle_modulus(c1, s1, c2, s2);
        match cfg.uniformization() {
            Ok(u) => {
                worst_tau = worst_tau.max((u.tau - exact).abs());
                worst_res = worst_res.max(u.boundary_residual);
            }
            Err(e) => return (false, format!("uniformization failed: {e}")),
        }
    }
    (
        worst_tau < 1e-6 && worst_res < 1e-8,
        format!("uniformizer on 10 Möbius circle pairs: max |tau - exact|={worst_tau:.2e}, max residual={worst_res:.2e}"),
    )
}

fn formula_equivalence() -> (bool, String) {
    let diffs: Vec<f64> = perturbed_configs()
        .iter()
        .map(|cfg| lpot_two_via_lk(cfg).unwrap() - lpot_two(cfg).unwrap().total)
        .collect();
    let n = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / n;
    let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    (
        diffs.len() >= 5 && sd < 1e-3,
        format!("two routes on {} configs: mean difference={mean:.2e}, sample sd={sd:.2e}", diffs.len()),
    )
}

fn moebius_invariance() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for cfg in perturbed_configs().iter().take(3) {
        let base = lpot_two(cfg).unwrap().total;
        for _ in 0..5 {
            let m = random_moebius(&mut rng);
            let image = apply_moebius(&m, cfg).and_then(|img| Ok(lpot_two(&img)?.total));
            match image {
                Ok(v) => worst = worst.max((v - base).abs()),
                Err(e) => return (false, format!("Möbius image failed: {e}")),
            }
        }
    }
    (worst < 1e-4, format!("15 Möbius images of 3 configs: max |delta total|={worst:.2e}"))
}

fn grunsky_equality() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut lowest = f64::INFINITY;
    let mut gapped_min = f64::INFINITY;
    let mut cfgs = perturbed_configs();
    cfgs.push(make_circle_pair(0.3).unwrap());
    for cfg in &cfgs {
        let u = cfg.uniformization().unwrap();
        let g = grunsky(u, 128).unwrap();
        worst = worst.max(g.gap.abs());
        lowest = lowest.min(g.gap);
        // pull f₁ into a smaller disk: f₁(0.9z) no longer fills D₁
        let mut shrunk = u.clone();
        for (k, p) in shrunk.f1.pos.iter_mut().enumerate() {
            *p *= 0.9f64.powi(k as i32);
        }
        for (k, p) in shrunk.f1.log_pos.iter_mut().enumerate().skip(1) {
            *p *= 0.9f64.powi(k as i32);
        }
        shrunk.f1.log_pos[0] += 0.9f64.ln();
        gapped_min = gapped_min.min(grunsky(&shrunk, 128).unwrap().gap);
    }
    (
        worst < 1e-6 && lowest >= -1e-8 && gapped_min > 1e-3,
        format!("Grunsky on {} configs: max |gap|={worst:.2e}, min gap={lowest:.2e}, min gapped={gapped_min:.3e}", cfgs.len()),
    )
}

fn polyakov_alvarez_consistency() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let r: f64 = rng.gen_range(0.1..10.0);
        let s: f64 = rng.gen_range(0.1..10.0);
        let lhs = det_disk(FlatDisk::new(s * r).unwrap()) - det_disk(FlatDisk::new(r).unwrap());
        let field = ConformalFactorField::from_fn(FlatDomain::Disk(FlatDisk::new(r).unwrap()), 8, 8, |_, _| s.ln()).unwrap();
        worst = worst.max((lhs - polyakov_alvarez(&field).unwrap()).abs());
    }
    let sigma = |x: f64, y: f64| 0.3 * x + 0.1 * (x * x - y * y);
    let mut refine = 0.0f64;
    for domain in [FlatDomain::Disk(FlatDisk::new(1.0).unwrap()), FlatDomain::Annulus(FlatAnnulus::new(0.3, 1.0).unwrap())] {
        let coarse = ConformalFactorField::from_fn(domain, 12, 16, sigma).unwrap();
        let fine = ConformalFactorField::from_fn(domain, 48, 64, sigma).unwrap();
        refine = refine.max((conformal_anomaly(&coarse).unwrap() - conformal_anomaly(&fine).unwrap()).abs());
    }
    (
        worst < 1e-10 && refine < 1e-8,
        format!("det_disk scaling vs Polyakov-Alvarez: max err={worst:.2e}; anomaly x4 refinement diff={refine:.2e}"),
    )
}

fn variational_formula() -> (bool, String) {
    let cfg = perturbed_pair();
    let nu = BeltramiBump::new(c(1.6, 0.3), 0.3, c(0.1, 0.0)).unwrap();
    let v = variation_check(&cfg, &nu, 1e-3).unwrap();
    let circles = make_circle_pair(0.5).unwrap();
    let w = variation_check(&circles, &nu, 1e-3).unwrap();
    let ok = v.rel_err < 0.05 && w.rhs.abs() < 1e-12 && w.fd.abs() < 1e-6;
    (
        ok,
        format!(
            "bump at 1.6+0.3i, radius 0.3, amplitude 0.1: fd={:.8e}, Schwarzian={:.8e}, rel err={:.2e}; circle pair fd={:.1e}, Schwarzian={:.1e}",
            v.fd, v.rhs, v.rel_err, w.fd, w.rhs
        ),
    )
}

fn classification(c: f64, h: f64, expect: Classification) -> (bool, String) {
    let t = make_character_trivialization(c, vec![(h, 1)]).unwrap();
    let a = classify_minimizer(&t, (0.05, 20.0), 64).unwrap();
    let b = classify_minimizer(&t, (0.05, 20.0), 256).unwrap();
    let stable = match (a.tau_star, b.tau_star) {
        (Some(x), Some(y)) => (x - y).abs() < 1e-8,
        (None, None) => true,
        _ => false,
    };
    let ok = a.classification == expect && b.classification == expect && stable;
    let star = b.tau_star.map(|x| format!(", tau*={x:.12}")).unwrap_or_default();
    (ok, format!("characters (c,h)=({c},{h}): {:?} / {:?} at grids 64/256{star}, expected {expect:?}", a.classification, b.classification))
}

fn zeta_classification() -> (bool, String) {
    let mut labels = Vec::new();
    let mut ok = true;
    for c in [0.5, 1.0, 2.0] {
        let r = classify_minimizer(&make_zeta_trivialization(c).unwrap(), (0.05, 20.0), 64).unwrap();
        ok &= r.classification != Classification::InteriorMinimum && r.tau_star.is_none();
        labels.push(format!("c={c}: {:?}", r.classification));
    }
    (ok, format!("zeta trivialization: {}", labels.join(", ")))
}

#[test]
fn acceptance() {
    let _ = writeln!(std::io::stderr());
    let start = Instant::now();
    let mut outcomes = vec![
        run("1", secs(1), circle_curve),
        run("2", secs(30), uniformizer_exactness),
        run("3", secs(120), formula_equivalence),
        run("4", secs(600), moebius_invariance),
        run("5", secs(600), grunsky_equality),
        run("6", secs(600), polyakov_alvarez_consistency),
        run("7", secs(120), variational_formula),
    ];
    let start8 = Instant::now();
    outcomes.push(run("8a", secs(10), || classification(0.3, 0.2, Classification::InteriorMinimum)));
    outcomes.push(run("8b", secs(10), || classification(1.0, 1.0, Classification::InfimumAtInfinity)));
    outcomes.push(run("8c", secs(10), zeta_classification));
    let demo = run("8-demo", secs(10), || classification(0.3, 0.0, Classification::InteriorMinimum));
    let part8 = start8.elapsed();
    let total = start.elapsed();
    outcomes.push(run("9", secs(600), || {
        (total < secs(600), format!("acceptance run {:.1}s (criterion 8 total {:.2}s); full suite time is in the cargo summary", total.as_secs_f64(), part8.as_secs_f64()))
    }));

    let unexpected: Vec<&Outcome> =
        outcomes.iter().filter(|o| o.pass == KNOWN_FAILING.contains(&o.id)).collect();
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let _ = writeln!(
        std::io::stderr(),
        "acceptance: {passed}/{} criteria pass; known failing: {:?}",
        outcomes.len(),
        KNOWN_FAILING
    );
    assert!(demo.pass, "interior-minimum demonstration failed: {}", demo.detail);
    assert!(
        unexpected.is_empty(),
        "criteria deviating from the expected outcome: {:?}",
        unexpected.iter().map(|o| (o.id, &o.detail, o.elapsed)).collect::<Vec<_>>()
    );
}
