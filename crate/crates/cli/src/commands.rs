use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use twoloop::cft::{classify_minimizer, criterion, CriterionResult, Trivialization};
use twoloop::loops::{apply_moebius, Diagnostics, MoebiusMap, TwoLoopConfig};
use twoloop::potentials::{grunsky, lpot_circles, lpot_two_from, lpot_two_via_lk_from, EnergyQuadrature, PotentialBreakdown};
use twoloop::uniformize::{ConformalMapSeries, UniformizeOptions, Uniformization};
use twoloop::variation::{variation_check, BeltramiBump};

use crate::output::{csv, emit, json};
use crate::{Cli, Command, Mode, Numerics, Route};

/// Input and parse failures count as validation errors.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<twoloop::Error>() {
        Some(err) => err.exit_code() as u8,
        None => 2,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn options(n: &Numerics) -> Result<UniformizeOptions> {
    if !(n.tol > 0.0) {
        return Err(twoloop::Error::Validation(format!("tolerance must be positive, got {}", n.tol)).into());
    }
    let mut opts = UniformizeOptions { tol: n.tol, ..Default::default() };
    if let Some(d) = n.degree {
        if d == 0 {
            return Err(twoloop::Error::Validation("degree must be positive".into()).into());
        }
        opts = opts.with_degree(d);
    }
    Ok(opts)
}

fn load(path: &Path, n: &Numerics) -> Result<(TwoLoopConfig, UniformizeOptions)> {
    let cfg: TwoLoopConfig = read_json(path)?;
    let opts = options(n)?;
    cfg.uniformization_with(&opts)?;
    Ok((cfg, opts))
}

pub fn run(cli: &Cli) -> Result<()> {
    let out = cli.out.as_deref();
    let text = match &cli.command {
        Command::Uniformize { config, numerics } => uniformize(config, numerics)?,
        Command::Potential { config, route, numerics, moebius_trials, seed } => {
            potential(config, *route, numerics, *moebius_trials, *seed)?
        }
        Command::ScanTau { range, grid, mode, trivialization } => scan_tau(*range, *grid, *mode, trivialization.as_deref())?,
        Command::Grunsky { config, degree, tol } => {
            let (cfg, _) = load(config, &Numerics { degree: None, tol: *tol })?;
            json(&grunsky(cfg.uniformization()?, *degree)?)?
        }
        Command::Criterion { trivialization, range, grid } => {
            let t: Trivialization = read_json(trivialization)?;
            json(&CriterionReport { trivialization: t.name(), result: classify_minimizer(&t, *range, *grid)? })?
        }
        Command::VariationCheck { config, center, radius, amplitude, eps, tol } => {
            let (cfg, _) = load(config, &Numerics { degree: None, tol: *tol })?;
            let nu = BeltramiBump::new(*center - cfg.origin(), *radius, *amplitude)?;
            json(&variation_check(&cfg, &nu, *eps)?)?
        }
    };
    emit(&text, out)
}

#[derive(Serialize)]
struct UniformizeReport<'a> {
    tau: f64,
    boundary_residual: f64,
    log_deriv_ratio: f64,
    diagnostics: Diagnostics,
    f1: &'a ConformalMapSeries,
    fa: &'a ConformalMapSeries,
    f2: &'a ConformalMapSeries,
}

fn uniformize(path: &Path, n: &Numerics) -> Result<String> {
    let (cfg, _) = load(path, n)?;
    let u: &Uniformization = cfg.uniformization()?;
    json(&UniformizeReport {
        tau: u.tau,
        boundary_residual: u.boundary_residual,
        log_deriv_ratio: u.log_deriv_ratio(),
        diagnostics: cfg.validate(),
        f1: &u.f1,
        fa: &u.fa,
        f2: &u.f2,
    })
}

#[derive(Serialize)]
struct MoebiusTrial {
    map: MoebiusMap,
    total: f64,
    deviation: f64,
}

#[derive(Serialize)]
struct PotentialReport {
    tau: f64,
    boundary_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    breakdown: Option<PotentialBreakdown>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lk_total: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    route_difference: Option<f64>,
    grunsky_gap: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    moebius: Vec<MoebiusTrial>,
}

/// Random map s·e^{iα}(z + a)/(1 + āz) then z/(1 + cz), |a|, |c| ≤ 0.3.
pub fn random_moebius(rng: &mut ChaCha8Rng) -> Result<MoebiusMap> {
    let mut disk_point = |rmax: f64| Complex64::from_polar(rmax * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
    let a = disk_point(0.3);
    let c = disk_point(0.3);
    let scale = rng.gen_range(0.5..2.0);
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    Ok(MoebiusMap::normalized(a, scale, angle, c)?)
}

fn potential(path: &Path, route: Route, n: &Numerics, trials: usize, seed: u64) -> Result<String> {
    let (cfg, opts) = load(path, n)?;
    let u = cfg.uniformization()?;
    let q = EnergyQuadrature::default();
    let breakdown = if route != Route::Lk { Some(lpot_two_from(u, &q)?) } else { None };
    let lk_total = if route != Route::Preschwarzian { Some(lpot_two_via_lk_from(u, &q)?) } else { None };
    let route_difference = match (breakdown, lk_total) {
        (Some(b), Some(l)) => Some(l - b.total),
        _ => None,
    };
    let reference = breakdown.map(|b| b.total).or(lk_total).unwrap_or(f64::NAN);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moebius = Vec::with_capacity(trials);
    for _ in 0..trials {
        let m = random_moebius(&mut rng)?;
        let image = apply_moebius(&m, &cfg)?;
        let ui = image.uniformization_with(&opts)?;
        let total = if route == Route::Lk { lpot_two_via_lk_from(ui, &q)? } else { lpot_two_from(ui, &q)?.total };
        moebius.push(MoebiusTrial { map: m, total, deviation: total - reference });
    }
    json(&PotentialReport {
        tau: u.tau,
        boundary_residual: u.boundary_residual,
        breakdown,
        lk_total,
        route_difference,
        grunsky_gap: grunsky(u, 128)?.gap,
        moebius,
    })
}

#[derive(Serialize)]
struct CriterionReport {
    trivialization: String,
    #[serde(flatten)]
    result: CriterionResult,
}

fn scan_tau(range: (f64, f64), grid: usize, mode: Mode, triv: Option<&Path>) -> Result<String> {
    if grid < 2 {
        return Err(twoloop::Error::Validation(format!("grid needs at least 2 points, got {grid}")).into());
    }
    let (a, b) = range;
    // written so that grid points such as τ = 1 come out exact
    let taus = (0..grid).map(|i| (a * (grid - 1 - i) as f64 + b * i as f64) / (grid - 1) as f64);
    match mode {
        Mode::Circles => {
            let base = lpot_circles(1.0)?;
            let rows: Result<Vec<Vec<f64>>> = taus.map(|t| Ok(vec![t, lpot_circles(t)? - base])).collect();
            csv(&["tau", "lpot_relative"], &rows?)
        }
        Mode::Criterion => {
            let path = triv.ok_or_else(|| twoloop::Error::Validation("criterion mode needs --trivialization".into()))?;
            let t: Trivialization = read_json(path)?;
            let rows: Result<Vec<Vec<f64>>> =
                taus.map(|tau| Ok(vec![(-std::f64::consts::PI / tau).exp(), criterion(&t, tau)?])).collect();
            csv(&["q", "log_g"], &rows?)
        }
    }
}
