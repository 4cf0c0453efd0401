//! Orchestration behind the `qmbp` binary: reads a JSON run config, runs the
//! requested pipelines in dependency order, cross-checks their results and
//! emits a JSON report plus CSV curves.

pub mod config;
mod report;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use qmbp::bounds::{bounds_report, compare_bounds, BoundsReport, Comparison};
use qmbp::ctmc::{
    estimate_decay_monte_carlo, estimate_decay_uniformization, geometric_times, gillespie_paths,
    DecayEstimate, DecayOptions, SimConfig, SurvivalSamples, DEFAULT_STATE_CAP,
};
use qmbp::{export, hardy, law, sl_eigen, Eigen, Hardy, Law};

pub use config::{Pipeline, RunConfig};
pub use report::{Check, PipelineError, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

const STATIONARY_TOL: f64 = 1e-6;
const CONTAINMENT_SLACK: f64 = 1e-9;
const SANDWICH_SLACK: f64 = 1e-6;
const HARDY_INTERVAL_SLACK: f64 = 0.02;
const EIGEN_AGREEMENT: f64 = 0.05;

/// Everything computed in one run. Missing members were not requested or
/// failed; failures are listed in `errors`.
#[derive(Debug, Default)]
pub struct Outcome {
    pub rates: Vec<f64>,
    pub law: Option<Law>,
    pub hardy: Option<Hardy>,
    pub bounds: Option<(BoundsReport<f64>, Comparison<f64>)>,
    pub eigen: Option<Eigen>,
    pub decay: Option<DecayEstimate<f64>>,
    pub mc: Option<(SurvivalSamples, Option<DecayEstimate<f64>>)>,
    pub errors: Vec<PipelineError>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn report(&self) -> Report {
        report::build(self)
    }

    fn fail(&mut self, pipeline: Pipeline, err: qmbp::Error) {
        self.errors.push(PipelineError {
            pipeline,
            error: err.to_string(),
        });
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail,
        });
    }
}

/// Runs every pipeline the config asks for. Module errors are recorded
/// against their pipeline; only config problems abort.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rates = cfg.expand_rates()?;
    let mut out = Outcome {
        rates: rates.clone(),
        ..Outcome::default()
    };
    let pipelines = cfg.resolved_pipelines();
    let tol = &cfg.tolerances;

    let law = match law::validate_law(&rates) {
        Ok(l) => l,
        Err(e) => {
            out.fail(Pipeline::Validate, e);
            return Ok(out);
        }
    };

    if pipelines.contains(&Pipeline::Hardy) {
        match hardy::hardy_index(&law, tol.hardy_rel_tol) {
            Ok(h) => {
                let d = h.phi_prime_at_star;
                out.check(
                    "hardy.stationary",
                    d.abs() < STATIONARY_TOL,
                    format!("phi'(s*) = {d:e}"),
                );
                out.hardy = Some(h);
            }
            Err(e) => out.fail(Pipeline::Hardy, e),
        }
    }

    if pipelines.contains(&Pipeline::Bounds) {
        match bounds_report(&law, tol.hardy_rel_tol) {
            Ok(rep) => {
                let cmp = compare_bounds(&rep, &law);
                if let Some(d2) = out.hardy.as_ref().map(|h| h.d2) {
                    for e in rep.entries.iter().filter(|e| e.applicable) {
                        let ok = e.contains_d2(d2, CONTAINMENT_SLACK);
                        let detail = format!("{:?} <= {d2} <= {:?}", e.d2_lo, e.d2_hi);
                        out.check(format!("bounds.contains_d2.{}", e.name), ok, detail);
                    }
                }
                let ok = cmp.pairs.iter().all(|p| p.overlap);
                let detail = format!(
                    "best lambda interval [{}, {}]",
                    cmp.best_lambda_lo, cmp.best_lambda_hi
                );
                out.check("bounds.lambda_overlap", ok, detail);
                out.bounds = Some((rep, cmp));
            }
            Err(e) => out.fail(Pipeline::Bounds, e),
        }
    }

    if pipelines.contains(&Pipeline::Eigen) {
        match sl_eigen::refine_levels(&law, tol.eigen_rel_tol, tol.eigen_levels) {
            Ok(eig) => {
                if let Some((lo, hi)) = out.hardy.as_ref().map(|h| (h.lambda_lo, h.lambda_hi)) {
                    let ok = eig.ell0 >= lo * (1.0 - SANDWICH_SLACK)
                        && eig.ell0 <= hi * (1.0 + SANDWICH_SLACK);
                    out.check(
                        "eigen.hardy_sandwich",
                        ok,
                        format!("{lo} <= {} <= {hi}", eig.ell0),
                    );
                }
                let last = eig.history.len();
                out.check(
                    "eigen.converged",
                    eig.converged,
                    format!("{last} levels, residual {:e}", eig.residual),
                );
                out.eigen = Some(eig);
            }
            Err(e) => out.fail(Pipeline::Eigen, e),
        }
    }

    if pipelines.contains(&Pipeline::Ctmc) {
        run_ctmc(cfg, &law, &mut out);
    }
    out.law = Some(law);
    Ok(out)
}

fn run_ctmc(cfg: &RunConfig, law: &Law, out: &mut Outcome) {
    let ell_ref = match (&out.eigen, &out.hardy) {
        (Some(e), _) => e.ell0,
        (None, Some(h)) => 0.5 / h.d2,
        (None, None) => 1.0,
    };
    let c = &cfg.ctmc;
    let t_max = c.horizon / ell_ref;
    let defaults = DecayOptions::default();
    let opts = DecayOptions {
        n0: c.n0,
        n_max: c.n_max,
        t_max,
        points: c.points,
        span: defaults.span,
        tol: cfg.tolerances.ctmc_tol,
        slope_spread: cfg.tolerances.slope_spread,
        agreement: cfg.tolerances.state_cap_agreement,
    };
    let est = match estimate_decay_uniformization(law, &opts) {
        Ok(e) => e,
        Err(e) => return out.fail(Pipeline::Ctmc, e),
    };
    let lam = est.lambda_hat;
    if let Some((lo, hi)) = out.hardy.as_ref().map(|h| (h.lambda_lo, h.lambda_hi)) {
        let (lo, hi) = (
            lo * (1.0 - HARDY_INTERVAL_SLACK),
            hi * (1.0 + HARDY_INTERVAL_SLACK),
        );
        out.check(
            "ctmc.hardy_interval",
            lam >= lo && lam <= hi,
            format!("{lo} <= {lam} <= {hi}"),
        );
    }
    if let Some(ell0) = out.eigen.as_ref().map(|e| e.ell0) {
        let rel = (lam - ell0).abs() / ell0;
        out.check(
            "ctmc.matches_eigen",
            rel <= EIGEN_AGREEMENT,
            format!("|lambda_hat - ell0| / ell0 = {rel:e}"),
        );
    }
    out.check(
        "ctmc.converged",
        est.converged,
        format!(
            "N history {:?}",
            est.history.iter().map(|h| h.0).collect::<Vec<_>>()
        ),
    );

    if c.mc_paths > 0 {
        let times = geometric_times(t_max, defaults.span, c.points);
        let sim = SimConfig {
            i0: c.mc_i0,
            t_max,
            n_paths: c.mc_paths,
            seed: cfg.seed,
            state_cap: DEFAULT_STATE_CAP,
        };
        match gillespie_paths(law, &sim, &times) {
            Ok(samples) => {
                let fit =
                    estimate_decay_monte_carlo(&samples, est.window.0, t_max, c.mc_min_alive).ok();
                out.mc = Some((samples, fit));
            }
            Err(e) => out.fail(Pipeline::Ctmc, e),
        }
    }
    out.decay = Some(est);
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
}

fn io_at(dir: &Path, name: &str) -> impl Fn(std::io::Error) -> CliError {
    let path = dir.join(name).display().to_string();
    move |source| CliError::Io {
        path: path.clone(),
        source,
    }
}

/// Writes `report.json` and whichever curves exist into `dir`.
pub fn emit(out: &Outcome, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_at(dir, ""))?;
    let mut w = create(dir, "report.json")?;
    w.write_all(out.report().to_json().as_bytes())
        .map_err(io_at(dir, "report.json"))?;
    w.flush().map_err(io_at(dir, "report.json"))?;

    if let Some(h) = &out.hardy {
        export::write_phi_curve(create(dir, "phi.csv")?, &h.curve)
            .map_err(io_at(dir, "phi.csv"))?;
    }
    if let Some(e) = &out.eigen {
        export::write_eigenfunction(create(dir, "eigenfunction.csv")?, &e.eigfun)
            .map_err(io_at(dir, "eigenfunction.csv"))?;
    }
    if let Some(d) = &out.decay {
        let rows: Vec<(f64, f64, f64)> = d.curve.iter().map(|p| (p.t, p.survival, 0.0)).collect();
        export::write_survival(create(dir, "survival.csv")?, &rows)
            .map_err(io_at(dir, "survival.csv"))?;
    }
    if let Some((s, _)) = &out.mc {
        let rows: Vec<(f64, f64, f64)> = s
            .times
            .iter()
            .zip(&s.survival)
            .zip(&s.stderr)
            .map(|((&t, &p), &e)| (t, p, e))
            .collect();
        export::write_survival(create(dir, "survival_mc.csv")?, &rows)
            .map_err(io_at(dir, "survival_mc.csv"))?;
    }
    Ok(())
}
