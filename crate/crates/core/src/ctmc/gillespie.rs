use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::decay::{DecayEstimate, DecayMethod};
use crate::error::{Error, Result};
use crate::law::BranchingLaw;

/// Paths whose state exceeds this are stopped and counted as alive.
pub const DEFAULT_STATE_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub i0: usize,
    pub t_max: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub state_cap: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurvivalSamples {
    pub times: Vec<f64>,
    pub survival: Vec<f64>,
    /// Binomial standard error `√(p(1−p)/n)`.
    pub stderr: Vec<f64>,
    pub alive: Vec<usize>,
    pub n_paths: usize,
    /// Paths stopped at the state cap before `t_max`.
    pub censored: usize,
}

/// Extinction time of one path, `+∞` if it survives to `t_max`. The flag
/// marks paths stopped at the state cap.
fn run_path(law: &BranchingLaw<f64>, cfg: &SimConfig, rng: &mut ChaCha8Rng) -> (f64, bool) {
    let out = -law.b[1];
    let mut state = cfg.i0;
    let mut t = 0.0;
    loop {
        let rate = (state as f64) * (state as f64) * out;
        let u: f64 = rng.gen();
        t += -(1.0 - u).ln() / rate;
        if t > cfg.t_max {
            return (f64::INFINITY, false);
        }
        let mut pick = rng.gen::<f64>() * out;
        if pick < law.b[0] {
            state -= 1;
            if state == 0 {
                return (t, false);
            }
            continue;
        }
        pick -= law.b[0];
        let mut k = 2;
        while k + 1 < law.b.len() && pick >= law.b[k] {
            pick -= law.b[k];
            k += 1;
        }
        state += k - 1;
        if state > cfg.state_cap {
            return (f64::INFINITY, true);
        }
    }
}

/// Simulates `n_paths` jump paths from `i0` and reports the fraction alive
/// at each of `times`.
///
/// Path `p` draws from ChaCha8 seeded with `seed` on stream `p`, so the
/// result does not depend on how rayon schedules the paths.
pub fn gillespie_paths(
    law: &BranchingLaw<f64>,
    cfg: &SimConfig,
    times: &[f64],
) -> Result<SurvivalSamples> {
    law.ensure_subcritical()?;
    if cfg.i0 == 0
        || cfg.n_paths == 0
        || !(cfg.t_max > 0.0 && cfg.t_max.is_finite())
        || cfg.state_cap < cfg.i0
    {
        return Err(Error::InvalidSeedConfig(format!(
            "need i0 >= 1, n_paths >= 1, finite t_max > 0 and state_cap >= i0; got {cfg:?}"
        )));
    }
    if let Some(t) = times.iter().find(|&&t| !(0.0..=cfg.t_max).contains(&t)) {
        return Err(Error::InvalidSeedConfig(format!(
            "sample time {t} outside [0, {}]",
            cfg.t_max
        )));
    }
    let ends: Vec<(f64, bool)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(p as u64);
            run_path(law, cfg, &mut rng)
        })
        .collect();
    let censored = ends.iter().filter(|e| e.1).count();
    let n = cfg.n_paths as f64;
    let alive: Vec<usize> = times
        .iter()
        .map(|&t| ends.iter().filter(|e| e.0 > t).count())
        .collect();
    let survival: Vec<f64> = alive.iter().map(|&a| a as f64 / n).collect();
    let stderr = survival
        .iter()
        .map(|&p| (p * (1.0 - p) / n).sqrt())
        .collect();
    Ok(SurvivalSamples {
        times: times.to_vec(),
        survival,
        stderr,
        alive,
        n_paths: cfg.n_paths,
        censored,
    })
}

/// Weighted least-squares decay rate from simulated survival on
/// `[t_lo, t_hi]`, using points with at least `min_alive` survivors.
///
/// `log p̂` has variance about `(1 − p)/(n p)`; the returned standard error
/// is the usual WLS slope error.
pub fn estimate_decay_monte_carlo(
    samples: &SurvivalSamples,
    t_lo: f64,
    t_hi: f64,
    min_alive: usize,
) -> Result<DecayEstimate<f64>> {
    let n = samples.n_paths as f64;
    let pts: Vec<(f64, f64, f64)> = samples
        .times
        .iter()
        .zip(&samples.survival)
        .zip(&samples.alive)
        .filter(|((&t, &p), &a)| t >= t_lo && t <= t_hi && a >= min_alive.max(1) && p < 1.0)
        .map(|((&t, &p), _)| (t, p.ln(), n * p / (1.0 - p)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::NoStableWindow);
    }
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let tm = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let ym = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - tm).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - tm) * (p.1 - ym)).sum();
    let slope = sxy / sxx;
    let slopes = pts
        .windows(2)
        .map(|w| (w[1].0, -(w[1].1 - w[0].1) / (w[1].0 - w[0].0)))
        .collect();
    Ok(DecayEstimate {
        lambda_hat: -slope,
        method: DecayMethod::MonteCarlo,
        window: (pts[0].0, pts[pts.len() - 1].0),
        n_states: None,
        n_paths: Some(samples.n_paths),
        stderr: Some((1.0 / sxx).sqrt()),
        slopes,
        history: Vec::new(),
        converged: true,
        lambda_p11: None,
        curve: Vec::new(),
    })
}
