use serde::Serialize;

use super::generator::TruncatedGenerator;
use super::uniformization::{transient, TransientPoint};
use crate::error::{Error, Result};
use crate::law::BranchingLaw;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayMethod {
    Uniformization,
    MonteCarlo,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayEstimate<T> {
    pub lambda_hat: T,
    pub method: DecayMethod,
    /// Fit window `(T₁, T₂)`.
    pub window: (T, T),
    pub n_states: Option<usize>,
    pub n_paths: Option<usize>,
    pub stderr: Option<T>,
    /// `(t, −Δ log x / Δt)` between consecutive grid times.
    pub slopes: Vec<(T, T)>,
    /// `(N, lambda_hat)` per state cap tried.
    pub history: Vec<(usize, T)>,
    pub converged: bool,
    /// Same fit applied to `P₁₁`.
    pub lambda_p11: Option<T>,
    #[serde(skip)]
    pub curve: Vec<TransientPoint<T>>,
}

#[derive(Debug, Clone, Copy)]
pub struct DecayOptions {
    /// First state cap; doubled until estimates agree.
    pub n0: usize,
    pub n_max: usize,
    pub t_max: f64,
    /// Number of geometric grid times.
    pub points: usize,
    /// `t_max / t_min`.
    pub span: f64,
    pub tol: f64,
    /// Allowed relative spread of slopes inside the fit window.
    pub slope_spread: f64,
    /// Relative agreement between successive state caps.
    pub agreement: f64,
}

impl Default for DecayOptions {
    fn default() -> Self {
        Self {
            n0: 64,
            n_max: 1024,
            t_max: 10.0,
            points: 64,
            span: 256.0,
            tol: 1e-13,
            slope_spread: 0.02,
            agreement: 0.01,
        }
    }
}

/// `points` times from `t_max/span` to `t_max`, equally spaced in `log t`.
pub fn geometric_times<T: Scalar>(t_max: T, span: T, points: usize) -> Vec<T> {
    let last = T::from_usize_lossy(points.max(2) - 1);
    (0..points.max(2))
        .map(|i| t_max * span.powf(T::from_usize_lossy(i) / last - T::one()))
        .collect()
}

/// Local decay rates between consecutive points with positive values.
pub fn two_point_slopes<T: Scalar>(ts: &[T], ys: &[T]) -> Vec<(T, T)> {
    ts.windows(2)
        .zip(ys.windows(2))
        .filter(|(_, y)| y[0] > T::zero() && y[1] > T::zero())
        .map(|(t, y)| (t[1], -(y[1].ln() - y[0].ln()) / (t[1] - t[0])))
        .collect()
}

/// Longest run of consecutive slopes whose spread `(max − min)/|mean|` stays
/// below `spread`, preferring the latest on ties. Returns index bounds into
/// `slopes`, inclusive. At least three slopes are required.
pub fn stable_window<T: Scalar>(slopes: &[(T, T)], spread: f64) -> Option<(usize, usize)> {
    let spread = T::lit(spread);
    let mut best: Option<(usize, usize)> = None;
    for a in 0..slopes.len() {
        let (mut lo, mut hi, mut sum) = (T::infinity(), T::neg_infinity(), T::zero());
        for (b, &(_, v)) in slopes.iter().enumerate().skip(a) {
            lo = lo.min(v);
            hi = hi.max(v);
            sum += v;
            let mean = sum / T::from_usize_lossy(b - a + 1);
            if mean.is_nan() || mean <= T::zero() || hi - lo > spread * mean {
                break;
            }
            if b - a >= 2 && best.is_none_or(|(x, y)| b - a >= y - x) {
                best = Some((a, b));
            }
        }
    }
    best
}

/// Least-squares slope of `log y` against `t`.
pub fn log_linear_slope<T: Scalar>(ts: &[T], ys: &[T]) -> T {
    let n = T::from_usize_lossy(ts.len());
    let lys: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    let tm = ts.iter().copied().sum::<T>() / n;
    let ym = lys.iter().copied().sum::<T>() / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (&t, &y) in ts.iter().zip(&lys) {
        sxy += (t - tm) * (y - ym);
        sxx += (t - tm) * (t - tm);
    }
    sxy / sxx
}

struct Fit<T> {
    lambda: T,
    window: (T, T),
    slopes: Vec<(T, T)>,
    lambda_p11: Option<T>,
}

fn fit_curve<T: Scalar>(curve: &[TransientPoint<T>], spread: f64) -> Result<Fit<T>> {
    let pts: Vec<&TransientPoint<T>> = curve.iter().filter(|p| p.survival > T::zero()).collect();
    let ts: Vec<T> = pts.iter().map(|p| p.t).collect();
    let ys: Vec<T> = pts.iter().map(|p| p.survival).collect();
    let slopes = two_point_slopes(&ts, &ys);
    let (a, b) = stable_window(&slopes, spread).ok_or(Error::NoStableWindow)?;
    // slope k spans points k and k+1
    let (ta, tb) = (&ts[a..=b + 1], &ys[a..=b + 1]);
    let lambda = -log_linear_slope(ta, tb);

    let p11: Vec<T> = pts[a..=b + 1].iter().map(|p| p.p11).collect();
    let lambda_p11 = p11
        .iter()
        .all(|&p| p > T::zero())
        .then(|| -log_linear_slope(ta, &p11));
    Ok(Fit {
        lambda,
        window: (ta[0], ta[ta.len() - 1]),
        slopes,
        lambda_p11,
    })
}

/// Decay rate of the in-range survival of the truncated chain, fitted on a
/// stable window and confirmed by doubling `N`.
pub fn estimate_decay_uniformization<T: Scalar>(
    law: &BranchingLaw<T>,
    opts: &DecayOptions,
) -> Result<DecayEstimate<T>> {
    law.ensure_subcritical()?;
    if !(opts.t_max > 0.0 && opts.t_max.is_finite() && opts.span > 1.0 && opts.points >= 4) {
        return Err(Error::InvalidInput(format!("bad decay options {opts:?}")));
    }
    let times = geometric_times(T::lit(opts.t_max), T::lit(opts.span), opts.points);
    let mut history = Vec::new();
    let mut n = opts.n0.max(10);
    let mut best: Option<(usize, Fit<T>, Vec<TransientPoint<T>>)> = None;
    let mut converged = false;
    loop {
        let gen = TruncatedGenerator::new(law, n)?;
        let curve = transient(&gen, &times, opts.tol)?;
        match fit_curve(&curve, opts.slope_spread) {
            Ok(fit) => {
                history.push((n, fit.lambda));
                if let Some((_, prev, _)) = &best {
                    if (fit.lambda - prev.lambda).abs() <= T::lit(opts.agreement) * fit.lambda {
                        converged = true;
                    }
                }
                best = Some((n, fit, curve));
            }
            Err(_) => best = None,
        }
        if converged || n * 2 > opts.n_max {
            break;
        }
        n *= 2;
    }
    let (n, fit, curve) = best.ok_or(Error::NoStableWindow)?;
    Ok(DecayEstimate {
        lambda_hat: fit.lambda,
        method: DecayMethod::Uniformization,
        window: fit.window,
        n_states: Some(n),
        n_paths: None,
        stderr: None,
        slopes: fit.slopes,
        history,
        converged,
        lambda_p11: fit.lambda_p11,
        curve,
    })
}
