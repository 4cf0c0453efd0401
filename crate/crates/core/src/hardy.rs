//! The Hardy index `D² = sup_{s∈(0,1)} (−log s)·∫₀ˢ dr/B(r)` and the decay
//! interval `[1/(4D²), 1/D²]` it implies.
//!
//! Everything here works on a [`Profile`]: a polynomial `P` that is positive
//! on `[0, 1]` and plays the role of `A` in `B(r) = (1 − r) A(r)`. The law's
//! own `A` is one profile; the straight-line and parabolic envelopes used by
//! [`crate::bounds`] are others.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::golden;
use crate::law::BranchingLaw;
use crate::poly::Poly;
use crate::quadrature;
use crate::Scalar;

pub const DEFAULT_REL_TOL: f64 = 1e-10;
/// Abscissa tolerance of the golden-section refinement.
pub const ABSCISSA_TOL: f64 = 1e-10;
/// Grid maxima within this distance of the best are reported.
pub const LOCAL_MAX_WINDOW: f64 = 1e-9;

const PHI_ZERO_BELOW: f64 = 1e-300;
const PHI_ZERO_ABOVE: f64 = 1.0 - 1e-16;

#[derive(Debug, Clone, Serialize)]
pub struct HardyResult<T> {
    /// The Hardy index.
    pub d2: T,
    /// Maximizing abscissa.
    pub s_star: T,
    /// `(s, φ(s))` on the scan grid.
    pub curve: Vec<(T, T)>,
    /// Estimated absolute quadrature error of `φ(s_star)`.
    pub quad_err: T,
    pub lambda_lo: T,
    pub lambda_hi: T,
    /// Grid-local maxima within [`LOCAL_MAX_WINDOW`] of the best value.
    pub local_maxima: Vec<(T, T)>,
    /// Central-difference estimate of `φ'(s_star)`.
    pub phi_prime_at_star: T,
}

/// A polynomial `P > 0` on `[0, 1]` with the pieces needed to integrate
/// `1/((1 − r) P(r))` without a singular quadrature.
#[derive(Debug, Clone)]
pub struct Profile<T> {
    poly: Poly<T>,
    quotient: Poly<T>,
    p_at_one: T,
}

impl<T: Scalar> Profile<T> {
    pub fn new(poly: Poly<T>) -> Result<Self> {
        if !poly.is_positive_on(T::zero(), T::one()) {
            return Err(Error::BadParameters(
                "profile must be positive on [0, 1]".to_string(),
            ));
        }
        let quotient = poly.difference_quotient_at_one();
        let p_at_one = poly.eval(T::one());
        Ok(Self {
            poly,
            quotient,
            p_at_one,
        })
    }

    /// The law's own `A`.
    pub fn of_law(law: &BranchingLaw<T>) -> Result<Self> {
        law.ensure_subcritical()?;
        Self::new(law.a_poly().clone())
    }

    pub fn poly(&self) -> &Poly<T> {
        &self.poly
    }

    /// `∫₀ˢ dr / ((1 − r) P(r))` and its absolute error estimate.
    ///
    /// Split as `−log(1 − s)/P(1) + ∫₀ˢ Q(r)/(P(r) P(1)) dr` where
    /// `Q(r) = (P(1) − P(r))/(1 − r)` is a polynomial, so only a smooth
    /// integrand is left for the quadrature.
    pub fn integral(&self, s: T, rel_tol: f64) -> Result<(T, T)> {
        if !(s > T::zero() && s < T::one()) {
            return Err(Error::InvalidInput(format!("s = {s} must lie in (0, 1)")));
        }
        let singular = -(-s).ln_1p() / self.p_at_one;
        let smooth = quadrature::integrate(
            |r: T| self.quotient.eval(r) / (self.poly.eval(r) * self.p_at_one),
            T::zero(),
            s,
            rel_tol,
            0.0,
        )?;
        let value = singular + smooth.value;
        let err = smooth.abs_err + value.abs() * T::epsilon() * T::lit(4.0);
        Ok((value, err))
    }

    /// `φ(s) = (−log s) · ∫₀ˢ dr/((1 − r)P(r))`, with the boundary limits
    /// returned as exact zeros.
    pub fn phi(&self, s: T, rel_tol: f64) -> Result<T> {
        self.phi_with_err(s, rel_tol).map(|(v, _)| v)
    }

    pub fn phi_with_err(&self, s: T, rel_tol: f64) -> Result<(T, T)> {
        if s.is_nan() || s < T::zero() || s > T::one() {
            return Err(Error::InvalidInput(format!("s = {s} outside [0, 1]")));
        }
        if s <= T::lit(PHI_ZERO_BELOW) || s >= T::lit(PHI_ZERO_ABOVE) {
            return Ok((T::zero(), T::zero()));
        }
        let (i, err) = self.integral(s, rel_tol)?;
        let w = -s.ln();
        Ok((w * i, w * err))
    }

    /// Supremum of `φ` over `(0, 1)`.
    pub fn hardy_index(&self, rel_tol: f64) -> Result<HardyResult<T>> {
        let grid = scan_grid::<T>();
        let values: Vec<T> = grid
            .par_iter()
            .map(|&s| self.phi(s, rel_tol))
            .collect::<Result<Vec<_>>>()?;

        // leftmost maximum
        let mut best = 0;
        for (i, &v) in values.iter().enumerate() {
            if v > values[best] {
                best = i;
            }
        }
        if best == 0 || best + 1 == grid.len() {
            return Err(Error::MaximizerAtBoundary {
                s: grid[best].to_f64_lossy(),
            });
        }

        let (mut s_star, mut d2) = golden::maximize(
            |s| self.phi(s, rel_tol),
            grid[best - 1],
            grid[best + 1],
            ABSCISSA_TOL,
        )?;
        if values[best] > d2 {
            s_star = grid[best];
            d2 = values[best];
        }
        let (_, err_i) = self.integral(s_star, rel_tol)?;
        let quad_err = err_i * (-s_star.ln());

        let window = T::lit(LOCAL_MAX_WINDOW);
        let local_maxima = (1..grid.len() - 1)
            .filter(|&i| {
                values[i] >= values[i - 1]
                    && values[i] >= values[i + 1]
                    && values[i] >= values[best] - window
            })
            .map(|i| (grid[i], values[i]))
            .collect();

        let phi_prime_at_star = self.central_derivative(s_star)?;
        let lambda_hi = T::one() / d2;
        Ok(HardyResult {
            d2,
            s_star,
            curve: grid.into_iter().zip(values).collect(),
            quad_err,
            lambda_lo: lambda_hi / T::lit(4.0),
            lambda_hi,
            local_maxima,
            phi_prime_at_star,
        })
    }

    fn central_derivative(&self, s: T) -> Result<T> {
        let h = T::lit(1e-5) * s.min(T::one() - s);
        let tight = 1e-14;
        let up = self.phi(s + h, tight)?;
        let down = self.phi(s - h, tight)?;
        Ok((up - down) / (h + h))
    }
}

/// Scan abscissae: `2^{-k}` near 0, 512 uniform points on `[1/2, 1 − 2^{-12}]`,
/// then `1 − 2^{-k}` toward 1. Sorted, duplicates removed.
pub fn scan_grid<T: Scalar>() -> Vec<T> {
    let two = T::lit(2.0);
    let mut grid: Vec<T> = (1..=40).map(|k| two.powi(-k)).collect();
    let lo = T::lit(0.5);
    let hi = T::one() - two.powi(-12);
    let n = 512;
    for i in 0..n {
        let t = T::from_usize_lossy(i) / T::from_usize_lossy(n - 1);
        grid.push(lo + (hi - lo) * t);
    }
    grid.extend((13..=40).map(|k| T::one() - two.powi(-k)));
    grid.retain(|&s| s > T::zero() && s < T::one());
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    grid
}

/// `∫₀ˢ dr/B(r)` for a subcritical law.
pub fn integral_i<T: Scalar>(law: &BranchingLaw<T>, s: T, rel_tol: f64) -> Result<T> {
    Profile::of_law(law)?.integral(s, rel_tol).map(|(v, _)| v)
}

/// `φ(s) = (−log s)·∫₀ˢ dr/B(r)` for a subcritical law.
pub fn phi<T: Scalar>(law: &BranchingLaw<T>, s: T, rel_tol: f64) -> Result<T> {
    Profile::of_law(law)?.phi(s, rel_tol)
}

/// The Hardy index of a subcritical law.
pub fn hardy_index<T: Scalar>(law: &BranchingLaw<T>, rel_tol: f64) -> Result<HardyResult<T>> {
    Profile::of_law(law)?.hardy_index(rel_tol)
}

/// Exact Hardy index of the birth–death law `(a, −(a+b), b)`:
/// `[log(1 + √(1 − b/a))]² / (a − b)`.
pub fn closed_form_bd<T: Scalar>(a: T, b: T) -> Result<T> {
    check_bd(a, b)?;
    let root = (T::one() - b / a).sqrt();
    Ok(root.ln_1p().powi(2) / (a - b))
}

/// Maximizer of `φ` for the birth–death law: `1 / (1 + √(1 − b/a))`.
pub fn closed_form_bd_maximizer<T: Scalar>(a: T, b: T) -> Result<T> {
    check_bd(a, b)?;
    Ok(T::one() / (T::one() + (T::one() - b / a).sqrt()))
}

fn check_bd<T: Scalar>(a: T, b: T) -> Result<()> {
    if a > b && b > T::zero() && a.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParameters(format!(
            "need a > b > 0, got a = {a}, b = {b}"
        )))
    }
}
