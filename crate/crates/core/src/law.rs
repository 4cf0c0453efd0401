//! Rate sequences `{b_j}` of a quadratic branching process.
//!
//! A law is a finite sequence `b_0, …, b_J` with `b_j ≥ 0` for `j ≠ 1`,
//! `b_0 > 0`, some birth mass at `j ≥ 2` and `b_1 = −Σ_{j≠1} b_j`. The
//! generating function `B(s) = Σ b_j s^j` then vanishes at `s = 1` and
//! factors as `B(s) = (1 − s) A(s)` with `A(s) = Σ a_n s^n`,
//! `a_n = Σ_{k≤n} b_k`. Both are exact polynomials.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::Scalar;

/// Absolute tolerance on `Σ b_j = 0` and on the critical classification.
pub const CONSERVATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

/// Coefficients of `A(s) = B(s) / (1 − s)`.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesCache<T> {
    /// `a_0 … a_{J−1}`; `a_n = 0` for `n ≥ J`.
    pub a: Vec<T>,
    #[serde(skip)]
    poly: Poly<T>,
}

impl<T: Scalar> SeriesCache<T> {
    fn from_rates(b: &[T]) -> Self {
        // a_n = −Σ_{j>n} b_j for n ≥ 1: tail sums keep the sign exact.
        let jmax = b.len() - 1;
        let mut a = vec![T::zero(); jmax];
        a[0] = b[0];
        let mut tail = T::zero();
        for n in (1..jmax).rev() {
            tail += b[n + 1];
            a[n] = -tail;
        }
        let poly = Poly::new(a.clone());
        Self { a, poly }
    }

    pub fn poly(&self) -> &Poly<T> {
        &self.poly
    }
}

/// A validated rate sequence with its derived moments.
#[derive(Debug, Clone, Serialize)]
pub struct BranchingLaw<T> {
    pub b: Vec<T>,
    /// Mean death rate, `b_0`.
    pub m_d: T,
    /// Mean birth rate, `Σ_{j≥2} (j−1) b_j`.
    pub m_b: T,
    /// `B'(1) = m_b − m_d`.
    pub bprime1: T,
    /// `B''(1) = Σ_{j≥2} j(j−1) b_j`.
    pub bpp1: T,
    /// `Σ_{j≥2} b_j`.
    pub birth_mass: T,
    pub criticality: Criticality,
    pub series: SeriesCache<T>,
    #[serde(skip)]
    b_poly: Poly<T>,
}

/// Zeros of `B` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RootStructure<T> {
    /// `1` is the only root; `double` when `B'(1) = 0`.
    OnlyOne { double: bool },
    /// Roots `q` and `1` with `0 < q < 1`.
    Two { q: T },
}

/// Checks the rate conditions and derives the moments.
///
/// `b_1` is checked against `−Σ_{j≠1} b_j`, never recomputed.
pub fn validate_law<T: Scalar>(raw_rates: &[T]) -> Result<BranchingLaw<T>> {
    if raw_rates.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 rates (b_0, b_1, b_2, ...), got {}",
            raw_rates.len()
        )));
    }
    if let Some((j, v)) = raw_rates.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "rate b_{j} = {v} is not finite"
        )));
    }
    let b0 = raw_rates[0];
    if b0 <= T::zero() {
        return Err(Error::ZeroDeathRate(b0.to_f64_lossy()));
    }
    for (j, &v) in raw_rates.iter().enumerate() {
        if j != 1 && v < T::zero() {
            return Err(Error::NegativeRate {
                index: j,
                value: v.to_f64_lossy(),
            });
        }
    }
    let birth_mass: T = raw_rates[2..].iter().copied().sum();
    if birth_mass <= T::zero() {
        return Err(Error::NoBirthMass(birth_mass.to_f64_lossy()));
    }
    let expected = -(b0 + birth_mass);
    let b1 = raw_rates[1];
    if (b1 - expected).abs() > T::lit(CONSERVATION_TOL) {
        return Err(Error::ConservationViolation {
            b1: b1.to_f64_lossy(),
            expected: expected.to_f64_lossy(),
        });
    }

    // Drop trailing zero rates so J_max is the true support.
    let mut b = raw_rates.to_vec();
    while b.len() > 3 && b.last().is_some_and(|v| v.is_zero()) {
        b.pop();
    }

    let mut m_b = T::zero();
    let mut bpp1 = T::zero();
    for (j, &v) in b.iter().enumerate().skip(2) {
        let jf = T::from_usize_lossy(j);
        m_b += (jf - T::one()) * v;
        bpp1 += jf * (jf - T::one()) * v;
    }
    let m_d = b0;
    let bprime1 = m_b - m_d;
    let tol = T::lit(CONSERVATION_TOL);
    let criticality = if bprime1 < -tol {
        Criticality::Subcritical
    } else if bprime1 <= tol {
        Criticality::Critical
    } else {
        Criticality::Supercritical
    };

    let series = SeriesCache::from_rates(&b);
    let b_poly = Poly::new(b.clone());
    Ok(BranchingLaw {
        b,
        m_d,
        m_b,
        bprime1,
        bpp1,
        birth_mass,
        criticality,
        series,
        b_poly,
    })
}

impl<T: Scalar> BranchingLaw<T> {
    /// Index of the last nonzero rate.
    pub fn j_max(&self) -> usize {
        self.b.len() - 1
    }

    pub fn b0(&self) -> T {
        self.b[0]
    }

    pub fn is_subcritical(&self) -> bool {
        self.criticality == Criticality::Subcritical
    }

    /// True when `b_j = 0` for every `j ≥ 3`.
    pub fn is_birth_death(&self) -> bool {
        self.b.len() == 3
    }

    pub fn ensure_subcritical(&self) -> Result<()> {
        if self.is_subcritical() {
            Ok(())
        } else {
            Err(Error::NotSubcritical {
                bprime1: self.bprime1.to_f64_lossy(),
            })
        }
    }

    pub fn b_poly(&self) -> &Poly<T> {
        &self.b_poly
    }

    /// `A` as a polynomial.
    pub fn a_poly(&self) -> &Poly<T> {
        self.series.poly()
    }

    pub fn eval_b(&self, s: T) -> T {
        self.b_poly.eval(s)
    }

    /// `A(s)`, `A'(s)` or `A''(s)` for `order` 0, 1, 2 (higher orders are
    /// also accepted).
    pub fn eval_a(&self, s: T, order: usize) -> T {
        self.series.poly().eval_deriv(s, order)
    }

    /// Root structure of `B` on `[0, 1]`.
    pub fn roots_of_b(&self) -> RootStructure<T> {
        match self.criticality {
            Criticality::Subcritical => RootStructure::OnlyOne { double: false },
            Criticality::Critical => RootStructure::OnlyOne { double: true },
            Criticality::Supercritical => RootStructure::Two {
                q: self.extinction_root(),
            },
        }
    }

    /// Root `q ∈ (0, 1)` of `B` for a supercritical law, by bisection.
    fn extinction_root(&self) -> T {
        let two = T::lit(2.0);
        let mut delta = T::lit(0.5);
        let mut hi = T::one() - delta;
        for _ in 0..60 {
            if self.eval_b(hi) < T::zero() {
                break;
            }
            delta /= two;
            hi = T::one() - delta;
        }
        let mut lo = T::zero();
        let tol = T::tol_or_eps(1e-13);
        while hi - lo > tol {
            let m = (lo + hi) / two;
            if m <= lo || m >= hi {
                break;
            }
            if self.eval_b(m) > T::zero() {
                lo = m;
            } else {
                hi = m;
            }
        }
        (lo + hi) / two
    }

    /// All real roots of `A` in `[lo, hi]`.
    pub fn roots_of_a(&self, lo: T, hi: T) -> Vec<T> {
        self.series.poly().real_roots(lo, hi)
    }
}

/// Rates `(a, −(a+b), b)` of the quadratic birth–death law.
pub fn birth_death_rates<T: Scalar>(a: T, b: T) -> Vec<T> {
    vec![a, -(a + b), b]
}

/// Rates `(b_0, −(b_0+b_2+b_3), b_2, b_3)` of the upward-skip-2 law.
pub fn skip2_rates<T: Scalar>(b0: T, b2: T, b3: T) -> Vec<T> {
    vec![b0, -(b0 + b2 + b3), b2, b3]
}
