//! Closed-form brackets on `D²` built from envelopes of `A`.
//!
//! `A` is concave and decreasing on `[0, 1]`, so it is squeezed between
//! straight lines and between two parabolas. Replacing `A` by an envelope
//! `L ≥ A` can only lower `φ`, and `L ≤ A` can only raise it, which turns
//! each envelope into one side of a bracket on `D²`. For a line
//! `L(s) = a − b s` the supremum is the birth–death closed form
//! [`closed_form_bd`].
//!
//! Four brackets are produced:
//!
//! * `log2`: the constants `b₀ ≥ A ≥ b₀ − m_b`.
//! * `tangent_secant`: the chord from `(0, b₀)` to `(1, b₀ − m_b)` below `A`
//!   and the parallel tangent above it.
//! * `slope_lines`: the tangent at 0 above `A` and the line with slope
//!   `A'(1) = −B''(1)/2` through `(0, b₀)` below it.
//! * `quadratic_envelope`: second-order Taylor polynomials with `A''(0)`
//!   (above) and `A''(1)` (below).
//!
//! The reference formulas for the middle two brackets as usually printed
//! are also evaluated and carried in the entry for comparison.

use serde::Serialize;

use crate::error::Result;
use crate::hardy::{closed_form_bd, Profile};
use crate::law::BranchingLaw;
use crate::poly::Poly;
use crate::Scalar;

#[derive(Debug, Clone, Serialize)]
pub struct BoundEntry<T> {
    pub name: &'static str,
    pub d2_lo: Option<T>,
    pub d2_hi: Option<T>,
    /// `1/(4·d2_hi)`.
    pub lambda_lo: Option<T>,
    /// `1/d2_lo`.
    pub lambda_hi: Option<T>,
    /// True when both sides are available.
    pub applicable: bool,
    pub notes: Vec<String>,
    /// Printed-formula values, where they differ from the envelope values.
    pub printed_d2_lo: Option<T>,
    pub printed_d2_hi: Option<T>,
}

impl<T: Scalar> BoundEntry<T> {
    fn new(name: &'static str, d2_lo: Option<T>, d2_hi: Option<T>) -> Self {
        let four = T::lit(4.0);
        Self {
            name,
            d2_lo,
            d2_hi,
            lambda_lo: d2_hi.map(|d| T::one() / (four * d)),
            lambda_hi: d2_lo.map(|d| T::one() / d),
            applicable: d2_lo.is_some() && d2_hi.is_some(),
            notes: Vec::new(),
            printed_d2_lo: None,
            printed_d2_hi: None,
        }
    }

    /// Whether `d2` lies within the available sides, up to `slack`.
    pub fn contains_d2(&self, d2: T, slack: T) -> bool {
        self.d2_lo.is_none_or(|lo| d2 >= lo - slack) && self.d2_hi.is_none_or(|hi| d2 <= hi + slack)
    }

    /// λ interval with missing sides replaced by `0` and `+∞`.
    pub fn lambda_interval(&self) -> (T, T) {
        (
            self.lambda_lo.unwrap_or_else(T::zero),
            self.lambda_hi.unwrap_or_else(T::infinity),
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport<T> {
    pub entries: Vec<BoundEntry<T>>,
    /// `m_b / b₀`.
    pub kappa1: T,
    /// `m_b / (A(s₀) + s₀ m_b)`.
    pub kappa2: T,
    /// Tangency point, `A'(s₀) = −m_b`.
    pub s0: T,
    /// `B''(1) / (2 b₀)`.
    pub kappa1p: T,
    /// `Σ_{j≥2} b_j / b₀`.
    pub kappa2p: T,
    /// Maximizer of `φ` for the upper parabola.
    pub s1: Option<T>,
    /// Maximizer of `φ` for the lower parabola.
    pub s2: Option<T>,
}

impl<T: Scalar> BoundsReport<T> {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry<T>> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// `D²` of the profile `a − b s`, allowing the degenerate slope `b = 0`.
fn line_d2<T: Scalar>(a: T, b: T) -> Result<T> {
    if b.is_zero() {
        return Ok(T::LN_2() * T::LN_2() / a);
    }
    closed_form_bd(a, b)
}

/// Brackets from the constant envelopes `b₀` and `b₀ − m_b`.
pub fn log2_bounds<T: Scalar>(law: &BranchingLaw<T>) -> Result<BoundEntry<T>> {
    law.ensure_subcritical()?;
    let l2 = T::LN_2() * T::LN_2();
    let b0 = law.b0();
    Ok(BoundEntry::new(
        "log2",
        Some(l2 / b0),
        Some(l2 / (b0 - law.m_b)),
    ))
}

/// Solves `A'(s) = −m_b` on `[0, 1]` by bisection. Returns 1 when `A'` is
/// constant (birth–death), where every point is a tangency point.
pub fn tangency_point<T: Scalar>(law: &BranchingLaw<T>) -> T {
    if law.is_birth_death() {
        return T::one();
    }
    let g = |s: T| law.eval_a(s, 1) + law.m_b;
    let two = T::lit(2.0);
    let (mut lo, mut hi) = (T::zero(), T::one());
    let tol = T::tol_or_eps(1e-13);
    while hi - lo > tol {
        let m = (lo + hi) / two;
        if m <= lo || m >= hi {
            break;
        }
        if g(m) > T::zero() {
            lo = m;
        } else {
            hi = m;
        }
    }
    (lo + hi) / two
}

/// Intercept `A(s₀) + s₀ m_b` of the tangent with slope `−m_b`.
fn tangent_intercept<T: Scalar>(law: &BranchingLaw<T>, s0: T) -> T {
    if law.is_birth_death() {
        law.b0()
    } else {
        law.eval_a(s0, 0) + s0 * law.m_b
    }
}

/// Brackets from the secant of `A` and the parallel tangent line.
pub fn tangent_secant_bounds<T: Scalar>(
    law: &BranchingLaw<T>,
    rel_tol: f64,
) -> Result<BoundEntry<T>> {
    law.ensure_subcritical()?;
    let b0 = law.b0();
    let m_b = law.m_b;
    let s0 = tangency_point(law);
    let c = tangent_intercept(law, s0);
    let mut e = BoundEntry::new(
        "tangent_secant",
        Some(line_d2(c, m_b)?),
        Some(line_d2(b0, m_b)?),
    );

    let kappa1 = m_b / b0;
    let kappa2 = m_b / c;
    e.printed_d2_lo = Some(kappa2 * kappa2.sqrt().ln_1p().powi(2) / (m_b - kappa2));
    e.printed_d2_hi = Some(kappa1.sqrt().ln_1p().powi(2) / (b0 - m_b));

    if law.is_birth_death() {
        e.notes
            .push("degenerate tangent: A is linear, s0 = 1 and both lines equal A".to_string());
    } else {
        let resid = (law.eval_a(s0, 1) + m_b).abs();
        e.notes
            .push(format!("s0 = {s0:e}, |A'(s0) + m_b| = {resid:e}"));
    }
    let numeric = Profile::new(Poly::line(c, -m_b))?.hardy_index(rel_tol)?.d2;
    e.notes
        .push(format!("tangent profile by quadrature: {numeric:e}"));
    Ok(e)
}

/// Brackets from the tangent of `A` at 0 and the line of slope `A'(1)`
/// through `(0, b₀)`. The latter stays positive only when `B''(1) < 2 b₀`.
pub fn slope_line_bounds<T: Scalar>(law: &BranchingLaw<T>) -> Result<BoundEntry<T>> {
    law.ensure_subcritical()?;
    let b0 = law.b0();
    let half_bpp = law.bpp1 / T::lit(2.0);
    let lo = line_d2(b0, law.birth_mass)?;
    let hi = if half_bpp < b0 {
        Some(line_d2(b0, half_bpp)?)
    } else {
        None
    };
    let mut e = BoundEntry::new("slope_lines", Some(lo), hi);

    let denom = b0 - law.m_b;
    let k1p = law.bpp1 / (T::lit(2.0) * b0);
    let k2p = law.birth_mass / b0;
    e.printed_d2_lo = Some(k2p.sqrt().ln_1p().powi(2) / denom);
    e.printed_d2_hi = Some(k1p.sqrt().ln_1p().powi(2) / denom);
    if hi.is_none() {
        e.notes
            .push("B''(1) >= 2 b0: lower line leaves (0, inf), upper side unavailable".to_string());
    }
    Ok(e)
}

/// The parabolas `b₀ + a₁ s + ½A''(x) s²` for `x = 0` (upper) and `x = 1`
/// (lower).
pub fn quadratic_envelopes<T: Scalar>(law: &BranchingLaw<T>) -> (Poly<T>, Poly<T>) {
    let half = T::lit(0.5);
    let a1 = law.eval_a(T::zero(), 1);
    let upper = Poly::new(vec![law.b0(), a1, half * law.eval_a(T::zero(), 2)]);
    let lower = Poly::new(vec![law.b0(), a1, half * law.eval_a(T::one(), 2)]);
    (upper, lower)
}

/// Brackets from the quadratic envelopes, each maximized numerically.
/// Also returns the two maximizers.
pub fn quadratic_envelope_bounds<T: Scalar>(
    law: &BranchingLaw<T>,
    rel_tol: f64,
) -> Result<(BoundEntry<T>, Option<T>, Option<T>)> {
    law.ensure_subcritical()?;
    let (upper, lower) = quadratic_envelopes(law);
    let up = Profile::new(upper)?.hardy_index(rel_tol)?;
    let low = match Profile::new(lower) {
        Ok(p) => Some(p.hardy_index(rel_tol)?),
        Err(_) => None,
    };
    let mut e = BoundEntry::new(
        "quadratic_envelope",
        Some(up.d2),
        low.as_ref().map(|h| h.d2),
    );
    if low.is_none() {
        e.notes
            .push("lower parabola has a root in [0, 1]; upper side unavailable".to_string());
    }
    Ok((e, Some(up.s_star), low.map(|h| h.s_star)))
}

/// All four brackets and the auxiliary constants.
pub fn bounds_report<T: Scalar>(law: &BranchingLaw<T>, rel_tol: f64) -> Result<BoundsReport<T>> {
    law.ensure_subcritical()?;
    let b0 = law.b0();
    let s0 = tangency_point(law);
    let (quad, s1, s2) = quadratic_envelope_bounds(law, rel_tol)?;
    Ok(BoundsReport {
        entries: vec![
            log2_bounds(law)?,
            tangent_secant_bounds(law, rel_tol)?,
            slope_line_bounds(law)?,
            quad,
        ],
        kappa1: law.m_b / b0,
        kappa2: law.m_b / tangent_intercept(law, s0),
        s0,
        kappa1p: law.bpp1 / (T::lit(2.0) * b0),
        kappa2p: law.birth_mass / b0,
        s1,
        s2,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairComparison {
    pub first: &'static str,
    pub second: &'static str,
    /// Name of the entry with the smaller λ upper bound.
    pub tighter_upper: &'static str,
    /// Name of the entry with the larger λ lower bound.
    pub tighter_lower: &'static str,
    pub overlap: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison<T> {
    pub pairs: Vec<PairComparison>,
    pub best_lambda_lo: T,
    pub best_lambda_hi: T,
    pub best_d2_lo: T,
    pub best_d2_hi: T,
    /// `m_b < ½B''(1)`.
    pub slope_criterion: bool,
    /// Tangent/secant `d2_hi` ≤ slope-line `d2_hi`, when the latter exists.
    pub slope_observed: Option<bool>,
    pub slope_agrees: Option<bool>,
}

/// Pairwise comparison of the λ brackets and their intersection.
pub fn compare_bounds<T: Scalar>(report: &BoundsReport<T>, law: &BranchingLaw<T>) -> Comparison<T> {
    let entries = &report.entries;
    let mut pairs = Vec::new();
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            let (a, b) = (&entries[i], &entries[j]);
            let (alo, ahi) = a.lambda_interval();
            let (blo, bhi) = b.lambda_interval();
            pairs.push(PairComparison {
                first: a.name,
                second: b.name,
                tighter_upper: if ahi <= bhi { a.name } else { b.name },
                tighter_lower: if alo >= blo { a.name } else { b.name },
                overlap: alo.max(blo) <= ahi.min(bhi),
            });
        }
    }
    let best_lambda_lo = entries
        .iter()
        .map(|e| e.lambda_interval().0)
        .fold(T::zero(), T::max);
    let best_lambda_hi = entries
        .iter()
        .map(|e| e.lambda_interval().1)
        .fold(T::infinity(), T::min);
    let best_d2_lo = entries
        .iter()
        .filter_map(|e| e.d2_lo)
        .fold(T::zero(), T::max);
    let best_d2_hi = entries
        .iter()
        .filter_map(|e| e.d2_hi)
        .fold(T::infinity(), T::min);

    let slope_criterion = law.m_b < law.bpp1 / T::lit(2.0);
    let ts = report.entry("tangent_secant").and_then(|e| e.d2_hi);
    let sl = report.entry("slope_lines").and_then(|e| e.d2_hi);
    let slope_observed = match (ts, sl) {
        (Some(x), Some(y)) => Some(x <= y),
        _ => None,
    };
    Comparison {
        pairs,
        best_lambda_lo,
        best_lambda_hi,
        best_d2_lo,
        best_d2_hi,
        slope_criterion,
        slope_observed,
        slope_agrees: slope_observed
            .map(|o| o == slope_criterion || (!slope_criterion && ts == sl)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::{self, DEFAULT_REL_TOL};
    use crate::law::{skip2_rates, validate_law};

    #[test]
    fn log2_reference_values() {
        let law = validate_law(&[2.0f64, -3.0, 1.0]).unwrap();
        let e = log2_bounds(&law).unwrap();
        assert!((e.d2_lo.unwrap() - 0.240_226_506_959_100_7).abs() < 1e-15);
        assert!((e.d2_hi.unwrap() - 0.480_453_013_918_201_4).abs() < 1e-15);
        assert!((e.lambda_lo.unwrap() - 0.520_342_245_251_401_9).abs() < 1e-12);
        assert!((e.lambda_hi.unwrap() - 4.162_737_962_011_215).abs() < 1e-12);
    }

    #[test]
    fn birth_death_collapse() {
        let law = validate_law(&[2.0f64, -3.0, 1.0]).unwrap();
        let exact = closed_form_bd(2.0, 1.0).unwrap();
        let r = bounds_report(&law, DEFAULT_REL_TOL).unwrap();
        assert_eq!(r.s0, 1.0);
        for name in ["tangent_secant", "slope_lines", "quadratic_envelope"] {
            let e = r.entry(name).unwrap();
            assert!(e.applicable, "{name}");
            assert!((e.d2_lo.unwrap() - exact).abs() < 1e-10, "{name}");
            assert!((e.d2_hi.unwrap() - exact).abs() < 1e-10, "{name}");
        }
        assert_eq!(r.kappa1p, 0.5);
        assert_eq!(r.kappa2p, 0.5);
    }

    #[test]
    fn skip2_tangency_and_containment() {
        let law = validate_law(&skip2_rates(1.0f64, 0.3, 0.3)).unwrap();
        let s0 = tangency_point(&law);
        assert!(s0 > 0.0 && s0 < 1.0);
        assert!((law.eval_a(s0, 1) + law.m_b).abs() < 1e-10);
        let d2 = hardy::hardy_index(&law, DEFAULT_REL_TOL).unwrap().d2;
        let r = bounds_report(&law, DEFAULT_REL_TOL).unwrap();
        for e in &r.entries {
            assert!(e.contains_d2(d2, 1e-9), "{} {:?} vs {d2}", e.name, e);
        }
        assert!(r.kappa2 <= r.kappa1);
        assert!(r.kappa2p <= r.kappa1p);
        let c = compare_bounds(&r, &law);
        assert!(c.pairs.iter().all(|p| p.overlap));
        assert!(c.best_d2_lo <= d2 + 1e-9 && d2 <= c.best_d2_hi + 1e-9);
        // B''(1) = 2.4 > 2 b0, so the comparison is not available here
        assert_eq!(c.slope_agrees, None);
        let flat = validate_law(&[1.0f64, -1.4, 0.3, 0.1]).unwrap();
        let rf = bounds_report(&flat, DEFAULT_REL_TOL).unwrap();
        assert_eq!(compare_bounds(&rf, &flat).slope_agrees, Some(true));
    }

    #[test]
    fn slope_upper_side_needs_small_curvature() {
        // B''(1) = 12·0.2 = 2.4 > 2 b0 = 2
        let law = validate_law(&[1.0f64, -1.2, 0.0, 0.0, 0.2]).unwrap();
        assert!(law.is_subcritical());
        let e = slope_line_bounds(&law).unwrap();
        assert!(e.d2_lo.is_some() && e.d2_hi.is_none());
        assert!(!e.applicable);
        assert!(e.lambda_lo.is_none() && e.lambda_hi.is_some());
    }

    #[test]
    fn envelopes_nest() {
        let law = validate_law(&[1.0f64, -1.5, 0.2, 0.1, 0.2]).unwrap();
        let (upper, lower) = quadratic_envelopes(&law);
        let s0 = tangency_point(&law);
        let c = tangent_intercept(&law, s0);
        for i in 0..=100 {
            let s = i as f64 / 100.0;
            let a = law.eval_a(s, 0);
            assert!(lower.eval(s) <= a + 1e-14 && a <= upper.eval(s) + 1e-14);
            assert!(law.b0() - law.m_b * s <= a + 1e-14 && a <= c - law.m_b * s + 1e-14);
        }
    }

    #[test]
    fn refuses_supercritical() {
        let law = validate_law(&[1.0, -2.5, 1.0, 0.5]).unwrap();
        assert!(bounds_report(&law, 1e-10).is_err());
    }
}
