use serde::Serialize;

use super::generator::TruncatedGenerator;
use crate::error::{Error, Result};
use crate::Scalar;

/// Transient quantities of the truncated chain started from state 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransientPoint<T> {
    pub t: T,
    /// Mass in states `1..=N`.
    pub survival: T,
    pub p11: T,
    pub p10: T,
    /// Mass lost above `N`.
    pub defect: T,
}

/// Poisson(`mu`) weights on `lo..lo + w.len()`, renormalized, with the
/// discarded tail mass below `tol`.
fn poisson_window<T: Scalar>(mu: T, tol: T) -> (usize, Vec<T>) {
    if mu.is_zero() {
        return (0, vec![T::one()]);
    }
    let mode = mu.floor().to_usize().unwrap_or(0);
    let cutoff = tol * T::lit(1e-3) / (T::one() + mu.sqrt());
    let mut right = vec![T::one()];
    let mut w = T::one();
    let mut k = mode;
    loop {
        k += 1;
        w = w * mu / T::from_usize_lossy(k);
        if w < cutoff {
            break;
        }
        right.push(w);
    }
    let mut left = Vec::new();
    let mut w = T::one();
    let mut k = mode;
    while k > 0 {
        w = w * T::from_usize_lossy(k) / mu;
        k -= 1;
        if w < cutoff {
            break;
        }
        left.push(w);
    }
    let lo = mode - left.len();
    left.reverse();
    left.extend(right);
    let total: T = left.iter().copied().sum();
    left.iter_mut().for_each(|x| *x /= total);
    (lo, left)
}

/// Survival, `P₁₁` and `P₁₀` at every requested time in one pass of the
/// uniformized chain. `tol` bounds the neglected Poisson tail at each `t`.
pub fn transient<T: Scalar>(
    gen: &TruncatedGenerator<T>,
    times: &[T],
    tol: f64,
) -> Result<Vec<TransientPoint<T>>> {
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= T::zero())) {
        return Err(Error::InvalidInput(format!(
            "time {t} must be finite and nonnegative"
        )));
    }
    let rate = gen.uniformization_rate();
    let tol_t = T::tol_or_eps(tol);
    let windows: Vec<(usize, Vec<T>)> = times
        .iter()
        .map(|&t| poisson_window(rate * t, tol_t))
        .collect();
    let k_max = windows
        .iter()
        .map(|(lo, w)| lo + w.len())
        .max()
        .unwrap_or(0);

    let n = gen.cap();
    let mut acc = vec![[T::zero(); 3]; times.len()];
    let mut v = vec![T::zero(); n + 1];
    v[1] = T::one();
    let mut next = vec![T::zero(); n + 1];
    let inv_rate = T::one() / rate;
    for k in 0..k_max {
        let alive: T = v[1..].iter().copied().sum();
        for (a, (lo, w)) in acc.iter_mut().zip(&windows) {
            if k >= *lo && k < lo + w.len() {
                let wk = w[k - lo];
                a[0] += wk * alive;
                a[1] += wk * v[1];
                a[2] += wk * v[0];
            }
        }
        if k + 1 < k_max {
            gen.step(&v, &mut next, inv_rate);
            std::mem::swap(&mut v, &mut next);
        }
    }
    Ok(times
        .iter()
        .zip(acc)
        .map(|(&t, [survival, p11, p10])| TransientPoint {
            t,
            survival,
            p11,
            p10,
            defect: (T::one() - survival - p10).max(T::zero()),
        })
        .collect())
}

/// `P₁₁(t)` of the truncated chain.
pub fn transition_p11<T: Scalar>(gen: &TruncatedGenerator<T>, t: T, tol: f64) -> Result<T> {
    Ok(transient(gen, &[t], tol)?[0].p11)
}

/// In-range survival `Σ_{1≤j≤N} P₁ⱼ(t)` of the truncated chain.
pub fn survival<T: Scalar>(gen: &TruncatedGenerator<T>, t: T, tol: f64) -> Result<T> {
    Ok(transient(gen, &[t], tol)?[0].survival)
}
