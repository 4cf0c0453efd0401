//! Eigenvalues of a symmetric tridiagonal pencil `K − ℓM` with `M` positive
//! definite: Sturm counts for bisection, inverse iteration for vectors.

use super::assemble::{dot, Pencil};
use crate::error::{Error, Result};
use crate::Scalar;

const MAX_BISECT: usize = 300;
const MAX_INVERSE: usize = 50;
/// Target residual `‖Kv − ℓMv‖ / ‖Mv‖`.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EigPair<T> {
    pub value: T,
    pub vector: Vec<T>,
    /// `‖Kv − ℓMv‖₂ / ‖Mv‖₂`.
    pub residual: T,
    pub iterations: usize,
}

/// Number of eigenvalues of the pencil strictly below `sigma`.
///
/// By Sylvester's law of inertia this is the number of negative pivots in
/// the `LDLᵀ` factorization of `K − σM`.
pub fn sturm_count<T: Scalar>(pencil: &Pencil<T>, sigma: T) -> usize {
    let n = pencil.len();
    let tiny = T::min_positive_value();
    let mut count = 0;
    let mut q = T::one();
    for i in 0..n {
        let a = pencil.k_diag[i] - sigma * pencil.m_diag[i];
        q = if i == 0 {
            a
        } else {
            let b = pencil.k_off[i - 1] - sigma * pencil.m_off[i - 1];
            a - b * b / q
        };
        if q.is_zero() {
            q = tiny;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// Bracket `(lo, hi)` around eigenvalue `k` (0-based), with
/// `count(lo) ≤ k < count(hi)`, narrowed to a few ulps.
pub fn bisect_eigenvalue<T: Scalar>(pencil: &Pencil<T>, k: usize) -> Result<(T, T)> {
    if k >= pencil.len() {
        return Err(Error::InvalidInput(format!(
            "eigenvalue {k} of a {}x{} pencil",
            pencil.len(),
            pencil.len()
        )));
    }
    let mut lo = T::zero();
    if sturm_count(pencil, lo) > k {
        // indefinite K: walk down
        let mut step = -T::one();
        loop {
            lo = step;
            if sturm_count(pencil, lo) <= k {
                break;
            }
            step *= T::lit(2.0);
            if !step.is_finite() {
                return Err(Error::NoConvergence {
                    iterations: 0,
                    residual: f64::NAN,
                });
            }
        }
    }
    let mut hi = T::one();
    while sturm_count(pencil, hi) <= k {
        hi *= T::lit(2.0);
        if !hi.is_finite() {
            return Err(Error::NoConvergence {
                iterations: 0,
                residual: f64::NAN,
            });
        }
    }
    let two = T::lit(2.0);
    let rel = T::epsilon() * T::lit(4.0);
    for _ in 0..MAX_BISECT {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi || hi - lo <= rel * hi.abs() {
            break;
        }
        if sturm_count(pencil, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// The `k` smallest eigenvalues, by bisection alone.
pub fn smallest_k<T: Scalar>(pencil: &Pencil<T>, k: usize) -> Result<Vec<T>> {
    (0..k.min(pencil.len()))
        .map(|i| bisect_eigenvalue(pencil, i).map(|(lo, hi)| (lo + hi) / T::lit(2.0)))
        .collect()
}

/// Solves `(K − σM) x = r` by `LDLᵀ` elimination without pivoting.
fn solve_shifted<T: Scalar>(pencil: &Pencil<T>, sigma: T, r: &[T]) -> Vec<T> {
    let n = pencil.len();
    let tiny = T::min_positive_value();
    let mut piv = vec![T::zero(); n];
    let mut y = r.to_vec();
    for i in 0..n {
        let a = pencil.k_diag[i] - sigma * pencil.m_diag[i];
        if i == 0 {
            piv[0] = a;
        } else {
            let b = pencil.k_off[i - 1] - sigma * pencil.m_off[i - 1];
            let l = b / piv[i - 1];
            piv[i] = a - l * b;
            y[i] = y[i] - l * y[i - 1];
        }
        if piv[i].is_zero() {
            piv[i] = tiny;
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut v = y[i];
        if i + 1 < n {
            let b = pencil.k_off[i] - sigma * pencil.m_off[i];
            v -= b * x[i + 1];
        }
        x[i] = v / piv[i];
    }
    x
}

fn norm2<T: Scalar>(x: &[T]) -> T {
    dot(x, x).sqrt()
}

/// Smallest eigenpair of the pencil.
///
/// The eigenvalue is bracketed by Sturm bisection; inverse iteration with a
/// shift at the lower end of the bracket (so `K − σM` stays positive
/// definite) gives the vector, and the value returned is its Rayleigh
/// quotient. Iteration stops when the residual is below [`RESIDUAL_TOL`] or
/// at the rounding level of the matrix–vector product. The vector is scaled
/// to `vᵀMv = 1` with a positive component sum.
pub fn smallest_eig<T: Scalar>(pencil: &Pencil<T>) -> Result<EigPair<T>> {
    let n = pencil.len();
    let (lo, _) = bisect_eigenvalue(pencil, 0)?;
    let sigma = lo;
    let mut v = vec![T::one(); n];
    let mut residual = T::infinity();
    for it in 1..=MAX_INVERSE {
        let rhs = pencil.apply_m(&v);
        let x = solve_shifted(pencil, sigma, &rhs);
        let nx = norm2(&x);
        if !(nx.is_finite() && nx > T::zero()) {
            break;
        }
        v = x.into_iter().map(|c| c / nx).collect();
        let kv = pencil.apply_k(&v);
        let mv = pencil.apply_m(&v);
        let value = dot(&v, &kv) / dot(&v, &mv);
        let r: Vec<T> = kv.iter().zip(&mv).map(|(&a, &b)| a - value * b).collect();
        let nmv = norm2(&mv);
        residual = norm2(&r) / nmv;
        if residual <= T::lit(RESIDUAL_TOL) || residual <= rounding_floor(pencil, &v, value) / nmv {
            normalize(pencil, &mut v);
            return Ok(EigPair {
                value,
                vector: v,
                residual,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_INVERSE,
        residual: residual.to_f64_lossy(),
    })
}

/// `32 ε ‖ |K||v| + ℓ|M||v| ‖₂`, the size of the rounding error in forming
/// `Kv − ℓMv`.
fn rounding_floor<T: Scalar>(pencil: &Pencil<T>, v: &[T], value: T) -> T {
    let av: Vec<T> = v.iter().map(|c| c.abs()).collect();
    let kd: Vec<T> = pencil.k_diag.iter().map(|c| c.abs()).collect();
    let ko: Vec<T> = pencil.k_off.iter().map(|c| c.abs()).collect();
    let md: Vec<T> = pencil.m_diag.iter().map(|c| c.abs()).collect();
    let mo: Vec<T> = pencil.m_off.iter().map(|c| c.abs()).collect();
    let a = super::assemble::tri_mul(&kd, &ko, &av);
    let b = super::assemble::tri_mul(&md, &mo, &av);
    let s: Vec<T> = a
        .iter()
        .zip(&b)
        .map(|(&x, &y)| x + value.abs() * y)
        .collect();
    T::lit(32.0) * T::epsilon() * norm2(&s)
}

fn normalize<T: Scalar>(pencil: &Pencil<T>, v: &mut [T]) {
    let mv = pencil.apply_m(v);
    let scale = dot(v, &mv).sqrt();
    let sign = if v.iter().copied().sum::<T>() < T::zero() {
        -T::one()
    } else {
        T::one()
    };
    for c in v.iter_mut() {
        *c = *c * sign / scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_pencil(vals: &[f64]) -> Pencil<f64> {
        let n = vals.len();
        Pencil {
            k_diag: vals.to_vec(),
            k_off: vec![0.0; n - 1],
            m_diag: vec![1.0; n],
            m_off: vec![0.0; n - 1],
        }
    }

    #[test]
    fn counts_on_diagonal_pencil() {
        let p = diag_pencil(&[3.0, 1.0, 2.0, 5.0]);
        assert_eq!(sturm_count(&p, 0.5), 0);
        assert_eq!(sturm_count(&p, 2.5), 2);
        assert_eq!(sturm_count(&p, 10.0), 4);
        let ev = smallest_k(&p, 3).unwrap();
        assert!(
            (ev[0] - 1.0).abs() < 1e-14
                && (ev[1] - 2.0).abs() < 1e-14
                && (ev[2] - 3.0).abs() < 1e-14
        );
    }

    #[test]
    fn second_difference_matrix() {
        // tridiag(-1, 2, -1): eigenvalues 2 − 2cos(kπ/(n+1))
        let n = 50;
        let p = Pencil {
            k_diag: vec![2.0; n],
            k_off: vec![-1.0; n - 1],
            m_diag: vec![1.0; n],
            m_off: vec![0.0; n - 1],
        };
        let pair = smallest_eig(&p).unwrap();
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((pair.value - exact).abs() < 1e-13 * exact.max(1.0));
        assert!(pair.residual <= 1e-10);
        assert!(pair.vector.iter().all(|&c| c > 0.0));
        let mv = p.apply_m(&pair.vector);
        assert!((dot(&pair.vector, &mv) - 1.0).abs() < 1e-12);
        let ev = smallest_k(&p, 3).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let e = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((v - e).abs() < 1e-13);
        }
    }
}
