use crate::error::Result;
use crate::Scalar;

/// Golden-section maximization of `f` on `[a, b]`.
///
/// Assumes `f` is unimodal on the bracket; the caller is responsible for
/// producing one (see [`crate::hardy`], which brackets from a grid scan).
/// Stops once the bracket is narrower than `x_tol`. Returns `(x, f(x))` for the
/// best point seen.
pub fn maximize<T, F>(f: F, a: T, b: T, x_tol: f64) -> Result<(T, T)>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let tol = T::tol_or_eps(x_tol);
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut iter = 0;
    while hi - lo > tol && iter < 200 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
        iter += 1;
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}
