use crate::Scalar;
use serde::Serialize;

/// Dense real polynomial `Σ c_k x^k`, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    /// Straight line `intercept + slope·x`.
    pub fn line(intercept: T, slope: T) -> Self {
        Self::new(vec![intercept, slope])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * x + c)
    }

    /// Value of the `order`-th derivative at `x`, without building the
    /// derivative polynomial.
    pub fn eval_deriv(&self, x: T, order: usize) -> T {
        if order >= self.coeffs.len() {
            return T::zero();
        }
        let mut acc = T::zero();
        for k in (order..self.coeffs.len()).rev() {
            let mut falling = T::one();
            for m in 0..order {
                falling *= T::from_usize_lossy(k - m);
            }
            acc = acc * x + self.coeffs[k] * falling;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![T::zero()]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_usize_lossy(k))
                .collect(),
        )
    }

    /// The polynomial `(P(1) − P(x)) / (1 − x)`.
    ///
    /// Coefficient `k` is the tail sum `Σ_{n>k} c_n`, so the quotient is
    /// formed without any cancellation near `x = 1`.
    pub fn difference_quotient_at_one(&self) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::new(vec![T::zero()]);
        }
        let mut out = vec![T::zero(); n - 1];
        let mut tail = T::zero();
        for k in (0..n - 1).rev() {
            tail += self.coeffs[k + 1];
            out[k] = tail;
        }
        Self::new(out)
    }

    /// `Σ |c_k| |x|^k`, the natural scale for rounding error in `eval(x)`.
    fn magnitude(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * x.abs() + c.abs())
    }

    /// All real roots in `[lo, hi]`, ascending.
    ///
    /// Roots are isolated recursively between the critical points (roots of
    /// the derivative), where the polynomial is monotone, and then refined by
    /// bisection to the resolution of `T`. Touching roots are reported when
    /// the value at a critical point vanishes to rounding accuracy.
    pub fn real_roots(&self, lo: T, hi: T) -> Vec<T> {
        if lo > hi || self.degree() == 0 {
            return Vec::new();
        }
        let mut pts = vec![lo];
        pts.extend(self.derivative().real_roots(lo, hi));
        pts.push(hi);

        let tiny = |x: T| self.eval(x).abs() <= T::epsilon() * T::lit(64.0) * self.magnitude(x);
        let mut roots: Vec<T> = Vec::new();
        let push = |r: T, roots: &mut Vec<T>| {
            let scale = T::one().max(r.abs());
            if roots
                .last()
                .is_none_or(|&last| (r - last).abs() > T::epsilon() * T::lit(1e4) * scale)
            {
                roots.push(r);
            }
        };
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if tiny(a) {
                push(a, &mut roots);
            }
            let (fa, fb) = (self.eval(a), self.eval(b));
            if fa * fb < T::zero() {
                push(self.bisect(a, b, fa), &mut roots);
            }
        }
        if tiny(hi) {
            push(hi, &mut roots);
        }
        roots
    }

    fn bisect(&self, mut a: T, mut b: T, mut fa: T) -> T {
        let two = T::lit(2.0);
        for _ in 0..200 {
            let m = (a + b) / two;
            if m <= a || m >= b {
                break;
            }
            let fm = self.eval(m);
            if fm.is_zero() {
                return m;
            }
            if fa * fm < T::zero() {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        (a + b) / two
    }

    /// True when the polynomial has no root in `[lo, hi]` and is positive there.
    pub fn is_positive_on(&self, lo: T, hi: T) -> bool {
        self.eval(lo) > T::zero() && self.eval(hi) > T::zero() && self.real_roots(lo, hi).is_empty()
    }
}
