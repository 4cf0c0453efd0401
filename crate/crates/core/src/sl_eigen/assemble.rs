use super::grid::Grid;
use crate::quadrature::{GL8_W, GL8_X};
use crate::Scalar;

/// Symmetric tridiagonal pencil `(K, M)`, stored by diagonals.
#[derive(Debug, Clone)]
pub struct Pencil<T> {
    pub k_diag: Vec<T>,
    pub k_off: Vec<T>,
    pub m_diag: Vec<T>,
    pub m_off: Vec<T>,
}

impl<T: Scalar> Pencil<T> {
    pub fn len(&self) -> usize {
        self.k_diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_diag.is_empty()
    }

    /// `y = (K − σ M) x`.
    pub fn apply_shifted(&self, sigma: T, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = (self.k_diag[i] - sigma * self.m_diag[i]) * x[i];
                if i > 0 {
                    acc += (self.k_off[i - 1] - sigma * self.m_off[i - 1]) * x[i - 1];
                }
                if i + 1 < n {
                    acc += (self.k_off[i] - sigma * self.m_off[i]) * x[i + 1];
                }
                acc
            })
            .collect()
    }

    pub fn apply_k(&self, x: &[T]) -> Vec<T> {
        tri_mul(&self.k_diag, &self.k_off, x)
    }

    pub fn apply_m(&self, x: &[T]) -> Vec<T> {
        tri_mul(&self.m_diag, &self.m_off, x)
    }

    /// `xᵀKx / xᵀMx`.
    pub fn rayleigh(&self, x: &[T]) -> T {
        dot(x, &self.apply_k(x)) / dot(x, &self.apply_m(x))
    }
}

pub(crate) fn tri_mul<T: Scalar>(diag: &[T], off: &[T], x: &[T]) -> Vec<T> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut acc = diag[i] * x[i];
            if i > 0 {
                acc += off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += off[i] * x[i + 1];
            }
            acc
        })
        .collect()
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Assembles `∫ p g'²` and `∫ w g²` over hat functions on `grid`.
///
/// `w` receives both `s` and `1 − s` at each quadrature point. Every element
/// uses the 8-point Gauss–Legendre rule.
pub fn assemble_with<T, P, W>(grid: &Grid<T>, p: P, w: W) -> Pencil<T>
where
    T: Scalar,
    P: Fn(T) -> T,
    W: Fn(T, T) -> T,
{
    let n = grid.unknowns();
    let first = grid.first_unknown();
    let mut k_diag = vec![T::zero(); n];
    let mut m_diag = vec![T::zero(); n];
    let mut k_off = vec![T::zero(); n.saturating_sub(1)];
    let mut m_off = vec![T::zero(); n.saturating_sub(1)];
    let nodes = grid.nodes();
    let half = T::lit(0.5);

    for (e, &(s0, d0)) in nodes[..nodes.len() - 1].iter().enumerate() {
        let h = grid.width(e);
        let (mut kp, mut maa, mut mab, mut mbb) = (T::zero(), T::zero(), T::zero(), T::zero());
        for q in 0..8 {
            let (x, wt) = if q < 4 {
                (-GL8_X[q], GL8_W[q])
            } else {
                (GL8_X[q - 4], GL8_W[q - 4])
            };
            let t = half + half * T::lit(x);
            let wq = half * T::lit(wt) * h;
            let s = s0 + t * h;
            let d = d0 - t * h;
            let ws = w(s, d) * wq;
            kp += p(s) * wq;
            maa += ws * (T::one() - t) * (T::one() - t);
            mab += ws * t * (T::one() - t);
            mbb += ws * t * t;
        }
        let kel = kp / (h * h);
        // local node a = e, b = e + 1, mapped to unknown indices
        let ia = e.checked_sub(first).filter(|&i| i < n);
        let ib = (e + 1).checked_sub(first).filter(|&i| i < n);
        if let Some(i) = ia {
            k_diag[i] += kel;
            m_diag[i] += maa;
        }
        if let Some(j) = ib {
            k_diag[j] += kel;
            m_diag[j] += mbb;
        }
        if let (Some(i), Some(_)) = (ia, ib) {
            k_off[i] -= kel;
            m_off[i] += mab;
        }
    }
    Pencil {
        k_diag,
        k_off,
        m_diag,
        m_off,
    }
}
