use crate::error::{Error, Result};
use crate::Scalar;

/// Mesh on `[0, 1]` for piecewise-linear elements.
///
/// Each node is stored as `(s, 1 − s)` so that elements close to `s = 1` keep
/// their relative width. The last node always carries a zero boundary value.
/// The first one does too unless the grid is `free_left`.
#[derive(Debug, Clone)]
pub struct Grid<T> {
    nodes: Vec<(T, T)>,
    free_left: bool,
}

impl<T: Scalar> Grid<T> {
    /// Nodes `s_j = 1 − e^{−j h}`, `j = 0..=m`, with the value at `s = 0`
    /// left free. Halving `h` and raising `m` gives a superset of nodes.
    pub fn natural(h: T, m: usize) -> Result<Self> {
        if !(h > T::zero() && h.is_finite()) || m < 2 {
            return Err(Error::BadTruncation(format!(
                "need h > 0 and m >= 2, got h = {h}, m = {m}"
            )));
        }
        let nodes = (0..=m)
            .map(|j| {
                let u = T::from_usize_lossy(j) * h;
                (-(-u).exp_m1(), (-u).exp())
            })
            .collect();
        Ok(Self {
            nodes,
            free_left: true,
        })
    }

    /// `n` interior nodes uniform in `logit(s)` between `eps_l` and
    /// `1 − eps_r`, zero values at both ends.
    pub fn logistic(eps_l: T, eps_r: T, n: usize) -> Result<Self> {
        let v0 = (eps_l / (T::one() - eps_l)).ln();
        let v1 = ((T::one() - eps_r) / eps_r).ln();
        let step = (v1 - v0) / T::from_usize_lossy(n + 1);
        let nodes = (0..=n + 1)
            .map(|i| {
                let v = v0 + T::from_usize_lossy(i) * step;
                (
                    T::one() / (T::one() + (-v).exp()),
                    T::one() / (T::one() + v.exp()),
                )
            })
            .collect();
        Ok(Self {
            nodes,
            free_left: false,
        })
    }

    /// `n` interior nodes, uniform on `[0, 1]`, zero values at both ends.
    pub fn uniform(n: usize) -> Self {
        let m = T::from_usize_lossy(n + 1);
        let nodes = (0..=n + 1)
            .map(|i| {
                let s = T::from_usize_lossy(i) / m;
                (s, T::from_usize_lossy(n + 1 - i) / m)
            })
            .collect();
        Self {
            nodes,
            free_left: false,
        }
    }

    pub fn nodes(&self) -> &[(T, T)] {
        &self.nodes
    }

    pub fn free_left(&self) -> bool {
        self.free_left
    }

    /// Index of the first node carrying an unknown.
    pub fn first_unknown(&self) -> usize {
        usize::from(!self.free_left)
    }

    pub fn unknowns(&self) -> usize {
        self.nodes.len() - 1 - self.first_unknown()
    }

    /// Width of element `i`, taken from whichever coordinate is smaller.
    pub fn width(&self, i: usize) -> T {
        let (s0, d0) = self.nodes[i];
        let (s1, d1) = self.nodes[i + 1];
        if s0 < T::lit(0.5) {
            s1 - s0
        } else {
            d0 - d1
        }
    }
}
