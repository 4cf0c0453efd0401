use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::law::BranchingLaw;
use crate::Scalar;

/// The q-matrix `q_ij = i² b_{j−i+1}` restricted to states `0..=N`.
///
/// State 0 is absorbing. Jumps from `i` to `j > N` are not represented:
/// their rate is the row defect of row `i`, and mass that takes them is
/// lost from the chain.
#[derive(Debug, Clone)]
pub struct TruncatedGenerator<T> {
    n: usize,
    b: Vec<T>,
}

impl<T: Scalar> TruncatedGenerator<T> {
    pub fn new(law: &BranchingLaw<T>, n: usize) -> Result<Self> {
        if n < 10 {
            return Err(Error::BadTruncation(format!(
                "state cap N = {n} must be at least 10"
            )));
        }
        Ok(Self {
            n,
            b: law.b.clone(),
        })
    }

    pub fn cap(&self) -> usize {
        self.n
    }

    /// `q_ij`, zero outside the band and for `i = 0`.
    pub fn entry(&self, i: usize, j: usize) -> T {
        if i == 0 || i > self.n || j > self.n || j + 1 < i {
            return T::zero();
        }
        let k = j + 1 - i;
        self.b
            .get(k)
            .map_or(T::zero(), |&bk| T::from_usize_lossy(i * i) * bk)
    }

    /// Largest jump upward.
    pub fn upper_bandwidth(&self) -> usize {
        self.b.len() - 2
    }

    /// `max_i |q_ii| = N² |b₁|`.
    pub fn uniformization_rate(&self) -> T {
        T::from_usize_lossy(self.n * self.n) * self.b[1].abs()
    }

    /// Total rate of jumps from row `i` to states above `N`.
    pub fn row_defect(&self, i: usize) -> T {
        if i == 0 || i > self.n {
            return T::zero();
        }
        let i2 = T::from_usize_lossy(i * i);
        (2..self.b.len())
            .filter(|&k| i + k - 1 > self.n)
            .map(|k| i2 * self.b[k])
            .sum()
    }

    /// Nonzero entries as `i j q_ij` lines.
    pub fn coo_dump(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.n {
            let lo = i - 1;
            let hi = (i + self.upper_bandwidth()).min(self.n);
            for j in lo..=hi {
                let q = self.entry(i, j);
                if !q.is_zero() {
                    let _ = writeln!(out, "{i} {j} {q:e}");
                }
            }
        }
        out
    }

    /// One uniformized step `out = v (I + Q/Λ)`.
    pub(crate) fn step(&self, v: &[T], out: &mut [T], inv_rate: T) {
        out.iter_mut().for_each(|x| *x = T::zero());
        out[0] = v[0];
        for i in 1..=self.n {
            let vi = v[i];
            if vi.is_zero() {
                continue;
            }
            let f = vi * T::from_usize_lossy(i * i) * inv_rate;
            out[i - 1] += f * self.b[0];
            out[i] += vi + f * self.b[1];
            for k in 2..self.b.len() {
                let j = i + k - 1;
                if j > self.n {
                    break;
                }
                out[j] += f * self.b[k];
            }
        }
    }
}
