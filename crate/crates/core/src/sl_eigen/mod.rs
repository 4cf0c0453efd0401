//! First eigenvalue `ℓ₀` of `−(s y')' = ℓ y / B(s)` on `(0, 1)`.
//!
//! `ℓ₀` is the infimum of `∫ s g'² ds / ∫ g² / B ds`. Piecewise-linear trial
//! functions that vanish at the right end of the mesh are admissible, so
//! every discrete eigenvalue is an upper bound on `ℓ₀`. At `s = 0` the
//! weight `s` vanishes and the trial value there is left free; with
//! `eps_l > 0` a zero boundary value is imposed instead.
//!
//! [`refine`] runs a schedule of nested meshes `s = 1 − e^{−u}` with
//! uniform `u` steps, so the estimates decrease along the schedule.

mod assemble;
mod grid;
mod tridiag;

pub use assemble::{assemble_with, Pencil};
pub use grid::Grid;
pub use tridiag::{
    bisect_eigenvalue, smallest_eig, smallest_k, sturm_count, EigPair, RESIDUAL_TOL,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::law::BranchingLaw;
use crate::Scalar;

pub const DEFAULT_TARGET_REL_TOL: f64 = 1e-8;
/// Number of meshes in the default schedule.
pub const DEFAULT_LEVELS: usize = 7;
/// Cap on the number of eigenfunction samples kept in a result.
pub const MAX_SAMPLES: usize = 4097;
/// Eigenvalues reported past `ℓ₀`.
const EXTRA_EIGENVALUES: usize = 2;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HistoryEntry<T> {
    pub eps_l: T,
    pub eps_r: T,
    pub n: usize,
    pub ell0: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenResult<T> {
    pub ell0: T,
    pub epsilon_left: T,
    pub epsilon_right: T,
    /// Number of unknowns on the final mesh.
    pub n_grid: usize,
    pub history: Vec<HistoryEntry<T>>,
    /// `(s, φ₀(s))` with `∫ φ₀² / B = 1` in the discrete sense and `φ₀ > 0`.
    pub eigfun: Vec<(T, T)>,
    pub converged: bool,
    pub residual: T,
    /// `ℓ₁, ℓ₂` on the final mesh.
    pub higher: Vec<T>,
}

/// Discrete problem for `law` with truncation offsets `eps_l`, `eps_r` and
/// `n` interior nodes. `eps_l = 0` selects the free-left mesh.
pub fn assemble<T: Scalar>(
    law: &BranchingLaw<T>,
    eps_l: T,
    eps_r: T,
    n: usize,
) -> Result<(Grid<T>, Pencil<T>)> {
    law.ensure_subcritical()?;
    let ok = eps_l >= T::zero() && eps_r > T::zero() && eps_l < T::one() - eps_r && n >= 16;
    if !ok {
        return Err(Error::BadTruncation(format!(
            "need 0 <= eps_l < 1 - eps_r < 1 and n >= 16, got eps_l = {eps_l}, eps_r = {eps_r}, n = {n}"
        )));
    }
    let grid = if eps_l.is_zero() {
        Grid::natural(-eps_r.ln() / T::from_usize_lossy(n + 1), n + 1)?
    } else {
        Grid::logistic(eps_l, eps_r, n)?
    };
    let pencil = law_pencil(law, &grid);
    Ok((grid, pencil))
}

fn law_pencil<T: Scalar>(law: &BranchingLaw<T>, grid: &Grid<T>) -> Pencil<T> {
    let a = law.a_poly();
    assemble_with(grid, |s| s, |s, d| T::one() / (d * a.eval(s)))
}

/// Runs the default schedule until successive estimates agree to
/// `target_rel_tol`.
pub fn refine<T: Scalar>(law: &BranchingLaw<T>, target_rel_tol: f64) -> Result<EigenResult<T>> {
    refine_levels(law, target_rel_tol, DEFAULT_LEVELS)
}

/// Mesh `k` has step `log(10)/2^{k+7}` in `u` and ends at `1 − s = 10^{−3(k+2)}`.
pub fn refine_levels<T: Scalar>(
    law: &BranchingLaw<T>,
    target_rel_tol: f64,
    levels: usize,
) -> Result<EigenResult<T>> {
    law.ensure_subcritical()?;
    if levels == 0 {
        return Err(Error::BadTruncation(
            "empty refinement schedule".to_string(),
        ));
    }
    let tol = T::tol_or_eps(target_rel_tol);
    let mut history = Vec::new();
    let mut converged = false;
    let mut last = None;
    for k in 0..levels {
        let steps = 1usize << (k + 7);
        let h = T::LN_10() / T::from_usize_lossy(steps);
        let grid = Grid::natural(h, 3 * (k + 2) * steps)?;
        let pencil = law_pencil(law, &grid);
        let pair = smallest_eig(&pencil)?;
        let eps_r = grid.nodes().last().expect("nonempty mesh").1;
        if let Some(prev) = history.last().map(|e: &HistoryEntry<T>| e.ell0) {
            if (prev - pair.value).abs() <= tol * pair.value {
                converged = true;
            }
        }
        history.push(HistoryEntry {
            eps_l: T::zero(),
            eps_r,
            n: pencil.len(),
            ell0: pair.value,
        });
        last = Some((grid, pencil, pair));
        if converged {
            break;
        }
    }
    let (grid, pencil, pair) = last.expect("at least one level");
    let higher = smallest_k(&pencil, 1 + EXTRA_EIGENVALUES)?
        .into_iter()
        .skip(1)
        .collect();
    let final_entry = *history.last().expect("nonempty history");
    Ok(EigenResult {
        ell0: pair.value,
        epsilon_left: final_entry.eps_l,
        epsilon_right: final_entry.eps_r,
        n_grid: final_entry.n,
        eigfun: sample_eigfun(&grid, &pair.vector),
        history,
        converged,
        residual: pair.residual,
        higher,
    })
}

fn sample_eigfun<T: Scalar>(grid: &Grid<T>, v: &[T]) -> Vec<(T, T)> {
    let nodes = grid.nodes();
    let first = grid.first_unknown();
    let mut all: Vec<(T, T)> = nodes[first..first + v.len()]
        .iter()
        .zip(v)
        .map(|(&(s, _), &y)| (s, y))
        .collect();
    let tail = nodes.last().expect("nonempty mesh").0;
    all.push((tail, T::zero()));
    let stride = all.len().div_ceil(MAX_SAMPLES).max(1);
    let last = all.len() - 1;
    all.into_iter()
        .enumerate()
        .filter(|&(i, _)| i % stride == 0 || i == last)
        .map(|(_, p)| p)
        .collect()
}
