//! Betti numbers, Hilbert functions, integrals, slopes, staircases and the
//! skyscraper invariant store.

mod staircase;
mod store;

use num_traits::Zero;

pub use staircase::{canonical_staircases, superlevel_sets, total_area, Staircase};
pub use store::{
    erosion_distance, ErosionBracket, HNFactorList, HnFactor, Provenance, SkyscraperQuery, SkyscraperStore,
};

use crate::field::Elem;
use crate::grmat::{kernel, minimize, submodule_presentation, Degree, GradedMatrix, Grid, Rat};
use crate::Error;

/// Degrees of a minimal free resolution `0 → F2 → F1 → F0`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BettiTable {
    pub b0: Vec<Degree>,
    pub b1: Vec<Degree>,
    pub b2: Vec<Degree>,
}

impl BettiTable {
    fn all(&self) -> impl Iterator<Item = &Degree> {
        self.b0.iter().chain(&self.b1).chain(&self.b2)
    }

    /// `dim V_β` as the alternating count of Betti degrees below `β`.
    pub fn dim_at(&self, beta: &Degree) -> i64 {
        let below = |v: &[Degree]| v.iter().filter(|d| d.leq(beta)).count() as i64;
        below(&self.b0) - below(&self.b1) + below(&self.b2)
    }
}

pub fn betti_numbers(m: &GradedMatrix) -> BettiTable {
    let min = minimize(m);
    // The syzygies of a minimal presentation are already minimal.
    let ker = kernel(&min);
    BettiTable { b0: min.row_degrees().to_vec(), b1: min.col_degrees().to_vec(), b2: ker.col_degrees().to_vec() }
}

/// `∫ dim V` from the Betti numbers, given a bound `B` above every Betti
/// degree.
pub fn integral_dim(bt: &BettiTable, bound: &Degree) -> Result<Rat, Error> {
    if let Some(d) = bt.all().find(|d| !d.leq(bound)) {
        return Err(Error::BoundTooSmall { bound: *bound, degree: *d });
    }
    let term = |v: &[Degree]| v.iter().fold(Rat::zero(), |acc, d| acc + (bound.x - d.x) * (bound.y - d.y));
    Ok(term(&bt.b0) - term(&bt.b1) + term(&bt.b2))
}

/// A basis of `V_α` as graded columns at `α`.
pub fn generators_at(m: &GradedMatrix, alpha: &Degree) -> Vec<(Degree, Vec<Elem>)> {
    m.pointwise_model(alpha).basis_vectors().into_iter().map(|v| (*alpha, v)).collect()
}

/// Minimal presentation of `⟨V_α⟩`, generated by a basis of `V_α`.
pub fn submodule_at(m: &GradedMatrix, alpha: &Degree) -> GradedMatrix {
    let s = generators_at(m, alpha);
    minimize(&submodule_presentation(m, &s).expect("basis columns are homogeneous"))
}

/// `dim V_α / ∫ dim ⟨V_α⟩`, computed from the Betti numbers of `⟨V_α⟩`.
pub fn slope_at(m: &GradedMatrix, alpha: &Degree) -> Result<Rat, Error> {
    let sub = submodule_at(m, alpha);
    if sub.num_rows() == 0 {
        return Err(Error::ZeroModule(*alpha));
    }
    if !sub.is_bounded() {
        return Err(Error::Unbounded);
    }
    let bt = betti_numbers(&sub);
    let bound = bt.all().fold(*alpha, |acc, d| acc.join(d));
    let area = integral_dim(&bt, &bound)?;
    Ok(Rat::from_integer(sub.num_rows() as i64) / area)
}

/// Pointwise dimension on the cells of a grid: `values[i][j]` is the
/// dimension on the cell with lower corner `(xs[i], ys[j])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertFn {
    pub grid: Grid,
    pub values: Vec<Vec<usize>>,
}

impl HilbertFn {
    /// Value at any degree, zero below the grid.
    pub fn at(&self, beta: &Degree) -> usize {
        self.grid.floor_indices(beta).map_or(0, |(i, j)| self.values[i][j])
    }

    /// Sum of value times cell area, `None` if a nonzero value sits on an
    /// unbounded cell.
    pub fn integral(&self) -> Option<Rat> {
        let (nx, ny) = (self.grid.xs.len(), self.grid.ys.len());
        let mut total = Rat::zero();
        for i in 0..nx {
            for j in 0..ny {
                let v = self.values[i][j];
                if v == 0 {
                    continue;
                }
                if i + 1 == nx || j + 1 == ny {
                    return None;
                }
                let w = self.grid.xs[i + 1] - self.grid.xs[i];
                let h = self.grid.ys[j + 1] - self.grid.ys[j];
                total += w * h * Rat::from_integer(v as i64);
            }
        }
        Some(total)
    }
}

/// The Hilbert function sampled at the cell corners of `grid`. Exact on
/// the cells of any grid containing the induced grid.
pub fn hilbert_function(m: &GradedMatrix, grid: &Grid) -> HilbertFn {
    let values = grid.xs.iter().map(|&x| grid.ys.iter().map(|&y| m.dim_at(&Degree::new(x, y))).collect()).collect();
    HilbertFn { grid: grid.clone(), values }
}

/// Staircases of the superlevel sets of the Hilbert function of a module
/// generated at a single degree.
pub fn superlevel_staircases(m: &GradedMatrix) -> Result<Vec<Staircase>, Error> {
    let Some(alpha) = m.generated_at() else {
        return if m.num_rows() == 0 { Ok(Vec::new()) } else { Err(Error::NotUniquelyGenerated) };
    };
    let grid = m.induced_grid();
    let xs: Vec<Rat> = grid.xs.iter().copied().filter(|&x| x >= alpha.x).collect();
    let ys: Vec<Rat> = grid.ys.iter().copied().filter(|&y| y >= alpha.y).collect();
    let values: Vec<Vec<usize>> =
        xs.iter().map(|&x| ys.iter().map(|&y| m.dim_at(&Degree::new(x, y))).collect()).collect();
    Ok(superlevel_sets(alpha, &xs, &ys, |i, j| values[i][j]))
}
