//! HN filtrations over a finite grid through minimal shrunk subspaces.
//!
//! For a module generated at `α`, the matrix space `𝒜_α` stacks the
//! structure maps `V_{α→β}` with independent scalars. The minimal shrunk
//! subspace of its `(p, q)` blow-up is `k^q ⊗ F` where `F` is the largest
//! HN step whose last factor has discrete slope above `p/(p+q)`, so a
//! single shrunk-subspace computation at `(p0, q0)` splits a non-semistable
//! module and the recursion on sub and quotient yields the filtration.
//!
//! Grid points carry integer weights proportional to the area of their
//! cell, realized by repeating blocks, so the discrete slopes are positive
//! rescalings of the continuous ones.

mod space;

pub use space::{
    extension_degree, shrunk_attempt, shrunk_subspace_random, wong_limit, wong_limit_naive, BlowUp, BlowUpElement,
    MatrixSpace, WongState,
};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{DenseMatrix, Echelon, Elem, PrimeField};
use crate::grmat::{Degree, GradedMatrix, Grid, Rat};
use crate::invariants::{submodule_at, superlevel_sets, HNFactorList, HnFactor};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChengConfig {
    pub seed: u64,
    /// Added to the extension degree `⌈log²_q r⌉`.
    pub g_extra: usize,
    /// Attempts per shrunk-subspace computation, doubling the blow-up each
    /// time.
    pub max_attempts: usize,
    /// Number of Farey approximants tried before the full blow-up.
    pub farey_budget: usize,
    /// Largest `p·q` of a Farey probe.
    pub farey_max_pq: usize,
}

impl Default for ChengConfig {
    fn default() -> Self {
        ChengConfig { seed: 0, g_extra: 2, max_attempts: 8, farey_budget: 6, farey_max_pq: 36 }
    }
}

/// `𝒜_α` with `p0 = dim V_α`, `q0` the total row count of its blocks, and
/// the grid points `β_i > α` in block order.
#[derive(Clone, Debug)]
pub struct AlphaSpace {
    pub space: MatrixSpace,
    pub p0: usize,
    pub q0: usize,
    pub degrees: Vec<Degree>,
}

fn row_basis(m: &DenseMatrix) -> DenseMatrix {
    let mut r = m.clone();
    let rank = r.rref_in_place().len();
    let data = (0..rank).flat_map(|i| r.row(i).to_vec()).collect();
    DenseMatrix::from_rows(m.field(), rank, m.cols(), data)
}

/// `⟨V_α⟩` on the grid points above `α`: every map `V_α → V_β` reduced to a
/// row basis, with the integer weight of its point.
#[derive(Clone, Debug)]
struct GridRep {
    field: PrimeField,
    dim: usize,
    alpha_weight: u64,
    /// `(weight, map)` for the points other than `α`, x-major.
    blocks: Vec<(u64, DenseMatrix)>,
}

impl GridRep {
    fn to_space(&self) -> Result<(MatrixSpace, usize, usize), Error> {
        let id = DenseMatrix::identity(self.field, self.dim);
        let mut mats = Vec::new();
        for _ in 1..self.alpha_weight {
            mats.push(id.clone());
        }
        for (w, t) in &self.blocks {
            if t.rows() > 0 {
                mats.extend(std::iter::repeat(t).take(*w as usize).cloned());
            }
        }
        let q0 = mats.iter().map(|m| m.rows()).sum();
        Ok((MatrixSpace::stacked(self.field, self.dim, mats)?, self.dim, q0))
    }

    fn sub(&self, u: &DenseMatrix) -> GridRep {
        GridRep {
            field: self.field,
            dim: u.cols(),
            alpha_weight: self.alpha_weight,
            blocks: self.blocks.iter().map(|(w, t)| (*w, row_basis(&t.mul(u)))).collect(),
        }
    }

    /// The rep of `⟨V_α/U⟩` in coordinates of the complement `c`.
    fn quotient(&self, u: &DenseMatrix, c: &DenseMatrix) -> GridRep {
        let blocks = self
            .blocks
            .iter()
            .map(|(w, t)| {
                let image = Echelon::spanned_by(self.field, t.rows(), t.mul(u).columns());
                (*w, row_basis(&space::quotient_map(&image).mul(t).mul(c)))
            })
            .collect();
        GridRep { field: self.field, dim: c.cols(), alpha_weight: self.alpha_weight, blocks }
    }
}

/// Unit vectors at the non-pivot positions: a complement of `e`.
fn complement(e: &Echelon) -> DenseMatrix {
    let n = e.ambient_dim();
    let free: Vec<Vec<Elem>> = (0..n)
        .filter(|c| e.pivots().binary_search(c).is_err())
        .map(|c| {
            let mut v = vec![0; n];
            v[c] = 1;
            v
        })
        .collect();
    DenseMatrix::from_columns(e.field(), n, &free)
}

/// Grid coordinates at or above `α` of `grid` together with those of the
/// module, so that dimensions are constant on cells.
fn local_axes(sub: &GradedMatrix, grid: &Grid, alpha: &Degree) -> (Vec<Rat>, Vec<Rat>) {
    let g = grid.union(&sub.induced_grid()).union(&Grid::spanned_by([alpha]));
    let xs = g.xs.into_iter().filter(|&x| x >= alpha.x).collect();
    let ys = g.ys.into_iter().filter(|&y| y >= alpha.y).collect();
    (xs, ys)
}

/// Maps `V_α → V_β` of `⟨V_α⟩` on the axes, x-major.
fn local_maps(sub: &GradedMatrix, alpha: &Degree, xs: &[Rat], ys: &[Rat]) -> Vec<DenseMatrix> {
    let here = sub.pointwise_model(alpha);
    xs.iter()
        .flat_map(|&x| ys.iter().map(move |&y| Degree::new(x, y)))
        .map(|b| sub.pointwise_model(&b).map_from(&here))
        .collect()
}

/// Cell areas on the axes, zero on the last row and column.
fn cell_areas(xs: &[Rat], ys: &[Rat]) -> Vec<Rat> {
    let side = |c: &[Rat], i: usize| c.get(i + 1).map_or(Rat::zero(), |&n| n - c[i]);
    (0..xs.len()).flat_map(|i| (0..ys.len()).map(move |j| side(xs, i) * side(ys, j))).collect()
}

/// The smallest positive integers proportional to the given areas.
fn integer_weights(areas: &[Rat]) -> Vec<u64> {
    let lcm = areas.iter().fold(1i64, |l, a| l.lcm(a.denom()));
    let ints: Vec<i64> = areas.iter().map(|a| (a * Rat::from_integer(lcm)).to_integer()).collect();
    let gcd = ints.iter().fold(0i64, |g, &v| g.gcd(&v)).max(1);
    ints.into_iter().map(|v| (v / gcd) as u64).collect()
}

/// `𝒜_α` of `⟨V_α⟩` on the points of `grid` above `α`, each point with one
/// block. Points where `⟨V_α⟩` vanishes are listed in `degrees` but carry
/// no basis matrix, which would be zero.
pub fn build_a_alpha(m: &GradedMatrix, grid: &Grid, alpha: &Degree) -> Result<AlphaSpace, Error> {
    if !grid.contains(alpha) {
        return Err(Error::OffGrid(*alpha));
    }
    let sub = submodule_at(m, alpha);
    let xs: Vec<Rat> = grid.xs.iter().copied().filter(|&x| x >= alpha.x).collect();
    let ys: Vec<Rat> = grid.ys.iter().copied().filter(|&y| y >= alpha.y).collect();
    let maps = local_maps(&sub, alpha, &xs, &ys);
    let dim = maps[0].cols();
    if dim == 0 {
        return Err(Error::ZeroModule(*alpha));
    }
    let degrees: Vec<Degree> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| Degree::new(x, y))).skip(1).collect();
    let blocks = maps.into_iter().skip(1).map(|t| (1, row_basis(&t))).collect();
    let rep = GridRep { field: m.field(), dim, alpha_weight: 1, blocks };
    let (space, p0, q0) = rep.to_space()?;
    Ok(AlphaSpace { space, p0, q0, degrees })
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn alpha_seed(seed: u64, alpha: &Degree) -> u64 {
    [*alpha.x.numer(), *alpha.x.denom(), *alpha.y.numer(), *alpha.y.denom()]
        .iter()
        .fold(splitmix(seed), |h, &v| splitmix(h ^ v as u64))
}

struct Driver<'a> {
    cfg: &'a ChengConfig,
    alpha: Degree,
    base_seed: u64,
    attempts: usize,
}

impl Driver<'_> {
    /// `F ⊆ k^{p0}` with `k^q ⊗ F` the minimal shrunk subspace of the
    /// `(p, q)` blow-up, retried with larger blow-ups on failure.
    fn shrunk(&mut self, space: &MatrixSpace, p: usize, q: usize, cap: usize) -> Result<Echelon, Error> {
        let blow = BlowUp::new(space.clone(), p, q);
        for attempt in 0..self.cfg.max_attempts {
            let r = (1usize << attempt.min(20)).min(cap.max(1));
            self.attempts += 1;
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix(self.base_seed ^ self.attempts as u64));
            if let Some(f) = shrunk_attempt(&blow, r, self.cfg.g_extra, &mut rng)? {
                return Ok(f);
            }
        }
        Err(Error::ChengFailed { alpha: self.alpha, attempts: self.cfg.max_attempts })
    }

    /// A proper nonzero HN step of the rep, or `None` if it is semistable.
    fn split(&mut self, rep: &GridRep) -> Result<Option<Echelon>, Error> {
        if rep.dim <= 1 {
            return Ok(None);
        }
        let (space, p0, q0) = rep.to_space()?;
        if q0 == 0 {
            return Ok(None);
        }
        let g = p0.gcd(&q0);
        let (tp, tq) = (p0 / g, q0 / g);
        let cap = p0 * q0;
        // Upper approximants of tp/tq along the Stern–Brocot path.
        let (mut lo, mut hi) = ((0usize, 1usize), (1usize, 0usize));
        let mut probes = 0;
        while probes < self.cfg.farey_budget {
            let m = (lo.0 + hi.0, lo.1 + hi.1);
            if m.0 * m.1 > self.cfg.farey_max_pq || m == (tp, tq) {
                break;
            }
            if m.0 * tq > tp * m.1 {
                probes += 1;
                let f = self.shrunk(&space, m.0, m.1, cap)?;
                if f.dim() > 0 {
                    return Ok(Some(f));
                }
                hi = m;
            } else {
                lo = m;
            }
        }
        let f = self.shrunk(&space, tp, tq, cap)?;
        Ok((f.dim() > 0 && f.dim() < p0).then_some(f))
    }

    /// Appends the increments of the filtration of `rep`, lifted to `V_α`
    /// by `lift`.
    fn run(&mut self, rep: &GridRep, lift: &DenseMatrix, out: &mut Vec<DenseMatrix>) -> Result<(), Error> {
        match self.split(rep)? {
            None => out.push(lift.clone()),
            Some(u) => {
                let ub = DenseMatrix::from_columns(rep.field, rep.dim, u.basis());
                let c = complement(&u);
                self.run(&rep.sub(&ub), &lift.mul(&ub), out)?;
                self.run(&rep.quotient(&ub, &c), &lift.mul(&c), out)?;
            }
        }
        Ok(())
    }
}

/// The HN filtration of `⟨V_α⟩` computed on the grid, with continuous
/// slopes. The grid is refined by the module's own coordinates.
///
/// Errors with [`Error::ChengFailed`] when a shrunk-subspace computation
/// keeps failing its certificate.
pub fn hn_cheng(m: &GradedMatrix, grid: &Grid, alpha: &Degree, cfg: &ChengConfig) -> Result<HNFactorList, Error> {
    if !grid.contains(alpha) {
        return Err(Error::OffGrid(*alpha));
    }
    let sub = submodule_at(m, alpha);
    let (xs, ys) = local_axes(&sub, grid, alpha);
    let maps = local_maps(&sub, alpha, &xs, &ys);
    let dim = maps[0].cols();
    if dim == 0 {
        return Err(Error::ZeroModule(*alpha));
    }
    let areas = cell_areas(&xs, &ys);
    if maps.iter().zip(&areas).any(|(t, a)| a.is_zero() && t.rows() > 0) {
        return Err(Error::Unbounded);
    }
    let weights = integer_weights(&areas);
    let rep = GridRep {
        field: m.field(),
        dim,
        alpha_weight: weights[0],
        blocks: weights.iter().zip(&maps).skip(1).filter(|(w, _)| **w > 0).map(|(w, t)| (*w, row_basis(t))).collect(),
    };

    let mut driver = Driver { cfg, alpha: *alpha, base_seed: alpha_seed(cfg.seed, alpha), attempts: 0 };
    let mut increments = Vec::new();
    driver.run(&rep, &DenseMatrix::identity(m.field(), dim), &mut increments)?;

    let ny = ys.len();
    let mut cumulative: Vec<Vec<Elem>> = Vec::new();
    let mut prev = vec![0usize; maps.len()];
    let mut factors = Vec::with_capacity(increments.len());
    for inc in increments {
        cumulative.extend(inc.columns());
        let w = DenseMatrix::from_columns(m.field(), dim, &cumulative);
        let dims: Vec<usize> = maps.iter().map(|t| t.mul(&w).rank()).collect();
        let diff: Vec<usize> = dims.iter().zip(&prev).map(|(a, b)| a - b).collect();
        let integral = diff.iter().zip(&areas).fold(Rat::zero(), |s, (&d, a)| s + a * Rat::from_integer(d as i64));
        debug_assert!(integral.is_positive());
        factors.push(HnFactor {
            staircases: superlevel_sets(*alpha, &xs, &ys, |i, j| diff[i * ny + j]),
            slope: Rat::from_integer(diff[0] as i64) / integral,
        });
        prev = dims;
    }
    Ok(HNFactorList::from_factors(*alpha, factors))
}

#[cfg(test)]
mod tests;
