use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{lattice_grid, summands, support_box, ScanConfig, Work};
use crate::grmat::{Degree, GradedMatrix, Grid, Rat};
use crate::invariants::{submodule_at, HNFactorList, HnFactor, Provenance, SkyscraperQuery, SkyscraperStore};
use crate::subdivision::{exact_hnf_cell, SubdivTree};
use crate::Error;

/// Subdivision trees of `⟨V_α⟩`, one per connected piece, for the cell of
/// `grid` with lower corner `α = grid.point(i, j)`.
fn cell_trees(b: &GradedMatrix, grid: &Grid, i: usize, j: usize) -> Result<Vec<SubdivTree>, Error> {
    let alpha = grid.point(i, j);
    let cell = grid.cell(i, j);
    submodule_at(b, &alpha).split_components().iter().map(|piece| exact_hnf_cell(piece, &cell)).collect()
}

fn collect_factors(trees: &[SubdivTree], beta: &Degree, out: &mut Vec<HnFactor>) -> Result<(), Error> {
    for t in trees {
        out.extend(t.factors_at(beta)?.factors);
    }
    Ok(())
}

/// The filtration of `⟨V_α⟩` read off the subdivision of the grid cell of
/// `b` containing `α`.
pub(super) fn factors_via_cell(b: &GradedMatrix, alpha: &Degree) -> Result<HNFactorList, Error> {
    let grid = b.induced_grid();
    let (i, j) = grid.floor_indices(alpha).ok_or(Error::ZeroModule(*alpha))?;
    let mut factors = Vec::new();
    collect_factors(&cell_trees(b, &grid, i, j)?, alpha, &mut factors)?;
    Ok(HNFactorList::from_factors(*alpha, factors))
}

/// The subdivisions of one summand, keyed by grid indices of the lower
/// corner of their cell.
#[derive(Clone, Debug)]
pub struct SummandCells {
    pub grid: Grid,
    pub trees: HashMap<(usize, usize), Vec<SubdivTree>>,
}

/// The exact skyscraper invariant: slope subdivisions of every grid cell
/// of every summand.
#[derive(Clone, Debug)]
pub struct ExactSkyscraper {
    pub summands: Vec<SummandCells>,
}

impl ExactSkyscraper {
    /// The HN filtration of `⟨V_β⟩` for any `β`; empty outside the support.
    pub fn factors_at(&self, beta: &Degree) -> Result<HNFactorList, Error> {
        let mut factors = Vec::new();
        for s in &self.summands {
            if let Some(trees) = s.grid.floor_indices(beta).and_then(|ij| s.trees.get(&ij)) {
                collect_factors(trees, beta, &mut factors)?;
            }
        }
        Ok(HNFactorList::from_factors(*beta, factors))
    }

    /// Number of stored trees.
    pub fn num_trees(&self) -> usize {
        self.summands.iter().map(|s| s.trees.values().map(Vec::len).sum::<usize>()).sum()
    }

    /// The filtrations at the given degrees as a store with exact keys.
    pub fn snapshot<'a>(&self, keys: impl IntoIterator<Item = &'a Degree>) -> Result<SkyscraperStore, Error> {
        let mut store = SkyscraperStore::new(Provenance::Exact);
        for k in keys {
            let list = self.factors_at(k)?;
            if !list.is_empty() {
                store.insert(list);
            }
        }
        Ok(store)
    }
}

impl SkyscraperQuery for ExactSkyscraper {
    fn query(&self, theta: Rat, alpha: &Degree, beta: &Degree) -> Result<usize, Error> {
        if !alpha.leq(beta) {
            return Err(Error::NotBelow { lower: *alpha, upper: *beta });
        }
        Ok(self.factors_at(alpha)?.count(theta, beta))
    }
}

/// Slope subdivisions of every cell of every summand of a bounded module.
pub fn exact_skyscraper(m: &GradedMatrix) -> Result<ExactSkyscraper, Error> {
    if !m.is_bounded() {
        return Err(Error::Unbounded);
    }
    let summands = m
        .split_components()
        .par_iter()
        .map(|b| {
            let grid = b.induced_grid();
            let cells: Vec<(usize, usize)> =
                (0..grid.xs.len()).flat_map(|i| (0..grid.ys.len()).map(move |j| (i, j))).collect();
            let trees = cells
                .par_iter()
                .filter(|&&(i, j)| b.dim_at(&grid.point(i, j)) > 0)
                .map(|&(i, j)| Ok(((i, j), cell_trees(b, &grid, i, j)?)))
                .collect::<Result<HashMap<_, _>, Error>>()?;
            Ok(SummandCells { grid, trees })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ExactSkyscraper { summands })
}

struct SweepResult {
    entries: Vec<(Degree, Vec<HnFactor>)>,
    work: usize,
    peak_cache: usize,
}

/// One summand's sweep over the lattice points in colexicographic order.
/// The pointer `⌊α⌋` on the summand's grid moves right along a row of
/// cells; when it moves up, the cached row is dropped.
fn sweep(b: &GradedMatrix, points: &[Degree]) -> Result<SweepResult, Error> {
    let grid = b.induced_grid();
    let mut cache: BTreeMap<usize, Vec<SubdivTree>> = BTreeMap::new();
    let mut row = None;
    let mut out = SweepResult { entries: Vec::new(), work: 0, peak_cache: 0 };
    for alpha in points {
        if b.dim_at(alpha) == 0 {
            continue;
        }
        let (i, j) = grid.floor_indices(alpha).expect("support lies above the generators");
        if row != Some(j) {
            cache.clear();
            row = Some(j);
        }
        if let std::collections::btree_map::Entry::Vacant(slot) = cache.entry(i) {
            slot.insert(cell_trees(b, &grid, i, j)?);
            out.work += 1;
            out.peak_cache = out.peak_cache.max(cache.len());
        }
        let mut factors = Vec::new();
        collect_factors(&cache[&i], alpha, &mut factors)?;
        out.entries.push((*alpha, factors));
    }
    Ok(out)
}

/// The ε-approximation assembled from slope subdivisions, computing each
/// cell of each summand's grid at most once. Produces the same store as
/// [`super::approx_skyscraper`].
pub fn parallel_grid_scan(m: &GradedMatrix, cfg: &ScanConfig) -> Result<(SkyscraperStore, Work), Error> {
    cfg.validate()?;
    let mut store = SkyscraperStore::new(Provenance::Lattice { epsilon: cfg.epsilon });
    let Some((lo, hi)) = support_box(m, cfg) else {
        return Ok((store, Work::default()));
    };
    let parts = summands(m, cfg);
    let mut points: Vec<Degree> = lattice_grid(&lo, &hi, cfg.epsilon).points().collect();
    points.sort_by_key(|p| (p.y, p.x));
    let sweeps = parts.par_iter().map(|b| sweep(b, &points)).collect::<Result<Vec<_>, Error>>()?;
    let mut work = Work::default();
    let mut merged: BTreeMap<Degree, Vec<HnFactor>> = BTreeMap::new();
    for s in sweeps {
        work.per_summand.push(s.work);
        work.peak_cache.push(s.peak_cache);
        for (alpha, factors) in s.entries {
            merged.entry(alpha).or_default().extend(factors);
        }
    }
    for (alpha, factors) in merged {
        store.insert(HNFactorList::from_factors(alpha, factors));
    }
    log::debug!("scan: {} entries, {} cells", store.len(), work.total());
    Ok((store, work))
}
