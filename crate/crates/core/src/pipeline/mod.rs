//! Skyscraper invariant stores assembled from per-degree HN filtrations,
//! and the filtered landscapes read off them.
//!
//! [`approx_skyscraper`] computes the filtration at every point of `εZ²` in
//! the support with a selectable engine. [`exact_skyscraper`] computes one
//! slope subdivision per cell of each summand's grid and answers queries
//! anywhere. [`parallel_grid_scan`] produces the same store as the
//! approximation from cached subdivisions.

mod exact;
mod landscape;

pub use exact::{exact_skyscraper, parallel_grid_scan, ExactSkyscraper, SummandCells};
pub use landscape::{filtered_landscape, landscape_points, landscapes, Anchor, LandscapeParams, LandscapeRow};

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use rayon::prelude::*;

use crate::cheng::{hn_cheng, ChengConfig};
use crate::grmat::{int, Degree, GradedMatrix, Grid, Rat};
use crate::hn_core::{hn_filtration_with, merge_factors};
use crate::invariants::{HNFactorList, Provenance, SkyscraperStore};
use crate::Error;

/// Which routine computes the filtration at a single degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Brute,
    Cheng,
    Exact,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "brute" => Ok(Engine::Brute),
            "cheng" => Ok(Engine::Cheng),
            "exact" => Ok(Engine::Exact),
            _ => Err(Error::Config(format!("unknown engine `{s}`"))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Brute => "brute",
            Engine::Cheng => "cheng",
            Engine::Exact => "exact",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub epsilon: Rat,
    pub seed: u64,
    pub engine: Engine,
    /// The box `[lo, hi]` the module is clipped to. Without it, `lo` is the
    /// least degree of the presentation and `hi` the largest plus `margin`.
    pub support: Option<(Degree, Degree)>,
    pub margin: Rat,
    /// Subspace pruning in the brute-force engine.
    pub filter: bool,
    pub cheng: ChengConfig,
    pub landscape: LandscapeParams,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            epsilon: int(1),
            seed: 0,
            engine: Engine::Brute,
            support: None,
            margin: int(1),
            filter: true,
            cheng: ChengConfig::default(),
            landscape: LandscapeParams::default(),
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !self.epsilon.is_positive() {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.margin.is_negative() {
            return Err(Error::Config(format!("margin must be non-negative, got {}", self.margin)));
        }
        if let Some((lo, hi)) = &self.support {
            if !lo.leq(hi) {
                return Err(Error::NotBelow { lower: *lo, upper: *hi });
            }
        }
        if self.landscape.resolution < 2 {
            return Err(Error::Config(format!("resolution must be at least 2, got {}", self.landscape.resolution)));
        }
        Ok(())
    }

    fn cheng_config(&self) -> ChengConfig {
        ChengConfig { seed: self.seed, ..self.cheng }
    }
}

/// Number of single-degree filtrations computed for each summand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Work {
    pub per_summand: Vec<usize>,
    /// Largest number of cached cells per summand during a scan.
    pub peak_cache: Vec<usize>,
}

impl Work {
    pub fn total(&self) -> usize {
        self.per_summand.iter().sum()
    }
}

/// The box `[lo, hi]` used for `m`, `None` for a presentation without
/// generators.
pub fn support_box(m: &GradedMatrix, cfg: &ScanConfig) -> Option<(Degree, Degree)> {
    if m.num_rows() == 0 {
        return None;
    }
    cfg.support.or_else(|| Some((m.min_degree()?, m.max_degree()?.offset(cfg.margin, cfg.margin))))
}

/// `m` with cap relations at the upper corner of its box, hence bounded.
pub fn clip(m: &GradedMatrix, cfg: &ScanConfig) -> GradedMatrix {
    match support_box(m, cfg) {
        Some((_, hi)) => m.with_caps(&hi),
        None => m.clone(),
    }
}

/// Connected summands of the clipped module.
pub fn summands(m: &GradedMatrix, cfg: &ScanConfig) -> Vec<GradedMatrix> {
    clip(m, cfg).split_components()
}

fn axis(lo: Rat, hi: Rat, eps: Rat) -> Vec<Rat> {
    let mut t = (lo / eps).ceil() * eps;
    let mut out = Vec::new();
    while t < hi {
        out.push(t);
        t += eps;
    }
    out
}

/// The points of `εZ²` in `[lo, hi)`.
pub fn lattice_grid(lo: &Degree, hi: &Degree, eps: Rat) -> Grid {
    Grid::new(axis(lo.x, hi.x, eps), axis(lo.y, hi.y, eps))
}

fn engine_factors(b: &GradedMatrix, alpha: &Degree, cfg: &ScanConfig, grid: &Grid) -> Result<HNFactorList, Error> {
    match cfg.engine {
        Engine::Brute => hn_filtration_with(b, alpha, cfg.filter),
        Engine::Cheng => hn_cheng(b, grid, alpha, &cfg.cheng_config()),
        Engine::Exact => exact::factors_via_cell(b, alpha),
    }
}

/// The ε-approximation: the HN filtration at every point of `εZ²` in the
/// support, computed per summand with the configured engine.
pub fn approx_skyscraper(m: &GradedMatrix, cfg: &ScanConfig) -> Result<SkyscraperStore, Error> {
    Ok(approx_with_work(m, cfg)?.0)
}

pub fn approx_with_work(m: &GradedMatrix, cfg: &ScanConfig) -> Result<(SkyscraperStore, Work), Error> {
    cfg.validate()?;
    let mut store = SkyscraperStore::new(Provenance::Lattice { epsilon: cfg.epsilon });
    let Some((lo, hi)) = support_box(m, cfg) else {
        return Ok((store, Work::default()));
    };
    let parts = summands(m, cfg);
    let grid = lattice_grid(&lo, &hi, cfg.epsilon);
    let points: Vec<Degree> = grid.points().collect();
    let entries = points
        .par_iter()
        .map(|alpha| {
            let mut lists = Vec::new();
            let mut used = vec![false; parts.len()];
            for (i, b) in parts.iter().enumerate() {
                if b.dim_at(alpha) > 0 {
                    lists.push(engine_factors(b, alpha, cfg, &grid)?);
                    used[i] = true;
                }
            }
            let merged = if lists.is_empty() { None } else { Some(merge_factors(alpha, &lists)?) };
            Ok((merged, used))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut work = Work { per_summand: vec![0; parts.len()], peak_cache: vec![0; parts.len()] };
    for (merged, used) in entries {
        for (w, u) in work.per_summand.iter_mut().zip(used) {
            *w += u as usize;
        }
        if let Some(list) = merged {
            store.insert(list);
        }
    }
    log::debug!("approx: {} entries, {} filtrations", store.len(), work.total());
    Ok((store, work))
}

/// A factor of the store that is not an interval module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalViolation {
    pub alpha: Degree,
    pub factor: usize,
    pub thickness: usize,
    pub slope: Rat,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalReport {
    pub entries: usize,
    pub factors: usize,
    pub violations: Vec<IntervalViolation>,
}

impl IntervalReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Flags every factor whose Hilbert function needs more than one staircase.
pub fn factor_interval_check(store: &SkyscraperStore) -> IntervalReport {
    let mut report = IntervalReport::default();
    for list in store.iter() {
        report.entries += 1;
        for (i, f) in list.factors.iter().enumerate() {
            report.factors += 1;
            if f.thickness() > 1 {
                report.violations.push(IntervalViolation {
                    alpha: list.alpha,
                    factor: i,
                    thickness: f.thickness(),
                    slope: f.slope,
                });
            }
        }
    }
    report
}
