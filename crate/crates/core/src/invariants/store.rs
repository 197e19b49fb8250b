use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::staircase::canonical_staircases;
use super::Staircase;
use crate::grmat::{Degree, Rat};
use crate::Error;

/// One semistable factor `⟨F^i⟩/⟨F^{i-1}⟩`: its Hilbert function as
/// superlevel staircases, and its slope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HnFactor {
    pub staircases: Vec<Staircase>,
    pub slope: Rat,
}

impl HnFactor {
    pub fn dim_at(&self, beta: &Degree) -> usize {
        self.staircases.iter().filter(|s| s.contains(beta)).count()
    }

    /// Number of staircases; a factor is an interval module iff this is 1.
    pub fn thickness(&self) -> usize {
        self.staircases.len()
    }
}

/// The Harder–Narasimhan filtration of `⟨V_α⟩`, as factors with strictly
/// decreasing slopes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HNFactorList {
    pub alpha: Degree,
    pub factors: Vec<HnFactor>,
}

impl HNFactorList {
    pub fn empty(alpha: Degree) -> Self {
        HNFactorList { alpha, factors: Vec::new() }
    }

    /// Sorts factors by decreasing slope and fuses factors of equal slope
    /// into one, keeping the staircases in canonical superlevel form.
    pub fn from_factors(alpha: Degree, mut factors: Vec<HnFactor>) -> Self {
        factors.sort_by_key(|f| std::cmp::Reverse(f.slope));
        let mut out: Vec<HnFactor> = Vec::with_capacity(factors.len());
        for f in factors {
            match out.last_mut() {
                Some(last) if last.slope == f.slope => {
                    let mut parts = std::mem::take(&mut last.staircases);
                    parts.extend(f.staircases);
                    last.staircases = canonical_staircases(alpha, &parts);
                }
                _ => out.push(HnFactor { staircases: canonical_staircases(alpha, &f.staircases), slope: f.slope }),
            }
        }
        HNFactorList { alpha, factors: out }
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `dim ⟨V_α⟩_β`.
    pub fn dim_at(&self, beta: &Degree) -> usize {
        self.factors.iter().map(|f| f.dim_at(beta)).sum()
    }

    /// `s^θ(α, β)`: dimension at `β` of the largest filtration step whose
    /// factors all have slope `≥ θ`.
    pub fn count(&self, theta: Rat, beta: &Degree) -> usize {
        self.factors.iter().take_while(|f| f.slope >= theta).map(|f| f.dim_at(beta)).sum()
    }

    pub fn slopes_strictly_decrease(&self) -> bool {
        self.factors.windows(2).all(|w| w[0].slope > w[1].slope)
    }
}

/// Queries of the skyscraper invariant `s^θ(α, β)`.
pub trait SkyscraperQuery {
    fn query(&self, theta: Rat, alpha: &Degree, beta: &Degree) -> Result<usize, Error>;
}

/// Where the keys of a store come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Keys are exact degrees; lookups need an exact key.
    Exact,
    /// Keys lie on the lattice `εZ²`; lookups snap down onto it.
    Lattice { epsilon: Rat },
}

/// A dictionary `α ↦ HN(⟨V_α⟩)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkyscraperStore {
    pub provenance: Provenance,
    entries: BTreeMap<Degree, HNFactorList>,
}

fn snap(v: Rat, eps: Rat) -> Rat {
    (v / eps).floor() * eps
}

impl SkyscraperStore {
    pub fn new(provenance: Provenance) -> Self {
        SkyscraperStore { provenance, entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, list: HNFactorList) {
        self.entries.insert(list.alpha, list);
    }

    /// Adds all entries of `other`; entries of `other` win on equal keys.
    pub fn merge(&mut self, other: SkyscraperStore) {
        self.entries.extend(other.entries);
    }

    pub fn get(&self, alpha: &Degree) -> Option<&HNFactorList> {
        self.entries.get(alpha)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in lexicographic key order.
    pub fn iter(&self) -> impl Iterator<Item = &HNFactorList> {
        self.entries.values()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Degree> {
        self.entries.keys()
    }

    /// The entry used for queries based at `alpha`.
    pub fn lookup(&self, alpha: &Degree) -> Option<&HNFactorList> {
        match self.provenance {
            Provenance::Exact => self.entries.get(alpha),
            Provenance::Lattice { epsilon } => {
                self.entries.get(&Degree::new(snap(alpha.x, epsilon), snap(alpha.y, epsilon)))
            }
        }
    }
}

impl SkyscraperQuery for SkyscraperStore {
    fn query(&self, theta: Rat, alpha: &Degree, beta: &Degree) -> Result<usize, Error> {
        if !alpha.leq(beta) {
            return Err(Error::NotBelow { lower: *alpha, upper: *beta });
        }
        Ok(self.lookup(alpha).map_or(0, |l| l.count(theta, beta)))
    }
}

/// `[lower, upper]` enclosing the erosion distance on a probe set;
/// `upper` is `None` when no tested shift satisfied both conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErosionBracket {
    pub lower: Rat,
    pub upper: Option<Rat>,
}

/// Brackets the erosion distance between `r` and `s` at `θ`: the least
/// `ε = k·spacing`, `k ≤ max_steps`, with `s(α-ε, β+ε) ≤ r(α, β)` and
/// `r(α-ε, β+ε) ≤ s(α, β)` for all probe pairs `α ≤ β`. The search is a
/// bisection over `k`, which relies on both functions being
/// order-reversing in the sense `f(α', β') ≤ f(α, β)` for
/// `α' ≤ α ≤ β ≤ β'`.
pub fn erosion_distance(
    r: &(impl SkyscraperQuery + Sync + ?Sized),
    s: &(impl SkyscraperQuery + Sync + ?Sized),
    theta: Rat,
    probes: &[Degree],
    spacing: Rat,
    max_steps: usize,
) -> Result<ErosionBracket, Error> {
    use rayon::prelude::*;

    assert!(spacing.is_positive());
    let pairs: Vec<(Degree, Degree)> =
        probes.iter().flat_map(|a| probes.iter().filter(move |b| a.leq(b)).map(move |b| (*a, *b))).collect();
    let base: Vec<(usize, usize)> = pairs
        .par_iter()
        .map(|(a, b)| Ok((r.query(theta, a, b)?, s.query(theta, a, b)?)))
        .collect::<Result<_, Error>>()?;
    let holds = |k: usize| -> Result<bool, Error> {
        let eps = spacing * Rat::from_integer(k as i64);
        pairs
            .par_iter()
            .zip(&base)
            .try_fold(
                || true,
                |ok, ((a, b), &(rv, sv))| {
                    if !ok {
                        return Ok(false);
                    }
                    let lo = a.offset(-eps, -eps);
                    let hi = b.offset(eps, eps);
                    Ok(s.query(theta, &lo, &hi)? <= rv && r.query(theta, &lo, &hi)? <= sv)
                },
            )
            .try_reduce(|| true, |x, y| Ok(x && y))
    };
    if holds(0)? {
        return Ok(ErosionBracket { lower: Rat::zero(), upper: Some(Rat::zero()) });
    }
    if !holds(max_steps)? {
        return Ok(ErosionBracket { lower: spacing * Rat::from_integer(max_steps as i64), upper: None });
    }
    let (mut bad, mut good) = (0usize, max_steps);
    while good - bad > 1 {
        let mid = (bad + good) / 2;
        if holds(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(ErosionBracket {
        lower: spacing * Rat::from_integer(bad as i64),
        upper: Some(spacing * Rat::from_integer(good as i64)),
    })
}
