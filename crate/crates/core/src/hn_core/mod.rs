//! Exhaustive highest-slope search over the subspaces of `V_α` and
//! Harder–Narasimhan filtrations by iterated quotients.

mod local;
mod subspaces;

use num_traits::Zero;

pub use local::LocalModel;
pub use subspaces::{gaussian_binomial, SubspaceIter};

use crate::field::Elem;
use crate::grmat::{quotient_presentation, Degree, GradedMatrix, Rat};
use crate::invariants::{submodule_at, HNFactorList, HnFactor};
use crate::Error;

/// A subspace of `V_α` and the inverse slope `∫ dim ⟨W⟩ / dim W` of the
/// submodule it generates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeRecord {
    /// Basis vectors over the generators of the presentation.
    pub basis: Vec<Vec<Elem>>,
    pub inv_slope: Rat,
}

impl SlopeRecord {
    pub fn slope(&self) -> Rat {
        self.inv_slope.recip()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Result of a search on a [`LocalModel`], in coordinates of `V_α`.
#[derive(Clone, Debug)]
pub struct LocalMax {
    pub basis: Vec<Vec<Elem>>,
    pub dims: Vec<usize>,
    pub inv_slope: Rat,
    /// Number of subspaces whose slope was evaluated.
    pub evaluated: usize,
}

fn inv_slope(integral: Rat, k: usize) -> Rat {
    integral / Rat::from_integer(k as i64)
}

/// The highest-slope subspace of the model's `V_α`. Ties go to the smaller
/// dimension, then to the earlier subspace in [`SubspaceIter`] order.
///
/// With `filter` set, a dimension `k ≥ 2` is skipped when fewer than
/// `(q^k - 1)/(q - 1)` lines have slope at least `1/k` times the best line
/// slope: every `k`-subspace then contains a line below that bound, which
/// caps its own slope strictly below the best line.
pub fn max_slope_local(model: &LocalModel, filter: bool) -> LocalMax {
    let t = model.dim();
    let f = model.field();
    assert!(t > 0, "search on a zero space");
    let mut evaluated = 0;
    let mut best: Option<LocalMax> = None;
    let mut consider = |basis: Vec<Vec<Elem>>, best: &mut Option<LocalMax>| -> Rat {
        let dims = model.dims(&basis);
        let inv = inv_slope(model.weighted(&dims), basis.len());
        evaluated += 1;
        if best.as_ref().map_or(true, |b| inv < b.inv_slope) {
            *best = Some(LocalMax { basis, dims, inv_slope: inv, evaluated: 0 });
        }
        inv
    };
    let line_invs: Vec<Rat> = SubspaceIter::with_dims(f, t, 1..=1).map(|b| consider(b, &mut best)).collect();
    let best_line = *line_invs.iter().min().expect("at least one line");
    let q = f.order() as u128;
    for k in 2..=t {
        if filter {
            // μ(line) ≥ μ(best line)/k  ⇔  ∫ line ≤ k · ∫ best line
            let bound = best_line * Rat::from_integer(k as i64);
            let big = line_invs.iter().filter(|&&inv| inv <= bound).count() as u128;
            if big < (q.pow(k as u32) - 1) / (q - 1) {
                continue;
            }
        }
        for basis in SubspaceIter::with_dims(f, t, k..=k) {
            consider(basis, &mut best);
        }
    }
    let mut best = best.expect("nonempty search");
    best.evaluated = evaluated;
    best
}

fn check_generated(m: &GradedMatrix) -> Result<Degree, Error> {
    match m.generated_at() {
        Some(alpha) => Ok(alpha),
        None => Err(Error::NotUniquelyGenerated),
    }
}

/// The highest-slope submodule of a module generated at a single degree,
/// with the pruning filter enabled.
pub fn brute_force_max_slope(m: &GradedMatrix) -> Result<SlopeRecord, Error> {
    brute_force_max_slope_with(m, true)
}

pub fn brute_force_max_slope_with(m: &GradedMatrix, filter: bool) -> Result<SlopeRecord, Error> {
    let alpha = check_generated(m)?;
    let model = LocalModel::new(m, &alpha)?;
    if model.dim() == 0 {
        return Err(Error::ZeroModule(alpha));
    }
    let best = max_slope_local(&model, filter);
    Ok(SlopeRecord { basis: best.basis.iter().map(|c| model.from_coords(c)).collect(), inv_slope: best.inv_slope })
}

/// HN filtration of `⟨V_α⟩` by exhaustive search.
pub fn hn_filtration_at(m: &GradedMatrix, alpha: &Degree) -> Result<HNFactorList, Error> {
    hn_filtration_with(m, alpha, true)
}

pub fn hn_filtration_with(m: &GradedMatrix, alpha: &Degree, filter: bool) -> Result<HNFactorList, Error> {
    hn_of_generated(&submodule_at(m, alpha), alpha, filter)
}

/// HN filtration of a minimal presentation whose generators all sit at
/// `alpha`: search the top factor, pass to the quotient, repeat.
pub fn hn_of_generated(m: &GradedMatrix, alpha: &Degree, filter: bool) -> Result<HNFactorList, Error> {
    let mut current = m.clone();
    let mut factors = Vec::new();
    while current.num_rows() > 0 {
        let model = LocalModel::new(&current, alpha)?;
        let best = max_slope_local(&model, filter);
        factors.push(HnFactor { staircases: model.staircases(&best.dims), slope: best.inv_slope.recip() });
        let basis: Vec<Vec<Elem>> = best.basis.iter().map(|c| model.from_coords(c)).collect();
        current = quotient_presentation(&current, &basis)?;
    }
    debug_assert!(factors.windows(2).all(|w| w[0].slope >= w[1].slope));
    Ok(HNFactorList::from_factors(*alpha, factors))
}

/// Combines factor lists of direct summands, all based at `alpha`.
pub fn merge_factors(alpha: &Degree, lists: &[HNFactorList]) -> Result<HNFactorList, Error> {
    if let Some(l) = lists.iter().find(|l| l.alpha != *alpha) {
        return Err(Error::MismatchedBase(*alpha, l.alpha));
    }
    Ok(HNFactorList::from_factors(*alpha, lists.iter().flat_map(|l| l.factors.iter().cloned()).collect()))
}

/// HN filtration of `⟨V_α⟩` computed per connected component and merged.
pub fn hn_blockwise(m: &GradedMatrix, alpha: &Degree, filter: bool) -> Result<HNFactorList, Error> {
    let lists =
        m.split_components().iter().map(|b| hn_filtration_with(b, alpha, filter)).collect::<Result<Vec<_>, _>>()?;
    merge_factors(alpha, &lists)
}

/// `∫ dim` of the whole filtration, the sum of the factor integrals.
pub fn total_integral(list: &HNFactorList) -> Option<Rat> {
    list.factors.iter().try_fold(Rat::zero(), |acc, f| Some(acc + crate::invariants::total_area(&f.staircases)?))
}

#[cfg(test)]
mod tests;
