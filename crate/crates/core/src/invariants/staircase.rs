use num_traits::Zero;

use crate::grmat::{Degree, Grid, Rat};

/// An interval module with one generator and an antichain of relations.
///
/// The support is `{β : gen ≤ β and rel ≰ β for all rels}`. Relations are
/// stored joined with the generator, pruned to their minimal elements and
/// sorted by `x` ascending (so `y` strictly descending).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Staircase {
    gen: Degree,
    rels: Vec<Degree>,
}

impl Staircase {
    pub fn new(gen: Degree, rels: impl IntoIterator<Item = Degree>) -> Self {
        let mut rels: Vec<Degree> = rels.into_iter().map(|r| r.join(&gen)).collect();
        rels.sort();
        rels.dedup();
        // Sorted by (x, y): a relation survives iff its y is below every
        // y seen so far.
        let mut pruned: Vec<Degree> = Vec::with_capacity(rels.len());
        for r in rels {
            if pruned.last().map_or(true, |p: &Degree| r.y < p.y) {
                pruned.push(r);
            }
        }
        Staircase { gen, rels: pruned }
    }

    pub fn gen(&self) -> Degree {
        self.gen
    }

    pub fn rels(&self) -> &[Degree] {
        &self.rels
    }

    /// Empty support: a relation sits at the generator.
    pub fn is_empty(&self) -> bool {
        self.rels.first() == Some(&self.gen)
    }

    pub fn contains(&self, beta: &Degree) -> bool {
        if !self.gen.leq(beta) {
            return false;
        }
        let k = self.rels.partition_point(|r| r.x <= beta.x);
        k == 0 || self.rels[k - 1].y > beta.y
    }

    /// Area of the support, `None` if it is unbounded.
    pub fn area(&self) -> Option<Rat> {
        let first = self.rels.first()?;
        let last = self.rels.last()?;
        if first.x != self.gen.x || last.y != self.gen.y {
            return None;
        }
        let mut total = Rat::zero();
        for w in self.rels.windows(2) {
            total += (w[1].x - w[0].x) * (w[0].y - self.gen.y);
        }
        Some(total)
    }

    /// The staircase `⟨gen ∨ β⟩` restricted above `β`.
    pub fn shifted(&self, beta: &Degree) -> Staircase {
        Staircase::new(self.gen.join(beta), self.rels.iter().copied())
    }

    /// Coordinates of the generator and relations.
    pub fn grid(&self) -> Grid {
        Grid::spanned_by(std::iter::once(&self.gen).chain(&self.rels))
    }
}

/// Decomposes a non-increasing function on the grid above `base` into the
/// staircases of its superlevel sets `{value ≥ 1}, {value ≥ 2}, ...`.
///
/// `xs` and `ys` are the grid coordinates `≥ base` starting at `base`, and
/// `value(i, j)` is the function on the cell with lower corner
/// `(xs[i], ys[j])`.
pub fn superlevel_sets(base: Degree, xs: &[Rat], ys: &[Rat], value: impl Fn(usize, usize) -> usize) -> Vec<Staircase> {
    if xs.is_empty() || ys.is_empty() {
        return Vec::new();
    }
    debug_assert!(xs[0] == base.x && ys[0] == base.y);
    let top = value(0, 0);
    (1..=top)
        .map(|level| {
            let rels = (0..xs.len())
                .filter_map(|i| (0..ys.len()).find(|&j| value(i, j) < level).map(|j| Degree::new(xs[i], ys[j])));
            Staircase::new(base, rels)
        })
        .collect()
}

/// Re-decomposes a sum of staircases with a common generator into its
/// superlevel staircases, the canonical form of its Hilbert function.
pub fn canonical_staircases(base: Degree, parts: &[Staircase]) -> Vec<Staircase> {
    let grid = parts.iter().fold(Grid::spanned_by([&base]), |g, s| g.union(&s.grid()));
    let xs: Vec<Rat> = grid.xs.into_iter().filter(|&x| x >= base.x).collect();
    let ys: Vec<Rat> = grid.ys.into_iter().filter(|&y| y >= base.y).collect();
    superlevel_sets(base, &xs, &ys, |i, j| {
        let p = Degree::new(xs[i], ys[j]);
        parts.iter().filter(|s| s.contains(&p)).count()
    })
}

/// Total area of a list of staircases, `None` if any is unbounded.
pub fn total_area(parts: &[Staircase]) -> Option<Rat> {
    parts.iter().try_fold(Rat::zero(), |acc, s| Some(acc + s.area()?))
}
