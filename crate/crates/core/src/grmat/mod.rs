//! Graded matrices over `R^2`-degrees and the module operations built on them.
//!
//! A [`GradedMatrix`] with generator degrees (rows) and relation degrees
//! (columns) presents the persistence module `coker(M: A[R] -> A[G])`.

mod algebra;
mod matrix;
mod pointwise;

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub use algebra::{
    kernel, minimize, minimize_with_rows, quotient_presentation, quotient_with_rows, submodule_presentation,
};
pub use matrix::{Block, GradedMatrix};
pub use pointwise::PointwiseModel;

/// Exact rational with 64-bit numerator and denominator.
pub type Rat = Ratio<i64>;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Parses `"3"`, `"-1.25"`, `"7/4"` or `"+.5"` exactly.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        return (d != 0).then(|| Rat::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() || body.starts_with(['+', '-']) {
        return None;
    }
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let num: i64 = digits.parse().ok()?;
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let r = Rat::new(num, den);
    Some(if neg { -r } else { r })
}

/// A point of `R^2` with exact rational coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    pub x: Rat,
    pub y: Rat,
}

impl Degree {
    pub fn new(x: Rat, y: Rat) -> Self {
        Degree { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Degree { x: int(x), y: int(y) }
    }

    pub fn zero() -> Self {
        Self::ints(0, 0)
    }

    /// The product order of `R^2`.
    pub fn leq(&self, other: &Degree) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree { x: self.x.max(other.x), y: self.y.max(other.y) }
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree { x: self.x.min(other.x), y: self.y.min(other.y) }
    }

    pub fn offset(&self, dx: Rat, dy: Rat) -> Degree {
        Degree { x: self.x + dx, y: self.y + dy }
    }

    /// Componentwise difference `self - base`.
    pub fn minus(&self, base: &Degree) -> (Rat, Rat) {
        (self.x - base.x, self.y - base.y)
    }

    pub fn partial_cmp_product(&self, other: &Degree) -> Option<Ordering> {
        match (self.leq(other), other.leq(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A grid coordinate extended by the formal `±∞` sentinels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    At(Rat),
    PosInf,
}

impl Bound {
    pub fn finite(self) -> Option<Rat> {
        match self {
            Bound::At(r) => Some(r),
            _ => None,
        }
    }
}

/// A grid point that may sit at infinity in either coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridPoint {
    pub x: Bound,
    pub y: Bound,
}

impl GridPoint {
    pub fn finite(self) -> Option<Degree> {
        Some(Degree::new(self.x.finite()?, self.y.finite()?))
    }
}

/// Product of two finite sorted coordinate sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Grid {
    pub xs: Vec<Rat>,
    pub ys: Vec<Rat>,
}

impl Grid {
    pub fn new(mut xs: Vec<Rat>, mut ys: Vec<Rat>) -> Self {
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        Grid { xs, ys }
    }

    /// The grid spanned by the coordinates of the given points.
    pub fn spanned_by<'a>(points: impl IntoIterator<Item = &'a Degree>) -> Self {
        let (xs, ys) = points.into_iter().map(|d| (d.x, d.y)).unzip();
        Grid::new(xs, ys)
    }

    /// The regular grid `{x0 + i*step}` × `{y0 + j*step}` covering `[lo, hi]`.
    pub fn regular(lo: Degree, hi: Degree, step: Rat) -> Self {
        assert!(step.is_positive());
        let axis = |a: Rat, b: Rat| {
            let mut v = Vec::new();
            let mut t = a;
            while t <= b {
                v.push(t);
                t += step;
            }
            v
        };
        Grid::new(axis(lo.x, hi.x), axis(lo.y, hi.y))
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty() || self.ys.is_empty()
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn contains(&self, d: &Degree) -> bool {
        self.xs.binary_search(&d.x).is_ok() && self.ys.binary_search(&d.y).is_ok()
    }

    pub fn point(&self, i: usize, j: usize) -> Degree {
        Degree::new(self.xs[i], self.ys[j])
    }

    /// All grid points, x-major.
    pub fn points(&self) -> impl Iterator<Item = Degree> + '_ {
        self.xs.iter().flat_map(move |&x| self.ys.iter().map(move |&y| Degree::new(x, y)))
    }

    /// Index of the largest coordinate `≤ v`, if any.
    pub fn floor_index(coords: &[Rat], v: Rat) -> Option<usize> {
        coords.partition_point(|&c| c <= v).checked_sub(1)
    }

    /// Index of the smallest coordinate `≥ v`, if any.
    pub fn ceil_index(coords: &[Rat], v: Rat) -> Option<usize> {
        let i = coords.partition_point(|&c| c < v);
        (i < coords.len()).then_some(i)
    }

    /// `⌊α⌋`: the largest grid point below `α`, with `-∞` where none exists.
    pub fn floor(&self, a: &Degree) -> GridPoint {
        let f = |coords: &[Rat], v| match Self::floor_index(coords, v) {
            Some(i) => Bound::At(coords[i]),
            None => Bound::NegInf,
        };
        GridPoint { x: f(&self.xs, a.x), y: f(&self.ys, a.y) }
    }

    /// `⌈α⌉`: the smallest grid point above `α`, with `+∞` where none exists.
    pub fn ceil(&self, a: &Degree) -> GridPoint {
        let f = |coords: &[Rat], v| match Self::ceil_index(coords, v) {
            Some(i) => Bound::At(coords[i]),
            None => Bound::PosInf,
        };
        GridPoint { x: f(&self.xs, a.x), y: f(&self.ys, a.y) }
    }

    /// Grid indices of `⌊α⌋` when it is a finite grid point.
    pub fn floor_indices(&self, a: &Degree) -> Option<(usize, usize)> {
        Some((Self::floor_index(&self.xs, a.x)?, Self::floor_index(&self.ys, a.y)?))
    }

    /// Union of coordinate sets.
    pub fn union(&self, other: &Grid) -> Grid {
        let xs = self.xs.iter().chain(&other.xs).copied().collect();
        let ys = self.ys.iter().chain(&other.ys).copied().collect();
        Grid::new(xs, ys)
    }

    /// The half-open cell `[xs[i], xs[i+1]) × [ys[j], ys[j+1])`, with `None`
    /// upper ends for the unbounded last row or column.
    pub fn cell(&self, i: usize, j: usize) -> Cell {
        Cell { lo: self.point(i, j), hi_x: self.xs.get(i + 1).copied(), hi_y: self.ys.get(j + 1).copied() }
    }
}

/// Half-open rectangle `[lo.x, hi_x) × [lo.y, hi_y)`; a missing upper end
/// means the rectangle is unbounded in that direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub lo: Degree,
    pub hi_x: Option<Rat>,
    pub hi_y: Option<Rat>,
}

impl Cell {
    pub fn contains(&self, d: &Degree) -> bool {
        self.lo.leq(d) && self.hi_x.map_or(true, |h| d.x < h) && self.hi_y.map_or(true, |h| d.y < h)
    }
}

/// Area of the rectangle `[lo, hi]`, zero if degenerate.
pub fn box_area(lo: &Degree, hi: &Degree) -> Rat {
    let w = hi.x - lo.x;
    let h = hi.y - lo.y;
    if w.is_positive() && h.is_positive() {
        w * h
    } else {
        Rat::zero()
    }
}
