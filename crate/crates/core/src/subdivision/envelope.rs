use num_traits::{Signed, Zero};

use crate::grmat::{Cell, Rat};
use crate::Error;

/// A point `(δ1, δ2)` in offsets from a cell's lower corner.
pub type Point = (Rat, Rat);

/// Truncated inverse-slope polynomial `p̃(δ) = c0 − cy·δ1 − cx·δ2`. The full
/// inverse slope of `⟨W⟩` at `α + δ` is `p̃(δ) + δ1·δ2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopePoly {
    pub c0: Rat,
    pub cx: Rat,
    pub cy: Rat,
}

impl SlopePoly {
    pub fn zero() -> Self {
        SlopePoly { c0: Rat::zero(), cx: Rat::zero(), cy: Rat::zero() }
    }

    pub fn truncated(&self, d: Point) -> Rat {
        self.c0 - self.cy * d.0 - self.cx * d.1
    }

    /// Inverse slope at offset `d`.
    pub fn full(&self, d: Point) -> Rat {
        self.truncated(d) + d.0 * d.1
    }

    pub fn slope(&self, d: Point) -> Rat {
        self.full(d).recip()
    }

    /// `{δ : p̃_self(δ) ≤ p̃_other(δ)}`.
    pub fn below(&self, other: &SlopePoly) -> HalfPlane {
        HalfPlane { a: other.cy - self.cy, b: other.cx - self.cx, c: other.c0 - self.c0 }
    }
}

/// The closed half-plane `a·δ1 + b·δ2 ≤ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HalfPlane {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl HalfPlane {
    fn excess(&self, p: Point) -> Rat {
        self.a * p.0 + self.b * p.1 - self.c
    }

    pub fn contains(&self, p: Point) -> bool {
        !self.excess(p).is_positive()
    }
}

/// A convex polygon with exact rational vertices in counter-clockwise
/// order, together with the half-planes that cut it out of its cell.
///
/// A polygon of zero area (a wall segment or a vertex) is degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexRegion {
    vertices: Vec<Point>,
    bounds: Vec<HalfPlane>,
}

impl ConvexRegion {
    /// `[0, w] × [0, h]` in offsets.
    pub fn rectangle(w: Rat, h: Rat) -> Self {
        let (o, one) = (Rat::zero(), Rat::from_integer(1));
        ConvexRegion {
            vertices: vec![(o, o), (w, o), (w, h), (o, h)],
            bounds: vec![
                HalfPlane { a: -one, b: o, c: o },
                HalfPlane { a: one, b: o, c: w },
                HalfPlane { a: o, b: -one, c: o },
                HalfPlane { a: o, b: one, c: h },
            ],
        }
    }

    /// The closure of a bounded cell, in offsets from its lower corner.
    pub fn from_cell(cell: &Cell) -> Result<Self, Error> {
        match (cell.hi_x, cell.hi_y) {
            (Some(x), Some(y)) => Ok(Self::rectangle(x - cell.lo.x, y - cell.lo.y)),
            _ => Err(Error::Unbounded),
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn bounds(&self) -> &[HalfPlane] {
        &self.bounds
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.area().is_zero()
    }

    /// Shoelace area.
    pub fn area(&self) -> Rat {
        let n = self.vertices.len();
        let mut twice = Rat::zero();
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            twice += p.0 * q.1 - q.0 * p.1;
        }
        twice / Rat::from_integer(2)
    }

    /// Closed membership.
    pub fn contains(&self, p: Point) -> bool {
        !self.is_empty() && self.bounds.iter().all(|h| h.contains(p))
    }

    /// Mean of the vertices, a point of the closed region.
    pub fn center(&self) -> Option<Point> {
        let n = Rat::from_integer(self.vertices.len() as i64);
        (!self.is_empty()).then(|| {
            let (sx, sy) = self.vertices.iter().fold((Rat::zero(), Rat::zero()), |a, p| (a.0 + p.0, a.1 + p.1));
            (sx / n, sy / n)
        })
    }

    /// Sutherland–Hodgman clipping against one half-plane.
    pub fn clip(&self, h: &HalfPlane) -> ConvexRegion {
        let n = self.vertices.len();
        let mut out: Vec<Point> = Vec::with_capacity(n + 1);
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let (fp, fq) = (h.excess(p), h.excess(q));
            if !fp.is_positive() {
                out.push(p);
            }
            if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative()) {
                let t = fp / (fp - fq);
                out.push((p.0 + (q.0 - p.0) * t, p.1 + (q.1 - p.1) * t));
            }
        }
        out.dedup();
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        let mut bounds = self.bounds.clone();
        bounds.push(*h);
        ConvexRegion { vertices: out, bounds }
    }
}

/// Regions of the cell on which each plane `p̃_id` is minimal, for the ids
/// whose region has nonempty interior, in increasing id order.
///
/// Identical planes are collapsed onto the least id. Regions overlap only
/// on walls; a point on a wall belongs to the least id among the minimal
/// planes there.
pub fn lower_envelope(polys: &[(usize, SlopePoly)], cell: &ConvexRegion) -> Vec<(usize, ConvexRegion)> {
    let mut sorted: Vec<(usize, SlopePoly)> = polys.to_vec();
    sorted.sort_by_key(|p| p.0);
    let mut distinct: Vec<(usize, SlopePoly)> = Vec::with_capacity(sorted.len());
    for (id, p) in sorted {
        if !distinct.iter().any(|(_, q)| *q == p) {
            distinct.push((id, p));
        }
    }
    let Some(center) = cell.center() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (i, (id, p)) in distinct.iter().enumerate() {
        // Clip against the planes lowest at the centre first: losing
        // candidates die after a few cuts.
        let mut others: Vec<&SlopePoly> =
            distinct.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, (_, q))| q).collect();
        others.sort_by_key(|q| q.truncated(center));
        let mut region = cell.clone();
        for q in others {
            let h = p.below(q);
            if h.a.is_zero() && h.b.is_zero() {
                if h.c.is_negative() {
                    region = ConvexRegion { vertices: Vec::new(), bounds: region.bounds };
                    break;
                }
                continue;
            }
            region = region.clip(&h);
            if region.vertices.len() < 3 || region.is_degenerate() {
                break;
            }
        }
        if region.vertices.len() >= 3 && region.area().is_positive() {
            out.push((*id, region));
        }
    }
    out
}

/// The id whose plane is lowest at `d`, least id on ties.
pub fn argmin<'a>(polys: impl IntoIterator<Item = (usize, &'a SlopePoly)>, d: Point) -> Option<usize> {
    polys.into_iter().min_by_key(|(id, p)| (p.truncated(d), *id)).map(|(id, _)| id)
}
