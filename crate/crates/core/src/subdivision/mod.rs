//! Exact Harder–Narasimhan filtrations on a whole grid cell.
//!
//! Inside the cell of `⟨V_α⟩` with lower corner `α`, the inverse slope of
//! every submodule `⟨W⟩` at `α + δ` is the polynomial `p̃(δ) + δ1·δ2` whose
//! mixed term is the same for all `W`. The highest-slope subspace at each
//! point is therefore read off a lower envelope of planes, and iterating on
//! quotients yields a tree of nested convex regions whose root-to-leaf
//! paths are the HN filtrations of the cell.

mod envelope;

pub use envelope::{argmin, lower_envelope, ConvexRegion, HalfPlane, Point, SlopePoly};

use crate::field::Elem;
use crate::grmat::{quotient_with_rows, Cell, Degree, GradedMatrix, Rat};
use crate::hn_core::{LocalModel, SubspaceIter};
use crate::invariants::{HNFactorList, HnFactor, Staircase};
use crate::Error;

fn poly_of(model: &LocalModel, dims: &[usize], k: usize) -> SlopePoly {
    let k = Rat::from_integer(k as i64);
    let (vertical, horizontal) = model.line_integrals(dims);
    SlopePoly { c0: model.weighted(dims) / k, cx: horizontal / k, cy: vertical / k }
}

fn generated_at(m: &GradedMatrix) -> Result<Degree, Error> {
    m.generated_at().ok_or(Error::NotUniquelyGenerated)
}

/// Slope polynomial of a bounded module generated at a single degree.
pub fn slope_polynomial(m: &GradedMatrix) -> Result<SlopePoly, Error> {
    let alpha = generated_at(m)?;
    let model = LocalModel::new(m, &alpha)?;
    if model.dim() == 0 {
        return Err(Error::ZeroModule(alpha));
    }
    let dims = model.dims(&identity(model.dim()));
    Ok(poly_of(&model, &dims, model.dim()))
}

fn identity(n: usize) -> Vec<Vec<Elem>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect()
}

struct Candidate {
    id: usize,
    coords: Vec<Vec<Elem>>,
    dims: Vec<usize>,
    poly: SlopePoly,
}

/// Every nonzero subspace with its polynomial, one per distinct polynomial
/// (the earliest in enumeration order).
fn candidates(model: &LocalModel) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (id, coords) in SubspaceIter::new(model.field(), model.dim()).enumerate() {
        let dims = model.dims(&coords);
        let poly = poly_of(model, &dims, coords.len());
        if seen.insert(poly) {
            out.push(Candidate { id, coords, dims, poly });
        }
    }
    out
}

/// One face of a highest-slope envelope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSlopeFace {
    /// Position of the subspace in [`SubspaceIter`] order.
    pub id: usize,
    pub region: ConvexRegion,
    /// Basis over the generators of the presentation.
    pub basis: Vec<Vec<Elem>>,
    pub poly: SlopePoly,
}

fn check_cell(m: &GradedMatrix, cell: &Cell) -> Result<(Degree, ConvexRegion), Error> {
    let alpha = generated_at(m)?;
    if alpha != cell.lo {
        return Err(Error::MismatchedBase(alpha, cell.lo));
    }
    Ok((alpha, ConvexRegion::from_cell(cell)?))
}

/// The highest-slope subspaces of `V_α` on a cell with lower corner `α`:
/// on each returned region its subspace generates the submodule of highest
/// slope at every point.
pub fn all_max_slope(m: &GradedMatrix, cell: &Cell) -> Result<Vec<MaxSlopeFace>, Error> {
    let (alpha, region) = check_cell(m, cell)?;
    let model = LocalModel::new(m, &alpha)?;
    if model.dim() == 0 {
        return Err(Error::ZeroModule(alpha));
    }
    let cands = candidates(&model);
    let polys: Vec<(usize, SlopePoly)> = cands.iter().map(|c| (c.id, c.poly)).collect();
    Ok(lower_envelope(&polys, &region)
        .into_iter()
        .map(|(id, region)| {
            let c = cands.iter().find(|c| c.id == id).expect("envelope id");
            MaxSlopeFace { id, region, basis: c.coords.iter().map(|v| model.from_coords(v)).collect(), poly: c.poly }
        })
        .collect())
}

/// A node of a [`SubdivTree`]. Every node but the root adds one HN factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Subspace id among the parent's candidates; breaks ties on walls.
    pub id: usize,
    pub region: ConvexRegion,
    /// Cumulative subspace `W_t` of `V_α`, over the root's generators.
    pub basis: Vec<Vec<Elem>>,
    /// Hilbert function of the factor `⟨W_t⟩/⟨W_{t-1}⟩` above `α`.
    pub staircases: Vec<Staircase>,
    /// Truncated polynomial of the factor; zero at the root.
    pub poly: SlopePoly,
}

/// Nested slope subdivision of one grid cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivTree {
    pub alpha: Degree,
    pub cell: Cell,
    nodes: Vec<SubdivNode>,
}

impl SubdivTree {
    pub fn root(&self) -> &SubdivNode {
        &self.nodes[0]
    }

    pub fn node(&self, i: usize) -> &SubdivNode {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[SubdivNode] {
        &self.nodes
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                depth[i] = depth[p] + 1;
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Node indices from the root to the leaf owning `β`.
    pub fn path(&self, beta: &Degree) -> Result<Vec<usize>, Error> {
        if !self.cell.contains(beta) {
            return Err(Error::OffGrid(*beta));
        }
        let d = beta.minus(&self.alpha);
        let mut at = 0;
        let mut path = vec![0];
        while !self.nodes[at].children.is_empty() {
            let kids = self.nodes[at].children.iter().map(|&c| (self.nodes[c].id, &self.nodes[c].poly));
            let id = argmin(kids, d).expect("children");
            at = *self.nodes[at].children.iter().find(|&&c| self.nodes[c].id == id).expect("child id");
            path.push(at);
        }
        Ok(path)
    }

    /// The HN filtration of `⟨V_β⟩` for `β` in the cell.
    pub fn factors_at(&self, beta: &Degree) -> Result<HNFactorList, Error> {
        let d = beta.minus(&self.alpha);
        let factors = self.path(beta)?[1..]
            .iter()
            .map(|&i| {
                let n = &self.nodes[i];
                HnFactor { staircases: n.staircases.iter().map(|s| s.shifted(beta)).collect(), slope: n.poly.slope(d) }
            })
            .collect();
        Ok(HNFactorList::from_factors(*beta, factors))
    }
}

/// The slope subdivision of a cell with lower corner `α` for a module
/// generated at `α`: envelope faces, each refined by the envelope of its
/// quotient, down to the zero module.
pub fn exact_hnf_cell(m: &GradedMatrix, cell: &Cell) -> Result<SubdivTree, Error> {
    let (alpha, region) = check_cell(m, cell)?;
    let root = SubdivNode {
        parent: None,
        children: Vec::new(),
        id: 0,
        region,
        basis: Vec::new(),
        staircases: Vec::new(),
        poly: SlopePoly::zero(),
    };
    let mut tree = SubdivTree { alpha, cell: *cell, nodes: vec![root] };
    let n = m.num_rows();
    grow(&mut tree, 0, m.clone(), (0..n).collect(), n)?;
    Ok(tree)
}

fn grow(tree: &mut SubdivTree, at: usize, current: GradedMatrix, lift: Vec<usize>, n: usize) -> Result<(), Error> {
    if current.num_rows() == 0 {
        return Ok(());
    }
    let model = LocalModel::new(&current, &tree.alpha)?;
    if model.dim() == 0 {
        return Ok(());
    }
    let cands = candidates(&model);
    let polys: Vec<(usize, SlopePoly)> = cands.iter().map(|c| (c.id, c.poly)).collect();
    for (id, region) in lower_envelope(&polys, &tree.nodes[at].region) {
        let c = cands.iter().find(|c| c.id == id).expect("envelope id");
        let local: Vec<Vec<Elem>> = c.coords.iter().map(|v| model.from_coords(v)).collect();
        let mut basis = tree.nodes[at].basis.clone();
        basis.extend(local.iter().map(|v| {
            let mut w = vec![0; n];
            for (i, &x) in v.iter().enumerate() {
                w[lift[i]] = x;
            }
            w
        }));
        let child = tree.nodes.len();
        tree.nodes.push(SubdivNode {
            parent: Some(at),
            children: Vec::new(),
            id,
            region,
            basis,
            staircases: model.staircases(&c.dims),
            poly: c.poly,
        });
        tree.nodes[at].children.push(child);
        let (quotient, kept) = quotient_with_rows(&current, &local)?;
        let lift = kept.into_iter().map(|k| lift[k]).collect();
        grow(tree, child, quotient, lift, n)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
