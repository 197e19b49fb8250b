use num_traits::Zero;

use crate::field::{DenseMatrix, Elem, PrimeField};
use crate::grmat::{Degree, GradedMatrix, Rat};
use crate::invariants::{superlevel_sets, Staircase};
use crate::Error;

/// `⟨V_α⟩` sampled on the grid lines of the module above `α`: the structure
/// maps `V_α → V_β` at every grid point `β ≥ α` together with the cell
/// sizes. Since `dim ⟨W⟩` is constant on cells, the Hilbert function and
/// all integrals of submodules generated at `α` follow from ranks of these
/// maps.
#[derive(Clone, Debug)]
pub struct LocalModel {
    field: PrimeField,
    alpha: Degree,
    dim: usize,
    xs: Vec<Rat>,
    ys: Vec<Rat>,
    maps: Vec<DenseMatrix>,
    basis_rows: Vec<usize>,
    num_rows: usize,
}

impl LocalModel {
    /// Errors with [`Error::Unbounded`] if `⟨V_α⟩` is nonzero on an
    /// unbounded cell.
    pub fn new(m: &GradedMatrix, alpha: &Degree) -> Result<Self, Error> {
        let grid = m.induced_grid();
        let mut xs: Vec<Rat> =
            std::iter::once(alpha.x).chain(grid.xs.iter().copied().filter(|&x| x > alpha.x)).collect();
        let mut ys: Vec<Rat> =
            std::iter::once(alpha.y).chain(grid.ys.iter().copied().filter(|&y| y > alpha.y)).collect();
        xs.dedup();
        ys.dedup();
        let here = m.pointwise_model(alpha);
        let mut maps = Vec::with_capacity(xs.len() * ys.len());
        for &x in &xs {
            for &y in &ys {
                maps.push(m.pointwise_model(&Degree::new(x, y)).map_from(&here));
            }
        }
        let model = LocalModel {
            field: m.field(),
            alpha: *alpha,
            dim: here.dim(),
            xs,
            ys,
            maps,
            basis_rows: here.basis_rows().to_vec(),
            num_rows: m.num_rows(),
        };
        let (nx, ny) = (model.xs.len(), model.ys.len());
        let edge = (0..ny).map(|j| (nx - 1, j)).chain((0..nx).map(|i| (i, ny - 1)));
        for (i, j) in edge {
            if model.dim > 0 && !model.map(i, j).is_zero() {
                return Err(Error::Unbounded);
            }
        }
        Ok(model)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn alpha(&self) -> Degree {
        self.alpha
    }

    /// `dim V_α`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn xs(&self) -> &[Rat] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rat] {
        &self.ys
    }

    /// The map `V_α → V_β` for `β = (xs[i], ys[j])`.
    pub fn map(&self, i: usize, j: usize) -> &DenseMatrix {
        &self.maps[i * self.ys.len() + j]
    }

    fn width(&self, i: usize) -> Rat {
        self.xs.get(i + 1).map_or(Rat::zero(), |&n| n - self.xs[i])
    }

    fn height(&self, j: usize) -> Rat {
        self.ys.get(j + 1).map_or(Rat::zero(), |&n| n - self.ys[j])
    }

    /// Coordinates in the basis of `V_α` of a vector over the generators.
    pub fn to_coords(&self, v: &[Elem]) -> Vec<Elem> {
        self.basis_rows.iter().map(|&i| v[i]).collect()
    }

    /// The vector over the generators with the given coordinates.
    pub fn from_coords(&self, c: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.num_rows];
        for (&i, &x) in self.basis_rows.iter().zip(c) {
            v[i] = x;
        }
        v
    }

    fn as_matrix(&self, basis: &[Vec<Elem>]) -> DenseMatrix {
        DenseMatrix::from_columns(self.field, self.dim, basis)
    }

    /// `dim ⟨W⟩` on every cell, x-major, for `W` spanned by `basis`
    /// (coordinates in `V_α`).
    pub fn dims(&self, basis: &[Vec<Elem>]) -> Vec<usize> {
        if basis.is_empty() {
            return vec![0; self.maps.len()];
        }
        let w = self.as_matrix(basis);
        self.maps.iter().map(|s| s.mul(&w).rank()).collect()
    }

    /// `∫ dim ⟨W⟩`.
    pub fn integral(&self, basis: &[Vec<Elem>]) -> Rat {
        self.weighted(&self.dims(basis))
    }

    /// `Σ dims · area` over the cells.
    pub fn weighted(&self, dims: &[usize]) -> Rat {
        let ny = self.ys.len();
        let mut total = Rat::zero();
        for (idx, &d) in dims.iter().enumerate() {
            if d > 0 {
                total += self.width(idx / ny) * self.height(idx % ny) * Rat::from_integer(d as i64);
            }
        }
        total
    }

    /// Integrals of `dim ⟨W⟩` along the vertical and horizontal lines through
    /// `α`.
    pub fn line_integrals(&self, dims: &[usize]) -> (Rat, Rat) {
        let ny = self.ys.len();
        let vertical = (0..ny).fold(Rat::zero(), |acc, j| acc + self.height(j) * Rat::from_integer(dims[j] as i64));
        let horizontal =
            (0..self.xs.len()).fold(Rat::zero(), |acc, i| acc + self.width(i) * Rat::from_integer(dims[i * ny] as i64));
        (vertical, horizontal)
    }

    /// Superlevel staircases of a non-increasing cell function, given x-major.
    pub fn staircases(&self, dims: &[usize]) -> Vec<Staircase> {
        let ny = self.ys.len();
        superlevel_sets(self.alpha, &self.xs, &self.ys, |i, j| dims[i * ny + j])
    }
}
