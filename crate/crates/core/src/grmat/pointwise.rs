use super::{Degree, GradedMatrix};
use crate::field::{DenseMatrix, Echelon, Elem};
use crate::Error;

/// The vector space `V_γ = k^{rows ≤ γ} / span(columns ≤ γ)` with a basis of
/// generator rows.
#[derive(Clone, Debug)]
pub struct PointwiseModel {
    degree: Degree,
    num_rows: usize,
    basis_rows: Vec<usize>,
    reducer: Echelon,
}

impl PointwiseModel {
    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis_rows.len()
    }

    /// Generator rows whose classes form the basis of `V_γ`.
    pub fn basis_rows(&self) -> &[usize] {
        &self.basis_rows
    }

    /// The basis as vectors over all generators.
    pub fn basis_vectors(&self) -> Vec<Vec<Elem>> {
        self.basis_rows
            .iter()
            .map(|&i| {
                let mut v = vec![0; self.num_rows];
                v[i] = 1;
                v
            })
            .collect()
    }

    /// Coordinates in the basis of the class of `v`, a vector over the
    /// generators supported on rows of degree at most `γ`.
    pub fn coords(&self, v: &[Elem]) -> Vec<Elem> {
        let mut w = v.to_vec();
        self.reducer.reduce_vec(&mut w);
        self.basis_rows.iter().map(|&i| w[i]).collect()
    }

    /// Matrix of the structure map from `src` (at a smaller degree) to this
    /// space.
    pub fn map_from(&self, src: &PointwiseModel) -> DenseMatrix {
        let f = self.reducer.field();
        let mut out = DenseMatrix::zeros(f, self.dim(), src.dim());
        for (c, v) in src.basis_vectors().into_iter().enumerate() {
            for (r, x) in self.coords(&v).into_iter().enumerate() {
                out.set(r, c, x);
            }
        }
        out
    }
}

impl GradedMatrix {
    pub fn pointwise_model(&self, gamma: &Degree) -> PointwiseModel {
        let n = self.num_rows();
        let reducer = Echelon::spanned_by(
            self.field(),
            n,
            (0..self.num_cols()).filter(|&j| self.col_degrees()[j].leq(gamma)).map(|j| self.dense_column(j)),
        );
        let basis_rows = (0..n)
            .filter(|&i| self.row_degrees()[i].leq(gamma) && reducer.pivots().binary_search(&i).is_err())
            .collect();
        PointwiseModel { degree: *gamma, num_rows: n, basis_rows, reducer }
    }

    /// `dim V_γ`.
    pub fn dim_at(&self, gamma: &Degree) -> usize {
        let active_rows = self.row_degrees().iter().filter(|d| d.leq(gamma)).count();
        if active_rows == 0 {
            return 0;
        }
        let rank = Echelon::spanned_by(
            self.field(),
            self.num_rows(),
            (0..self.num_cols()).filter(|&j| self.col_degrees()[j].leq(gamma)).map(|j| self.dense_column(j)),
        )
        .dim();
        active_rows - rank
    }

    /// The matrix of `V_{γ→δ}` in the bases of the pointwise models.
    pub fn structure_map(&self, gamma: &Degree, delta: &Degree) -> Result<DenseMatrix, Error> {
        if !gamma.leq(delta) {
            return Err(Error::NotBelow { lower: *gamma, upper: *delta });
        }
        Ok(self.pointwise_model(delta).map_from(&self.pointwise_model(gamma)))
    }
}
