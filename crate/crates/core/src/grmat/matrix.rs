use log::debug;

use super::{Degree, Grid};
use crate::field::{Elem, PrimeField};
use crate::Error;

/// Sparse column: `(row, value)` pairs sorted by row, values nonzero.
pub type SparseColumn = Vec<(usize, Elem)>;

/// A homogeneous matrix with degree-labelled rows (generators) and columns
/// (relations).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedMatrix {
    field: PrimeField,
    row_degrees: Vec<Degree>,
    col_degrees: Vec<Degree>,
    columns: Vec<SparseColumn>,
}

/// One block of [`GradedMatrix::connected_components`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

fn normalize_column(field: PrimeField, mut col: Vec<(usize, Elem)>) -> SparseColumn {
    col.sort_by_key(|&(i, _)| i);
    let mut out: SparseColumn = Vec::with_capacity(col.len());
    for (i, v) in col {
        let v = v % field.order();
        match out.last_mut() {
            Some((j, w)) if *j == i => *w = field.add(*w, v),
            _ => out.push((i, v)),
        }
    }
    out.retain(|&(_, v)| v != 0);
    out
}

impl GradedMatrix {
    /// Builds and validates a graded matrix. Duplicate entries in a column are
    /// summed; zero entries are dropped.
    pub fn new(
        field: PrimeField,
        row_degrees: Vec<Degree>,
        columns: Vec<(Degree, Vec<(usize, Elem)>)>,
    ) -> Result<Self, Error> {
        let mut col_degrees = Vec::with_capacity(columns.len());
        let mut cols = Vec::with_capacity(columns.len());
        for (j, (deg, col)) in columns.into_iter().enumerate() {
            for &(i, _) in &col {
                if i >= row_degrees.len() {
                    return Err(Error::RowOutOfRange { column: j, row: i, rows: row_degrees.len() });
                }
            }
            let col = normalize_column(field, col);
            for &(i, _) in &col {
                if !row_degrees[i].leq(&deg) {
                    return Err(Error::Inhomogeneous {
                        row: i,
                        column: j,
                        row_degree: row_degrees[i],
                        col_degree: deg,
                    });
                }
            }
            col_degrees.push(deg);
            cols.push(col);
        }
        Ok(GradedMatrix { field, row_degrees, col_degrees, columns: cols })
    }

    /// Internal constructor for columns already known to be normalized and
    /// homogeneous.
    pub(crate) fn from_parts(
        field: PrimeField,
        row_degrees: Vec<Degree>,
        col_degrees: Vec<Degree>,
        columns: Vec<SparseColumn>,
    ) -> Self {
        debug_assert_eq!(col_degrees.len(), columns.len());
        debug_assert!(columns
            .iter()
            .zip(&col_degrees)
            .all(|(c, d)| c.iter().all(|&(i, v)| v != 0 && row_degrees[i].leq(d))));
        GradedMatrix { field, row_degrees, col_degrees, columns }
    }

    /// The free module on the given generators.
    pub fn free(field: PrimeField, row_degrees: Vec<Degree>) -> Self {
        GradedMatrix { field, row_degrees, col_degrees: Vec::new(), columns: Vec::new() }
    }

    /// Builds a presentation from dense columns over the rows.
    pub fn from_dense_columns(
        field: PrimeField,
        row_degrees: Vec<Degree>,
        columns: Vec<(Degree, Vec<Elem>)>,
    ) -> Result<Self, Error> {
        let sparse = columns
            .into_iter()
            .map(|(d, v)| (d, v.into_iter().enumerate().filter(|&(_, x)| x != 0).collect()))
            .collect();
        Self::new(field, row_degrees, sparse)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn num_rows(&self) -> usize {
        self.row_degrees.len()
    }

    pub fn num_cols(&self) -> usize {
        self.col_degrees.len()
    }

    pub fn row_degrees(&self) -> &[Degree] {
        &self.row_degrees
    }

    pub fn col_degrees(&self) -> &[Degree] {
        &self.col_degrees
    }

    pub fn column(&self, j: usize) -> &SparseColumn {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseColumn] {
        &self.columns
    }

    pub fn dense_column(&self, j: usize) -> Vec<Elem> {
        let mut v = vec![0; self.num_rows()];
        for &(i, x) in &self.columns[j] {
            v[i] = x;
        }
        v
    }

    /// The common degree of all generators, if there is at least one and
    /// they agree.
    pub fn generated_at(&self) -> Option<Degree> {
        let first = *self.row_degrees.first()?;
        self.row_degrees.iter().all(|d| *d == first).then_some(first)
    }

    /// The smallest grid containing every row and column degree.
    pub fn induced_grid(&self) -> Grid {
        Grid::spanned_by(self.row_degrees.iter().chain(&self.col_degrees))
    }

    /// Componentwise maximum of all degrees, if any.
    pub fn max_degree(&self) -> Option<Degree> {
        self.row_degrees.iter().chain(&self.col_degrees).copied().reduce(|a, b| a.join(&b))
    }

    pub fn min_degree(&self) -> Option<Degree> {
        self.row_degrees.iter().chain(&self.col_degrees).copied().reduce(|a, b| a.meet(&b))
    }

    /// Replaces every degree by its join with `alpha`.
    pub fn shift_join(&self, alpha: &Degree) -> GradedMatrix {
        GradedMatrix {
            field: self.field,
            row_degrees: self.row_degrees.iter().map(|d| d.join(alpha)).collect(),
            col_degrees: self.col_degrees.iter().map(|d| d.join(alpha)).collect(),
            columns: self.columns.clone(),
        }
    }

    /// Rounds every degree up to the grid. Rows and columns whose ceiling is
    /// infinite never appear inside the grid and are dropped.
    pub fn grid_restrict(&self, grid: &Grid) -> GradedMatrix {
        let ceil = |d: &Degree| grid.ceil(d).finite();
        let mut row_map = vec![None; self.num_rows()];
        let mut rows = Vec::new();
        for (i, d) in self.row_degrees.iter().enumerate() {
            if let Some(c) = ceil(d) {
                row_map[i] = Some(rows.len());
                rows.push(c);
            }
        }
        let mut col_degrees = Vec::new();
        let mut columns = Vec::new();
        for (d, col) in self.col_degrees.iter().zip(&self.columns) {
            let Some(c) = ceil(d) else { continue };
            // Rows of a live column are live: their degrees are below it.
            let col = col.iter().map(|&(i, v)| (row_map[i].expect("homogeneity"), v)).collect();
            col_degrees.push(c);
            columns.push(col);
        }
        let dropped = (self.num_rows() - rows.len()) + (self.num_cols() - col_degrees.len());
        if dropped > 0 {
            debug!("grid restriction dropped {dropped} rows/columns beyond the grid");
        }
        GradedMatrix { field: self.field, row_degrees: rows, col_degrees, columns }
    }

    /// Finest partition of rows and columns such that no column touches two
    /// blocks. Blocks are ordered by their first row; zero columns form
    /// row-less blocks at the end.
    pub fn connected_components(&self) -> Vec<Block> {
        let n = self.num_rows();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for col in &self.columns {
            if let Some(&(first, _)) = col.first() {
                for &(i, _) in &col[1..] {
                    let (a, b) = (find(&mut parent, first), find(&mut parent, i));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut block_of_root = vec![usize::MAX; n];
        let mut blocks: Vec<Block> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            if block_of_root[r] == usize::MAX {
                block_of_root[r] = blocks.len();
                blocks.push(Block { rows: Vec::new(), cols: Vec::new() });
            }
            blocks[block_of_root[r]].rows.push(i);
        }
        let mut zero_cols = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            match col.first() {
                Some(&(i, _)) => {
                    let r = find(&mut parent, i);
                    blocks[block_of_root[r]].cols.push(j);
                }
                None => zero_cols.push(j),
            }
        }
        blocks.extend(zero_cols.into_iter().map(|j| Block { rows: Vec::new(), cols: vec![j] }));
        blocks
    }

    /// The presentation formed by a subset of rows and columns. Entries of
    /// the chosen columns outside the chosen rows are discarded.
    pub fn submatrix(&self, block: &Block) -> GradedMatrix {
        let mut row_map = vec![usize::MAX; self.num_rows()];
        for (k, &i) in block.rows.iter().enumerate() {
            row_map[i] = k;
        }
        let columns = block
            .cols
            .iter()
            .map(|&j| {
                self.columns[j]
                    .iter()
                    .filter(|&&(i, _)| row_map[i] != usize::MAX)
                    .map(|&(i, v)| (row_map[i], v))
                    .collect()
            })
            .collect();
        GradedMatrix {
            field: self.field,
            row_degrees: block.rows.iter().map(|&i| self.row_degrees[i]).collect(),
            col_degrees: block.cols.iter().map(|&j| self.col_degrees[j]).collect(),
            columns,
        }
    }

    /// The blocks of [`connected_components`](Self::connected_components) that
    /// have generators, as presentations.
    pub fn split_components(&self) -> Vec<GradedMatrix> {
        self.connected_components().iter().filter(|b| !b.rows.is_empty()).map(|b| self.submatrix(b)).collect()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &GradedMatrix) -> GradedMatrix {
        assert_eq!(self.field, other.field, "direct sum across fields");
        let off = self.num_rows();
        let mut row_degrees = self.row_degrees.clone();
        row_degrees.extend_from_slice(&other.row_degrees);
        let mut col_degrees = self.col_degrees.clone();
        col_degrees.extend_from_slice(&other.col_degrees);
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().map(|c| c.iter().map(|&(i, v)| (i + off, v)).collect()));
        GradedMatrix { field: self.field, row_degrees, col_degrees, columns }
    }

    /// Appends relations killing each generator at the right and top edges
    /// of the box ending at `hi`, which makes the module bounded.
    pub fn with_caps(&self, hi: &Degree) -> GradedMatrix {
        let mut out = self.clone();
        for (i, d) in self.row_degrees.iter().enumerate() {
            let right = Degree::new(hi.x.max(d.x), d.y);
            let top = Degree::new(d.x, hi.y.max(d.y));
            for cap in [right, top] {
                out.col_degrees.push(cap);
                out.columns.push(vec![(i, 1)]);
            }
        }
        out
    }

    /// Appends columns to the presentation.
    pub fn with_columns(&self, extra: Vec<(Degree, Vec<(usize, Elem)>)>) -> Result<GradedMatrix, Error> {
        let mut cols: Vec<(Degree, Vec<(usize, Elem)>)> =
            self.col_degrees.iter().copied().zip(self.columns.iter().cloned()).collect();
        cols.extend(extra);
        GradedMatrix::new(self.field, self.row_degrees.clone(), cols)
    }

    /// True if every generator is killed inside the bounded box spanned by
    /// the degrees, so that the module has bounded support.
    pub fn is_bounded(&self) -> bool {
        let Some(top) = self.max_degree() else { return true };
        let grid = self.induced_grid();
        // The module is constant beyond the last grid lines; it is bounded
        // iff it vanishes on the top row and right column of the grid.
        let last_x = *grid.xs.last().unwrap();
        let last_y = *grid.ys.last().unwrap();
        grid.ys.iter().all(|&y| self.dim_at(&Degree::new(last_x, y)) == 0)
            && grid.xs.iter().all(|&x| self.dim_at(&Degree::new(x, last_y)) == 0)
            && self.dim_at(&top) == 0
    }

    /// `(i, j)` entry.
    pub fn entry(&self, i: usize, j: usize) -> Elem {
        self.columns[j].iter().find(|&&(r, _)| r == i).map_or(0, |&(_, v)| v)
    }
}
