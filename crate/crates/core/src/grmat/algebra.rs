//! Kernels, minimization, induced submodules and quotients.

use super::matrix::SparseColumn;
use super::{Degree, GradedMatrix, Grid};
use crate::field::{DenseMatrix, Echelon, Elem};
use crate::Error;

fn to_sparse(v: &[Elem]) -> SparseColumn {
    v.iter().enumerate().filter(|&(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect()
}

/// Minimal generating set of the syzygies of `m`, as a graded matrix whose
/// rows are the columns of `m`.
///
/// Sweeps the grid spanned by the column degrees in colexicographic order.
/// At each point the kernel of the active columns is compared against the
/// span of the syzygies found so far below it, and the missing directions
/// become new generators at that point.
pub fn kernel(m: &GradedMatrix) -> GradedMatrix {
    let f = m.field();
    let (n, c) = (m.num_rows(), m.num_cols());
    let grid = Grid::spanned_by(m.col_degrees());
    let mut gens: Vec<(Degree, Vec<Elem>)> = Vec::new();
    for &y in &grid.ys {
        for &x in &grid.xs {
            let gamma = Degree::new(x, y);
            let active: Vec<usize> = (0..c).filter(|&j| m.col_degrees()[j].leq(&gamma)).collect();
            if active.len() < 2 && !active.iter().any(|&j| m.column(j).is_empty()) {
                continue;
            }
            let mut dm = DenseMatrix::zeros(f, n, active.len());
            for (k, &j) in active.iter().enumerate() {
                for &(i, v) in m.column(j) {
                    dm.set(i, k, v);
                }
            }
            let ker = dm.kernel();
            if ker.is_empty() {
                continue;
            }
            let mut span =
                Echelon::spanned_by(f, c, gens.iter().filter(|(d, _)| d.leq(&gamma)).map(|(_, v)| v.clone()));
            if span.dim() == ker.len() {
                continue;
            }
            for kv in ker {
                let mut full = vec![0; c];
                for (k, &j) in active.iter().enumerate() {
                    full[j] = kv[k];
                }
                if span.insert(full.clone()) {
                    gens.push((gamma, full));
                }
            }
        }
    }
    let (col_degrees, columns) = gens.into_iter().map(|(d, v)| (d, to_sparse(&v))).unzip();
    GradedMatrix::from_parts(f, m.col_degrees().to_vec(), col_degrees, columns)
}

/// A minimal presentation of `coker m`, together with the indices of the
/// input rows that survive as its generators.
pub fn minimize_with_rows(m: &GradedMatrix) -> (GradedMatrix, Vec<usize>) {
    let f = m.field();
    let (n, c) = (m.num_rows(), m.num_cols());
    let rows = m.row_degrees();
    let cols_deg = m.col_degrees();
    let mut cols: Vec<Vec<Elem>> = (0..c).map(|j| m.dense_column(j)).collect();
    let mut row_alive = vec![true; n];
    let mut col_alive = vec![true; c];

    // Eliminate every nonzero entry whose row and column degrees agree: such
    // a relation expresses its generator through the others.
    loop {
        let pivot = (0..c)
            .filter(|&j| col_alive[j])
            .find_map(|j| (0..n).find(|&i| row_alive[i] && cols[j][i] != 0 && rows[i] == cols_deg[j]).map(|i| (i, j)));
        let Some((i, j)) = pivot else { break };
        let inv = f.inv(cols[j][i]);
        let pivot_col = cols[j].clone();
        for k in 0..c {
            if k != j && col_alive[k] && cols[k][i] != 0 {
                let factor = f.neg(f.mul(cols[k][i], inv));
                f.axpy(&mut cols[k], factor, &pivot_col);
            }
        }
        row_alive[i] = false;
        col_alive[j] = false;
    }

    // Drop relations implied by relations of smaller or equal degree.
    let mut order: Vec<usize> = (0..c).filter(|&j| col_alive[j]).collect();
    order.sort_by_key(|&j| (cols_deg[j], j));
    let mut kept = vec![false; c];
    let mut kept_order: Vec<usize> = Vec::new();
    for &j in &order {
        let span = Echelon::spanned_by(
            f,
            n,
            kept_order.iter().filter(|&&k| cols_deg[k].leq(&cols_deg[j])).map(|&k| cols[k].clone()),
        );
        if !span.contains(&cols[j]) {
            kept[j] = true;
            kept_order.push(j);
        }
    }

    let surviving: Vec<usize> = (0..n).filter(|&i| row_alive[i]).collect();
    let mut new_index = vec![usize::MAX; n];
    for (k, &i) in surviving.iter().enumerate() {
        new_index[i] = k;
    }
    let mut col_degrees = Vec::new();
    let mut columns = Vec::new();
    for j in (0..c).filter(|&j| kept[j]) {
        col_degrees.push(cols_deg[j]);
        columns.push(
            cols[j]
                .iter()
                .enumerate()
                .filter(|&(_, &x)| x != 0)
                .map(|(i, &x)| {
                    debug_assert!(row_alive[i], "eliminated row still referenced");
                    (new_index[i], x)
                })
                .collect(),
        );
    }
    let row_degrees = surviving.iter().map(|&i| rows[i]).collect();
    (GradedMatrix::from_parts(f, row_degrees, col_degrees, columns), surviving)
}

/// A minimal presentation of `coker m`: no nonzero entry joins a row and a
/// column of equal degree, and no relation follows from the others.
pub fn minimize(m: &GradedMatrix) -> GradedMatrix {
    minimize_with_rows(m).0
}

/// Presentation of the submodule of `coker m` generated by the graded
/// columns `s`, read off from the top block of `ker [s | m]`.
pub fn submodule_presentation(m: &GradedMatrix, s: &[(Degree, Vec<Elem>)]) -> Result<GradedMatrix, Error> {
    let f = m.field();
    let k = s.len();
    let mut cols: Vec<(Degree, Vec<Elem>)> = s.to_vec();
    cols.extend((0..m.num_cols()).map(|j| (m.col_degrees()[j], m.dense_column(j))));
    let stacked = GradedMatrix::from_dense_columns(f, m.row_degrees().to_vec(), cols)?;
    let ker = kernel(&stacked);
    let columns = ker.columns().iter().map(|col| col.iter().copied().filter(|&(i, _)| i < k).collect()).collect();
    Ok(GradedMatrix::from_parts(f, s.iter().map(|(d, _)| *d).collect(), ker.col_degrees().to_vec(), columns))
}

/// Presentation of `<V_α> / <W>` for a presentation generated at `α` and a
/// basis of `W ⊆ V_α`, with the indices of the surviving generators.
///
/// The basis is brought into echelon form with pivots `P`; the relations are
/// reduced against it to clear the rows in `P`, those rows are deleted and
/// the result is minimized.
pub fn quotient_with_rows(m: &GradedMatrix, basis: &[Vec<Elem>]) -> Result<(GradedMatrix, Vec<usize>), Error> {
    let n = m.num_rows();
    if basis.is_empty() {
        return Ok((m.clone(), (0..n).collect()));
    }
    let alpha = m.generated_at().ok_or(Error::NotUniquelyGenerated)?;
    let f = m.field();
    let echelon = Echelon::spanned_by(f, n, basis.iter().cloned());
    if echelon.dim() < basis.len() {
        return Err(Error::DegenerateBasis { given: basis.len(), rank: echelon.dim() });
    }
    let pivots = echelon.pivots();
    let survivors: Vec<usize> = (0..n).filter(|i| pivots.binary_search(i).is_err()).collect();
    let mut new_index = vec![usize::MAX; n];
    for (k, &i) in survivors.iter().enumerate() {
        new_index[i] = k;
    }
    let mut columns = Vec::with_capacity(m.num_cols());
    for j in 0..m.num_cols() {
        let mut v = m.dense_column(j);
        echelon.reduce_vec(&mut v);
        columns.push(to_sparse(&v).into_iter().map(|(i, x)| (new_index[i], x)).collect());
    }
    let reduced = GradedMatrix::from_parts(f, vec![alpha; survivors.len()], m.col_degrees().to_vec(), columns);
    let (min, kept) = minimize_with_rows(&reduced);
    Ok((min, kept.into_iter().map(|k| survivors[k]).collect()))
}

pub fn quotient_presentation(m: &GradedMatrix, basis: &[Vec<Elem>]) -> Result<GradedMatrix, Error> {
    Ok(quotient_with_rows(m, basis)?.0)
}
