use std::ops::RangeInclusive;

use crate::field::{Elem, PrimeField};

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(q: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Enumerates the subspaces of `F_q^t` of the requested dimensions, each
/// once, as reduced row echelon bases.
///
/// Dimensions come in increasing order; within a dimension the pivot sets
/// are visited lexicographically and then the free entries as an odometer
/// whose last digit moves fastest.
#[derive(Clone, Debug)]
pub struct SubspaceIter {
    field: PrimeField,
    t: usize,
    k: usize,
    k_max: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<Elem>,
    done: bool,
}

impl SubspaceIter {
    /// All nonzero subspaces.
    pub fn new(field: PrimeField, t: usize) -> Self {
        Self::with_dims(field, t, 1..=t)
    }

    pub fn with_dims(field: PrimeField, t: usize, dims: RangeInclusive<usize>) -> Self {
        let (lo, hi) = (*dims.start(), (*dims.end()).min(t));
        let mut it = SubspaceIter {
            field,
            t,
            k: lo,
            k_max: hi,
            pivots: Vec::new(),
            free: Vec::new(),
            digits: Vec::new(),
            done: lo > hi,
        };
        if !it.done {
            it.set_pivots((0..lo).collect());
        }
        it
    }

    fn set_pivots(&mut self, pivots: Vec<usize>) {
        self.free.clear();
        for (r, &p) in pivots.iter().enumerate() {
            for c in p + 1..self.t {
                if pivots.binary_search(&c).is_err() {
                    self.free.push((r, c));
                }
            }
        }
        self.digits = vec![0; self.free.len()];
        self.pivots = pivots;
    }

    fn next_combination(&self) -> Option<Vec<usize>> {
        let (k, t) = (self.pivots.len(), self.t);
        let mut c = self.pivots.clone();
        let i = (0..k).rev().find(|&i| c[i] < t - k + i)?;
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
        Some(c)
    }

    fn advance(&mut self) {
        let q = self.field.order();
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < q {
                return;
            }
            *d = 0;
        }
        if let Some(c) = self.next_combination() {
            self.set_pivots(c);
            return;
        }
        self.k += 1;
        if self.k > self.k_max {
            self.done = true;
        } else {
            self.set_pivots((0..self.k).collect());
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Vec<Vec<Elem>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut rows = vec![vec![0; self.t]; self.pivots.len()];
        for (r, &p) in self.pivots.iter().enumerate() {
            rows[r][p] = 1;
        }
        for (&(r, c), &d) in self.free.iter().zip(&self.digits) {
            rows[r][c] = d;
        }
        self.advance();
        Some(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{DenseMatrix, Echelon};
    use std::collections::HashSet;

    #[test]
    fn counts_match_gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 4, 2), 35);
        assert_eq!(gaussian_binomial(3, 3, 1), 13);
        for q in [2u32, 3, 5] {
            let f = PrimeField::new(q).unwrap();
            for t in 0..=4 {
                for k in 0..=t {
                    let n = SubspaceIter::with_dims(f, t, k..=k).count() as u128;
                    assert_eq!(n, gaussian_binomial(q as u64, t, k), "q={q} t={t} k={k}");
                }
            }
        }
    }

    #[test]
    fn each_subspace_once_in_rref() {
        let f = PrimeField::new(3).unwrap();
        let mut seen = HashSet::new();
        for basis in SubspaceIter::new(f, 4) {
            let k = basis.len();
            let mut m = DenseMatrix::from_rows(f, k, 4, basis.concat());
            let before = m.clone();
            m.rref_in_place();
            assert_eq!(m, before, "not in reduced echelon form");
            let e = Echelon::spanned_by(f, 4, basis.clone());
            assert_eq!(e.dim(), k);
            assert!(seen.insert(e.basis().to_vec()));
        }
        assert_eq!(seen.len() as u128, (1..=4).map(|k| gaussian_binomial(3, 4, k)).sum::<u128>());
    }

    #[test]
    fn order_is_by_dimension_then_pattern() {
        let f = PrimeField::new(2).unwrap();
        let lines: Vec<_> = SubspaceIter::new(f, 2).collect();
        assert_eq!(lines, vec![vec![vec![1, 0]], vec![vec![1, 1]], vec![vec![0, 1]], vec![vec![1, 0], vec![0, 1]]]);
    }
}
