use std::collections::HashMap;
use std::ops::Range;

use rand::Rng;

use crate::field::{DenseMatrix, Echelon, Elem, FieldExt, PrimeField};
use crate::Error;

/// A subspace `𝒜 ⊆ k^{N×N'}` given by a basis.
///
/// When every basis matrix vanishes outside its own block of rows and the
/// blocks are disjoint, the space is a direct sum over row blocks and Wong
/// iterations split into one small system per block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSpace {
    field: PrimeField,
    rows: usize,
    cols: usize,
    basis: Vec<DenseMatrix>,
    blocks: Option<Vec<Range<usize>>>,
}

fn row_basis(m: &DenseMatrix) -> Vec<Vec<Elem>> {
    let mut r = m.clone();
    let rank = r.rref_in_place().len();
    (0..rank).map(|i| r.row(i).to_vec()).collect()
}

/// The linear map `k^n → k^n / span(e)` in coordinates of the non-pivot
/// positions of `e`.
pub(super) fn quotient_map(e: &Echelon) -> DenseMatrix {
    let n = e.ambient_dim();
    let f = e.field();
    let free: Vec<usize> = (0..n).filter(|c| e.pivots().binary_search(c).is_err()).collect();
    let mut r = DenseMatrix::zeros(f, free.len(), n);
    for (k, &c) in free.iter().enumerate() {
        r.set(k, c, 1);
        for (row, &p) in e.basis().iter().zip(e.pivots()) {
            if row[c] != 0 {
                r.set(k, p, f.neg(row[c]));
            }
        }
    }
    r
}

impl MatrixSpace {
    /// Errors with [`Error::DegenerateBasis`] if the matrices are dependent.
    pub fn new(field: PrimeField, rows: usize, cols: usize, basis: Vec<DenseMatrix>) -> Result<Self, Error> {
        for b in &basis {
            assert_eq!((b.rows(), b.cols()), (rows, cols), "basis matrix of the wrong shape");
        }
        let flat = Echelon::spanned_by(field, rows * cols, basis.iter().map(|b| b.entries().to_vec()));
        if flat.dim() < basis.len() {
            return Err(Error::DegenerateBasis { given: basis.len(), rank: flat.dim() });
        }
        Ok(MatrixSpace { field, rows, cols, basis, blocks: None })
    }

    /// The space of block columns `(λ_1 S_1; …; λ_k S_k)`. Zero blocks are
    /// rejected since they break independence.
    pub fn stacked(field: PrimeField, cols: usize, blocks: Vec<DenseMatrix>) -> Result<Self, Error> {
        let rows: usize = blocks.iter().map(|b| b.rows()).sum();
        let mut basis = Vec::with_capacity(blocks.len());
        let mut ranges = Vec::with_capacity(blocks.len());
        let mut at = 0;
        for b in &blocks {
            assert_eq!(b.cols(), cols);
            if b.is_zero() {
                let rank = blocks.iter().filter(|b| !b.is_zero()).count();
                return Err(Error::DegenerateBasis { given: blocks.len(), rank });
            }
            let mut m = DenseMatrix::zeros(field, rows, cols);
            for i in 0..b.rows() {
                for j in 0..cols {
                    m.set(at + i, j, b.get(i, j));
                }
            }
            basis.push(m);
            ranges.push(at..at + b.rows());
            at += b.rows();
        }
        Ok(MatrixSpace { field, rows, cols, basis, blocks: Some(ranges) })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn basis(&self) -> &[DenseMatrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `𝒜Y = Σ_k A_k Y`.
    pub fn image(&self, y: &Echelon) -> Echelon {
        Echelon::spanned_by(
            self.field,
            self.rows,
            self.basis.iter().flat_map(|a| y.basis().iter().map(move |v| a.mul_vec(v))),
        )
    }

    /// `dim U − dim 𝒜U`.
    pub fn discrepancy(&self, u: &Echelon) -> i64 {
        u.dim() as i64 - self.image(u).dim() as i64
    }

    fn block(&self, k: usize) -> DenseMatrix {
        let r = self.blocks.as_ref().expect("stacked space")[k].clone();
        let data = r.flat_map(|i| self.basis[k].row(i).to_vec()).collect::<Vec<_>>();
        DenseMatrix::from_rows(self.field, data.len() / self.cols.max(1), self.cols, data)
    }
}

/// The blow-up `k^{p×q} ⊗ 𝒜 ⊆ k^{pN×qN'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUp {
    pub space: MatrixSpace,
    pub p: usize,
    pub q: usize,
}

impl BlowUp {
    pub fn new(space: MatrixSpace, p: usize, q: usize) -> Self {
        assert!(p >= 1 && q >= 1, "blow-up sizes must be positive");
        BlowUp { space, p, q }
    }

    pub fn rows(&self) -> usize {
        self.p * self.space.rows
    }

    pub fn cols(&self) -> usize {
        self.q * self.space.cols
    }

    /// The basis `E_ab ⊗ A_k`, written out.
    pub fn dense_basis(&self) -> Vec<DenseMatrix> {
        let f = self.space.field;
        let mut out = Vec::new();
        for a in 0..self.p {
            for b in 0..self.q {
                let mut e = DenseMatrix::zeros(f, self.p, self.q);
                e.set(a, b, 1);
                out.extend(self.space.basis.iter().map(|m| e.kron(m)));
            }
        }
        out
    }
}

/// An element `Σ_k Λ_k ⊗ A_k` of a blow-up, held by its coefficient
/// matrices `Λ_k ∈ k^{p×q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUpElement {
    pub lambdas: Vec<DenseMatrix>,
}

impl BlowUpElement {
    pub fn to_dense(&self, blow: &BlowUp) -> DenseMatrix {
        let f = blow.space.field;
        let mut out = DenseMatrix::zeros(f, blow.rows(), blow.cols());
        for (l, a) in self.lambdas.iter().zip(&blow.space.basis) {
            out = out.add(&l.kron(a));
        }
        out
    }

    /// `Σ_{a,b,k} φ(X_abk) ⊗ E_ab ⊗ A_k` with `X_abk` uniform in `L^{r×r}`
    /// and `φ` the regular representation of `L` over `k`. The result lies
    /// in the `(rgp, rgq)` blow-up, `g = [L : k]`.
    pub fn random<R: Rng + ?Sized>(blow: &BlowUp, ext: &FieldExt, r: usize, rng: &mut R) -> Self {
        let f = blow.space.field;
        let g = ext.degree();
        let (p, q) = (blow.p, blow.q);
        let side = r * g;
        let lambdas = (0..blow.space.dim())
            .map(|_| {
                let mut lam = DenseMatrix::zeros(f, side * p, side * q);
                for a in 0..p {
                    for b in 0..q {
                        for s in 0..r {
                            for t in 0..r {
                                let x = ext.embed(&ext.random(rng));
                                for u in 0..g {
                                    for v in 0..g {
                                        lam.set((s * g + u) * p + a, (t * g + v) * q + b, x.get(u, v));
                                    }
                                }
                            }
                        }
                    }
                }
                lam
            })
            .collect();
        BlowUpElement { lambdas }
    }
}

/// Limit of the Wong sequence `W^i = 𝒜(A^{-1}(W^{i-1}))` in a blow-up.
///
/// Every `W^i` has the form `k^p ⊗ Z` with `Z ⊆ k^N`; the limit is stored as
/// `Z`, and its preimage `A^{-1}(W)` through the span `Y ⊆ k^{N'}` of its
/// `N'`-blocks.
#[derive(Clone, Debug)]
pub struct WongState {
    pub steps: usize,
    pub image: Echelon,
    pub source: Echelon,
    pub kernel_dim: usize,
    pub preimage_dim: usize,
    p: usize,
}

impl WongState {
    pub fn limit_dim(&self) -> usize {
        self.p * self.image.dim()
    }

    /// `Wong(A, 𝒜) ⊆ Im A`, i.e. `dim A^{-1}(W) = dim ker A + dim W`.
    pub fn contained_in_image(&self) -> bool {
        self.preimage_dim == self.kernel_dim + self.limit_dim()
    }
}

/// Row blocks of a stacked space grouped by equal block matrices, with the
/// row basis of the stacked coefficient matrices of each group.
struct Group {
    matrix: DenseMatrix,
    lambda_rows: Vec<Vec<Elem>>,
}

fn groups(a: &BlowUpElement, space: &MatrixSpace) -> Vec<Group> {
    let mut index: HashMap<DenseMatrix, usize> = HashMap::new();
    let mut out: Vec<(DenseMatrix, Vec<usize>)> = Vec::new();
    for k in 0..space.basis.len() {
        let m = space.block(k);
        let g = *index.entry(m.clone()).or_insert_with(|| {
            out.push((m, Vec::new()));
            out.len() - 1
        });
        out[g].1.push(k);
    }
    out.into_iter()
        .map(|(matrix, members)| {
            let stacked = members[1..].iter().fold(a.lambdas[members[0]].clone(), |acc, &k| acc.vstack(&a.lambdas[k]));
            Group { matrix, lambda_rows: row_basis(&stacked) }
        })
        .collect()
}

fn kernel_of_rows(f: PrimeField, rows: Vec<Vec<Elem>>, n: usize) -> Vec<Vec<Elem>> {
    if rows.is_empty() {
        return (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
    }
    let count = rows.len();
    DenseMatrix::from_rows(f, count, n, rows.concat()).kernel()
}

fn blocks_span(f: PrimeField, n: usize, vectors: &[Vec<Elem>]) -> Echelon {
    let mut y = Echelon::new(f, n);
    'outer: for v in vectors {
        for chunk in v.chunks(n) {
            if y.dim() == n {
                break 'outer;
            }
            y.insert(chunk.to_vec());
        }
    }
    y
}

/// Wong limit of `(A, 𝒜^{p,q})` for `A` given by its coefficients.
///
/// Images use the blow-up structure `𝒜^{p,q} U = k^p ⊗ 𝒜Y`. Preimages
/// solve `(I_p ⊗ R_Z) A u = 0` with `R_Z` the quotient map by `Z`; on a
/// stacked space this splits into `rowspace(Λ) ⊗ rowspace(R_Z S)` per
/// block, with identical blocks sharing one system.
pub fn wong_limit(a: &BlowUpElement, blow: &BlowUp) -> WongState {
    let space = &blow.space;
    let f = space.field;
    let (n, n_src) = (space.rows, space.cols);
    let width = blow.q * n_src;
    let grouped = space.blocks.as_ref().map(|_| groups(a, space));
    let preimage = |y: &Echelon| -> Vec<Vec<Elem>> {
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        match &grouped {
            Some(groups) => {
                for g in groups {
                    let sy = Echelon::spanned_by(f, g.matrix.rows(), y.basis().iter().map(|v| g.matrix.mul_vec(v)));
                    let reduced = row_basis(&quotient_map(&sy).mul(&g.matrix));
                    for l in &g.lambda_rows {
                        for m in &reduced {
                            let mut v = vec![0; width];
                            for (b, &lb) in l.iter().enumerate() {
                                if lb != 0 {
                                    for (j, &mj) in m.iter().enumerate() {
                                        v[b * n_src + j] = f.mul(lb, mj);
                                    }
                                }
                            }
                            rows.push(v);
                        }
                    }
                }
            }
            None => {
                let r = quotient_map(&space.image(y));
                let mut c = DenseMatrix::zeros(f, blow.p * r.rows(), width);
                for (l, ak) in a.lambdas.iter().zip(&space.basis) {
                    c = c.add(&l.kron(&r.mul(ak)));
                }
                rows.extend(row_basis(&c));
            }
        }
        kernel_of_rows(f, rows, width)
    };
    let mut y = Echelon::new(f, n_src);
    let mut image = Echelon::new(f, n);
    let mut u = preimage(&y);
    let kernel_dim = u.len();
    let mut steps = 0;
    // Preimages only depend on `Z = 𝒜Y`, so the sequence is stable as soon
    // as `Z` is.
    loop {
        steps += 1;
        y = blocks_span(f, n_src, &u);
        let next = space.image(&y);
        if next.dim() == image.dim() {
            break;
        }
        image = next;
        u = preimage(&y);
    }
    WongState { steps, image, source: y, kernel_dim, preimage_dim: u.len(), p: blow.p }
}

/// The Wong limit computed on the written-out blow-up, as a subspace of
/// `k^{pN}`, and whether it lies in `Im A`.
pub fn wong_limit_naive(a: &DenseMatrix, basis: &[DenseMatrix]) -> (Echelon, bool) {
    let f = a.field();
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Echelon::new(f, rows);
    loop {
        // A^{-1}(W): kernel of R_W A.
        let pre = kernel_of_rows(f, row_basis(&quotient_map(&w).mul(a)), cols);
        let next = Echelon::spanned_by(f, rows, basis.iter().flat_map(|m| pre.iter().map(move |v| m.mul_vec(v))));
        if next.dim() == w.dim() {
            break;
        }
        w = next;
    }
    let img = Echelon::spanned_by(f, rows, a.columns());
    let inside = img.contains_all(&w);
    (w, inside)
}

/// Degree of the extension used with blow-up size `r`:
/// `max(1, ⌈(log_q r)²⌉) + extra`.
pub fn extension_degree(q: u32, r: usize, extra: usize) -> usize {
    let l = (r as f64).ln() / (q as f64).ln();
    ((l * l - 1e-9).ceil().max(1.0) as usize) + extra
}

/// One randomized attempt at the minimal shrunk subspace of a blow-up
/// `𝒜^{p,q}` whose minimal shrunk subspace has the form `k^q ⊗ F`; returns
/// `F ⊆ k^{N'}`, or `None` when the random element fails the Wong test.
/// A returned subspace is certified.
pub fn shrunk_attempt<R: Rng + ?Sized>(
    blow: &BlowUp,
    r: usize,
    g_extra: usize,
    rng: &mut R,
) -> Result<Option<Echelon>, Error> {
    let f = blow.space.field;
    let g = extension_degree(f.order(), r, g_extra);
    let ext = FieldExt::build(f.order(), g)?;
    let a = BlowUpElement::random(blow, &ext, r, rng);
    let big = BlowUp::new(blow.space.clone(), r * g * blow.p, r * g * blow.q);
    let state = wong_limit(&a, &big);
    Ok(state.contained_in_image().then_some(state.source))
}

/// Minimal shrunk subspace of `𝒜` by the randomized Wong-sequence method
/// with blow-up size `blow_up`. `None` signals a failed draw, not an error.
pub fn shrunk_subspace_random(space: &MatrixSpace, blow_up: usize, seed: u64) -> Option<Vec<Vec<Elem>>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let blow = BlowUp::new(space.clone(), 1, 1);
    shrunk_attempt(&blow, blow_up, 2, &mut rng).ok().flatten().map(|e| e.basis().to_vec())
}
