//! Prime fields, extension fields over them, and dense matrices.
//!
//! Every matrix in the crate lives over a [`PrimeField`]. Extension fields are
//! only used to draw random elements, which are then pushed back down to the
//! base field through [`FieldExt::embed`].

use std::fmt;

use rand::Rng;

use crate::Error;

/// A field element, always stored reduced into `[0, q)`.
pub type Elem = u32;

/// Largest admissible field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// The prime field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self, Error> {
        if !(2..=MAX_ORDER).contains(&q) || !is_prime(q) {
            return Err(Error::NotPrime(q as u64));
        }
        Ok(PrimeField { q })
    }

    pub fn order(self) -> u32 {
        self.q
    }

    pub fn reduce(self, v: i64) -> Elem {
        v.rem_euclid(self.q as i64) as Elem
    }

    #[inline]
    pub fn add(self, a: Elem, b: Elem) -> Elem {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: Elem, b: Elem) -> Elem {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: Elem) -> Elem {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: Elem, b: Elem) -> Elem {
        ((a as u64 * b as u64) % self.q as u64) as Elem
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero in F_{}", self.q);
        let (mut r0, mut r1) = (self.q as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        self.reduce(t0)
    }

    pub fn div(self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(self, mut a: Elem, mut e: u64) -> Elem {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Elem {
        rng.gen_range(0..self.q)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> Elem {
        rng.gen_range(1..self.q)
    }

    /// `dst += factor * src`, entrywise.
    #[inline]
    pub fn axpy(self, dst: &mut [Elem], factor: Elem, src: &[Elem]) {
        if factor == 0 {
            return;
        }
        let q = self.q as u64;
        let f = factor as u64;
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = ((*d as u64 + f * s as u64) % q) as Elem;
            }
        }
    }

    pub fn scale(self, v: &mut [Elem], factor: Elem) {
        for x in v.iter_mut() {
            *x = self.mul(*x, factor);
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomials over a prime field as coefficient vectors, lowest degree
/// first, with no trailing zeros.
mod poly {
    use super::{Elem, PrimeField};

    pub fn trim(mut p: Vec<Elem>) -> Vec<Elem> {
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    pub fn rem(f: PrimeField, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = f.inv(m[dm]);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = f.mul(*r.last().unwrap(), lead_inv);
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, mi));
            }
            r = trim(r);
        }
        r
    }

    pub fn mul(f: PrimeField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(ai, bj));
            }
        }
        trim(out)
    }

    pub fn mulmod(f: PrimeField, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
        rem(f, &mul(f, a, b), m)
    }

    pub fn powmod(f: PrimeField, base: &[Elem], mut e: u64, m: &[Elem]) -> Vec<Elem> {
        let mut acc = vec![1];
        let mut b = rem(f, base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(f, &acc, &b, m);
            }
            b = mulmod(f, &b, &b, m);
            e >>= 1;
        }
        acc
    }

    pub fn sub(f: PrimeField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let n = a.len().max(b.len());
        let out = (0..n).map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect();
        trim(out)
    }

    pub fn gcd(f: PrimeField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        a
    }
}

/// Irreducibility of a monic polynomial by exhaustive trial division against
/// every monic polynomial of degree at most half its degree.
fn irreducible_by_trial_division(f: PrimeField, m: &[Elem]) -> bool {
    let g = m.len() - 1;
    let q = f.order() as u64;
    for d in 1..=g / 2 {
        let count = q.pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                divisor.push((c % q) as Elem);
                c /= q;
            }
            divisor.push(1);
            if poly::rem(f, m, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Rabin's irreducibility test for a monic polynomial of degree `g`.
fn irreducible_by_rabin(f: PrimeField, m: &[Elem]) -> bool {
    let g = (m.len() - 1) as u64;
    let q = f.order() as u64;
    let x = vec![0, 1];
    // x^(q^k) mod m by k successive q-th powers.
    let frobenius = |k: u64| {
        let mut acc = x.clone();
        for _ in 0..k {
            acc = poly::powmod(f, &acc, q, m);
        }
        acc
    };
    if poly::sub(f, &frobenius(g), &x) != Vec::<Elem>::new() {
        return false;
    }
    let mut n = g;
    let mut r = 2;
    let mut prime_divisors = Vec::new();
    while r * r <= n {
        if n % r == 0 {
            prime_divisors.push(r);
            while n % r == 0 {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        prime_divisors.push(n);
    }
    prime_divisors.into_iter().all(|r| {
        let h = poly::sub(f, &frobenius(g / r), &x);
        poly::gcd(f, &h, m).len() == 1
    })
}

/// Trial division stays exhaustive while the number of candidate divisors is
/// below this bound; beyond it Rabin's test is used.
const TRIAL_DIVISION_BUDGET: u64 = 1 << 18;

pub fn is_irreducible(f: PrimeField, monic: &[Elem]) -> bool {
    let g = monic.len() - 1;
    if g == 1 {
        return true;
    }
    let q = f.order() as u64;
    let candidates: u64 = (1..=g / 2).map(|d| q.saturating_pow(d as u32)).fold(0u64, |a, b| a.saturating_add(b));
    if g <= 8 && candidates <= TRIAL_DIVISION_BUDGET {
        irreducible_by_trial_division(f, monic)
    } else {
        irreducible_by_rabin(f, monic)
    }
}

/// The extension `F_{q^g} = F_q[x]/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldExt {
    base: PrimeField,
    /// Monic modulus, lowest degree first, length `g + 1`.
    modulus: Vec<Elem>,
    companion: DenseMatrix,
}

impl FieldExt {
    /// Builds `F_{q^g}` with the lexicographically least monic irreducible
    /// modulus, comparing coefficient tuples from `x^{g-1}` down to `x^0`.
    pub fn build(q: u32, g: usize) -> Result<Self, Error> {
        assert!(g >= 1, "extension degree must be positive");
        let base = PrimeField::new(q)?;
        let qq = q as u64;
        let mut code = 0u64;
        loop {
            let mut modulus = Vec::with_capacity(g + 1);
            let mut c = code;
            for _ in 0..g {
                modulus.push((c % qq) as Elem);
                c /= qq;
            }
            modulus.push(1);
            if is_irreducible(base, &modulus) {
                let companion = companion_matrix(base, &modulus);
                return Ok(FieldExt { base, modulus, companion });
            }
            code += 1;
        }
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    pub fn companion(&self) -> &DenseMatrix {
        &self.companion
    }

    pub fn zero(&self) -> Vec<Elem> {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> Vec<Elem> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut r = poly::mulmod(self.base, a, b, &self.modulus);
        r.resize(self.degree(), 0);
        r
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Elem> {
        (0..self.degree()).map(|_| self.base.random(rng)).collect()
    }

    /// The regular representation `Σ_j x_j C^j`, with `C` the companion matrix.
    pub fn embed(&self, x: &[Elem]) -> DenseMatrix {
        let g = self.degree();
        let mut out = DenseMatrix::zeros(self.base, g, g);
        let mut power = DenseMatrix::identity(self.base, g);
        for (j, &xj) in x.iter().enumerate() {
            if j > 0 {
                power = power.mul(&self.companion);
            }
            if xj != 0 {
                out.add_scaled(&power, xj);
            }
        }
        out
    }
}

/// Multiplication by `x` on the basis `1, x, ..., x^{g-1}`, acting on
/// coefficient column vectors: subdiagonal ones, last column the negated tail
/// of the modulus.
fn companion_matrix(f: PrimeField, monic: &[Elem]) -> DenseMatrix {
    let g = monic.len() - 1;
    let mut c = DenseMatrix::zeros(f, g, g);
    for i in 1..g {
        c.set(i, i - 1, 1);
    }
    for (i, &a) in monic[..g].iter().enumerate() {
        c.set(i, g - 1, f.neg(a));
    }
    c
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Result of [`DenseMatrix::reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub rank: usize,
    /// The pivot columns of the input, which span its column space.
    pub column_basis: DenseMatrix,
    /// Columns spanning the right null space.
    pub kernel_basis: DenseMatrix,
    pub pivot_columns: Vec<usize>,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        debug_assert!(data.iter().all(|&x| x < field.order()));
        DenseMatrix { field, rows, cols, data }
    }

    /// Builds a `n × vectors.len()` matrix with the given columns.
    pub fn from_columns(field: PrimeField, n: usize, vectors: &[Vec<Elem>]) -> Self {
        let mut m = Self::zeros(field, n, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), n);
            for (i, &x) in v.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
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

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    f.axpy(dst, a, other.row(k));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let acc = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % f.order() as u64);
                acc as Elem
            })
            .collect()
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &DenseMatrix, c: Elem) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.field.axpy(&mut self.data, c, &other.data);
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i][j] * a`.
    pub fn kron(&self, a: &DenseMatrix) -> DenseMatrix {
        let f = self.field;
        let (n, m) = (a.rows, a.cols);
        let mut out = Self::zeros(f, self.rows * n, self.cols * m);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if x == 0 {
                    continue;
                }
                for r in 0..n {
                    for c in 0..m {
                        out.set(i * n + r, j * m + c, f.mul(x, a.get(r, c)));
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.data[i * out.cols..i * out.cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * out.cols + self.cols..(i + 1) * out.cols].copy_from_slice(other.row(i));
        }
        out
    }

    pub fn vstack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        DenseMatrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> DenseMatrix {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out.set(i, k, self.get(i, j));
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if p != r {
                for k in 0..cols {
                    self.data.swap(p * cols + k, r * cols + k);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            f.scale(&mut self.data[r * cols..(r + 1) * cols], inv);
            let pivot_row = self.data[r * cols..(r + 1) * cols].to_vec();
            for i in 0..self.rows {
                if i != r {
                    let x = self.data[i * cols + c];
                    if x != 0 {
                        f.axpy(&mut self.data[i * cols..(i + 1) * cols], f.neg(x), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Rank, a column-space basis and a null-space basis.
    pub fn reduce(&self) -> Reduction {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let kernel: Vec<Vec<Elem>> = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(m.get(r, free));
                }
                v
            })
            .collect();
        Reduction {
            rank: pivots.len(),
            column_basis: self.select_columns(&pivots),
            kernel_basis: DenseMatrix::from_columns(f, self.cols, &kernel),
            pivot_columns: pivots,
        }
    }

    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        self.reduce().kernel_basis.columns()
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over F_{} [", self.rows, self.cols, self.field.q)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// A subspace of `F_q^n` held as a reduced row echelon basis, grown one
/// vector at a time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    field: PrimeField,
    n: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: PrimeField, n: usize) -> Self {
        Echelon { field, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by(field: PrimeField, n: usize, vectors: impl IntoIterator<Item = Vec<Elem>>) -> Self {
        let mut e = Self::new(field, n);
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Clears the pivot coordinates of `v` against the basis.
    pub fn reduce_vec(&self, v: &mut [Elem]) {
        let f = self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let x = v[p];
            if x != 0 {
                f.axpy(v, f.neg(x), row);
            }
        }
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce_vec(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        assert_eq!(v.len(), self.n);
        self.reduce_vec(&mut v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(v[p]);
        f.scale(&mut v, inv);
        for row in &mut self.rows {
            let x = row[p];
            if x != 0 {
                f.axpy(row, f.neg(x), &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn contains_all(&self, other: &Echelon) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }
}
