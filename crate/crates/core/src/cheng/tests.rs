use super::*;
use crate::field::FieldExt;
use crate::fixtures;
use crate::grmat::{int, rat};
use crate::hn_core::{hn_filtration_at, SubspaceIter};
use proptest::prelude::*;
use rand::Rng;

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

fn mat(rows: usize, cols: usize, data: &[Elem]) -> DenseMatrix {
    DenseMatrix::from_rows(f2(), rows, cols, data.to_vec())
}

/// Coefficient matrices of `A = Σ λ_k ⊗ A_k` in the `(1, 1)` blow-up.
fn element(coeffs: &[Elem]) -> BlowUpElement {
    BlowUpElement { lambdas: coeffs.iter().map(|&c| mat(1, 1, &[c])).collect() }
}

fn lower_left_space() -> MatrixSpace {
    MatrixSpace::new(f2(), 2, 2, vec![mat(2, 2, &[1, 0, 0, 0]), mat(2, 2, &[0, 0, 1, 0])]).unwrap()
}

/// The minimal maximizer of `dim U − dim 𝒜U`, by enumerating all subspaces.
fn shrunk_oracle(space: &MatrixSpace) -> Echelon {
    let n = space.cols();
    let f = space.field();
    let mut best = i64::MIN;
    let mut meet: Option<Echelon> = None;
    for basis in SubspaceIter::with_dims(f, n, 0..=n) {
        let u = Echelon::spanned_by(f, n, basis);
        let d = space.discrepancy(&u);
        if d > best {
            best = d;
            meet = Some(u);
        } else if d == best {
            let m = meet.take().unwrap();
            meet = Some(if m.contains_all(&u) {
                u
            } else if u.contains_all(&m) {
                m
            } else {
                intersect(&m, &u)
            });
        }
    }
    meet.unwrap()
}

fn intersect(a: &Echelon, b: &Echelon) -> Echelon {
    let f = a.field();
    let n = a.ambient_dim();
    let mut out = Echelon::new(f, n);
    for basis in SubspaceIter::with_dims(f, n, 1..=1) {
        if a.contains(&basis[0]) && b.contains(&basis[0]) {
            out.insert(basis[0].clone());
        }
    }
    out
}

fn random_space(rng: &mut impl Rng, rows: usize, cols: usize) -> MatrixSpace {
    let f = f2();
    let count = rng.gen_range(0..=3.min(rows * cols));
    loop {
        let basis: Vec<DenseMatrix> = (0..count)
            .map(|_| DenseMatrix::from_rows(f, rows, cols, (0..rows * cols).map(|_| f.random(rng)).collect()))
            .collect();
        if let Ok(s) = MatrixSpace::new(f, rows, cols, basis) {
            return s;
        }
    }
}

fn random_stacked(rng: &mut impl Rng, cols: usize) -> MatrixSpace {
    let f = f2();
    let count = rng.gen_range(1..=4);
    let mut blocks = Vec::new();
    while blocks.len() < count {
        let rows = rng.gen_range(1..=cols);
        let b = DenseMatrix::from_rows(f, rows, cols, (0..rows * cols).map(|_| f.random(rng)).collect());
        if !b.is_zero() {
            // Repeats exercise the grouping of identical blocks.
            if rng.gen_bool(0.3) {
                blocks.push(b.clone());
            }
            blocks.push(b);
        }
    }
    MatrixSpace::stacked(f, cols, blocks).unwrap()
}

/// `k^p ⊗ Z` written out in `k^{pN}`.
fn tensor(p: usize, z: &Echelon) -> Echelon {
    let n = z.ambient_dim();
    let mut out = Echelon::new(z.field(), p * n);
    for a in 0..p {
        for v in z.basis() {
            let mut w = vec![0; p * n];
            w[a * n..(a + 1) * n].copy_from_slice(v);
            out.insert(w);
        }
    }
    out
}

fn shrunk_with_retries(space: &MatrixSpace, seed: u64) -> Option<Echelon> {
    (0..8).find_map(|i| {
        let r = 1usize << (i / 2);
        shrunk_subspace_random(space, r, seed.wrapping_add(i as u64))
            .map(|b| Echelon::spanned_by(space.field(), space.cols(), b))
    })
}

#[test]
fn wong_of_invertible_is_zero() {
    let space = MatrixSpace::new(f2(), 2, 2, vec![mat(2, 2, &[1, 0, 0, 1]), mat(2, 2, &[0, 1, 0, 0])]).unwrap();
    let blow = BlowUp::new(space, 1, 1);
    let state = wong_limit(&element(&[1, 0]), &blow);
    assert_eq!(state.limit_dim(), 0);
    assert_eq!(state.kernel_dim, 0);
    assert!(state.contained_in_image());
}

#[test]
fn wong_of_the_lower_left_space() {
    let blow = BlowUp::new(lower_left_space(), 1, 1);
    let state = wong_limit(&element(&[1, 0]), &blow);
    assert_eq!(state.limit_dim(), 0);
    assert!(state.contained_in_image());
    assert_eq!(state.source.basis(), &[vec![0, 1]]);
    assert_eq!(shrunk_oracle(&lower_left_space()).basis(), &[vec![0, 1]]);
    let found = shrunk_with_retries(&lower_left_space(), 7).unwrap();
    assert_eq!(found.basis(), &[vec![0, 1]]);
    // Blow-up size 2 as well.
    let found = (0..8).find_map(|s| shrunk_subspace_random(&lower_left_space(), 2, s)).unwrap();
    assert_eq!(found, vec![vec![0, 1]]);
}

#[test]
fn scalar_and_zero_spaces() {
    let ident = MatrixSpace::new(f2(), 2, 2, vec![mat(2, 2, &[1, 0, 0, 1])]).unwrap();
    let state = wong_limit(&element(&[1]), &BlowUp::new(ident.clone(), 1, 1));
    assert_eq!(state.limit_dim(), 0);
    assert_eq!(state.source.dim(), 0);
    assert_eq!(shrunk_with_retries(&ident, 1).unwrap().dim(), 0);
    let zero = MatrixSpace::new(f2(), 2, 3, Vec::new()).unwrap();
    assert_eq!(shrunk_with_retries(&zero, 1).unwrap().dim(), 3);
    assert_eq!(shrunk_oracle(&zero).dim(), 3);
}

#[test]
fn dependent_bases_are_rejected() {
    let a = mat(2, 2, &[1, 0, 0, 1]);
    assert!(matches!(
        MatrixSpace::new(f2(), 2, 2, vec![a.clone(), a]),
        Err(Error::DegenerateBasis { given: 2, rank: 1 })
    ));
    assert!(MatrixSpace::stacked(f2(), 2, vec![mat(1, 2, &[0, 0])]).is_err());
}

#[test]
fn extension_degrees() {
    assert_eq!(extension_degree(2, 1, 0), 1);
    assert_eq!(extension_degree(2, 2, 0), 1);
    assert_eq!(extension_degree(2, 4, 0), 4);
    assert_eq!(extension_degree(3, 9, 2), 6);
}

#[test]
fn structured_wong_matches_the_written_out_blow_up() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..50 {
        let cols = rng.gen_range(1..=3);
        let space = if case % 2 == 0 {
            random_stacked(&mut rng, cols)
        } else {
            let rows = rng.gen_range(1..=3);
            random_space(&mut rng, rows, cols)
        };
        let (p, q) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let ext = FieldExt::build(2, 1).unwrap();
        let blow = BlowUp::new(space.clone(), p, q);
        let a = BlowUpElement::random(&blow, &ext, 1, &mut rng);
        let state = wong_limit(&a, &blow);
        let (naive, inside) = wong_limit_naive(&a.to_dense(&blow), &blow.dense_basis());
        let expected = tensor(p, &state.image);
        assert_eq!(naive.dim(), expected.dim(), "case {case}");
        assert!(expected.contains_all(&naive), "case {case}");
        assert_eq!(inside, state.contained_in_image(), "case {case}");
        assert!(
            state.steps <= (p * space.rows()).min(q * space.cols()) + 1,
            "case {case}: steps {} p {p} q {q} N {} N2 {} dim {}",
            state.steps,
            space.rows(),
            space.cols(),
            space.dim()
        );
    }
}

#[test]
fn shrunk_subspaces_match_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..50 {
        let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let space = random_space(&mut rng, rows, cols);
        let found = shrunk_with_retries(&space, case).expect("eight retries");
        assert_eq!(found, shrunk_oracle(&space), "case {case}");
    }
}

#[test]
fn blow_up_scales_the_shrunk_subspace() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..10 {
        let space = random_space(&mut rng, 2, 2);
        let small = shrunk_oracle(&space);
        let blow = BlowUp::new(space, 2, 2);
        let big = MatrixSpace::new(f2(), blow.rows(), blow.cols(), blow.dense_basis()).unwrap();
        assert_eq!(shrunk_oracle(&big), tensor(2, &small), "case {case}");
    }
}

fn unit_grid(n: i64) -> Grid {
    Grid::regular(Degree::ints(0, 0), Degree::ints(n, n), int(1))
}

#[test]
fn cross_matrix_space() {
    let alpha = Degree::ints(0, 1);
    let a = build_a_alpha(&fixtures::cross(), &unit_grid(2), &alpha).unwrap();
    assert_eq!(a.p0, 2);
    assert_eq!(a.degrees.len(), 5);
    // Only (0,2), (1,1) and (1,2) see a nonzero map.
    assert_eq!(a.space.dim(), 3);
    assert_eq!(a.q0, 3);
    let top = build_a_alpha(&fixtures::cross(), &unit_grid(2), &Degree::ints(2, 2));
    assert!(matches!(top, Err(Error::ZeroModule(_))));
    let corner = build_a_alpha(&fixtures::stable(), &unit_grid(1), &Degree::ints(1, 1)).unwrap();
    assert_eq!((corner.q0, corner.space.dim()), (0, 0));
    assert!(build_a_alpha(&fixtures::cross(), &unit_grid(2), &Degree::new(rat(1, 2), int(0))).is_err());
}

#[test]
fn cross_factors() {
    let alpha = Degree::ints(0, 1);
    let hn = hn_cheng(&fixtures::cross(), &unit_grid(2), &alpha, &ChengConfig::default()).unwrap();
    let slopes: Vec<Rat> = hn.factors.iter().map(|f| f.slope).collect();
    assert_eq!(slopes, vec![rat(1, 2), rat(1, 3)]);
    assert_eq!(hn, hn_filtration_at(&fixtures::cross(), &alpha).unwrap());
}

#[test]
fn stable_is_semistable() {
    let alpha = Degree::ints(0, 0);
    let hn =
        hn_cheng(&fixtures::stable(), &fixtures::stable().induced_grid(), &alpha, &ChengConfig::default()).unwrap();
    assert_eq!(hn.factors.len(), 1);
    assert_eq!(hn.factors[0].slope, rat(2, 9));
    assert_eq!(hn.factors[0].thickness(), 2);
}

#[test]
fn thickness_one_is_one_factor() {
    let v = fixtures::vertical();
    let alpha = Degree::ints(0, 0);
    let hn = hn_cheng(&v, &unit_grid(3), &alpha, &ChengConfig::default()).unwrap();
    assert_eq!(hn, hn_filtration_at(&v, &alpha).unwrap());
    assert_eq!(hn.factors.len(), 1);
}

#[test]
fn integer_weights_are_reduced() {
    assert_eq!(integer_weights(&[rat(1, 2), rat(1, 4), int(0), int(1)]), vec![2, 1, 0, 4]);
    assert_eq!(integer_weights(&[int(2), int(4)]), vec![1, 2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn agrees_with_brute_force(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3]), t in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = PrimeField::new(q).unwrap();
        let m = fixtures::random_uniquely_generated(f, t, 3, 1, &mut rng);
        let grid = unit_grid(3);
        let cfg = ChengConfig { seed, ..ChengConfig::default() };
        for alpha in grid.points().filter(|b| m.dim_at(b) > 0).take(3) {
            let hn = hn_cheng(&m, &grid, &alpha, &cfg).unwrap();
            prop_assert_eq!(hn, hn_filtration_at(&m, &alpha).unwrap());
        }
    }
}
